use std::fmt::Write as _;

use crate::diagrams::{Diagram, Label};
use crate::error::{Error, Result};
use crate::signatures::{GenId, Polygraph, Structural, Word};

/// A term over the base generators and input variables `x1..xn` (0-based here).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FTerm {
    Var(usize),
    App(GenId, Vec<FTerm>),
}

impl FTerm {
    pub fn render(&self, sig: &Polygraph) -> String {
        let mut s = String::new();
        self.write(sig, &mut s);
        s
    }

    fn write(&self, sig: &Polygraph, out: &mut String) {
        match self {
            FTerm::Var(i) => {
                let _ = write!(out, "x{}", i + 1);
            }
            FTerm::App(g, args) => {
                out.push_str(&sig.gen(*g).name);
                if !args.is_empty() {
                    out.push('(');
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            out.push_str(", ");
                        }
                        a.write(sig, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

/// Normal form of a morphism of the free cartesian category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermForest {
    pub inputs: Word,
    pub outputs: Vec<FTerm>,
}

impl TermForest {
    pub fn render(&self, sig: &Polygraph) -> String {
        let parts: Vec<String> = self.outputs.iter().map(|t| t.render(sig)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Evaluates the diagram slice by slice on a frontier of terms.
pub fn to_term_forest(d: &Diagram) -> Result<TermForest> {
    let sig = d.sig();
    let mut frontier: Vec<FTerm> = (0..d.dom().len()).map(FTerm::Var).collect();
    for s in d.slices() {
        let g = match s.label {
            Label::Gen(g) => g,
            Label::Hole(_) => return Err(Error::Doctrine("term forests are defined for closed diagrams".into())),
        };
        let gen = sig.gen(g);
        let n = gen.arity.len();
        let args: Vec<FTerm> = frontier.drain(s.left..s.left + n).collect();
        let out: Vec<FTerm> = match &gen.structural {
            Some(Structural::Copy(_)) => vec![args[0].clone(), args[0].clone()],
            Some(Structural::Delete(_)) => vec![],
            Some(Structural::Swap(..)) => vec![args[1].clone(), args[0].clone()],
            Some(other) => {
                return Err(Error::Doctrine(format!("`{}` is not a cartesian structural generator", other.name())))
            }
            None => {
                if gen.coarity.len() != 1 {
                    return Err(Error::Doctrine(format!(
                        "cartesian generators must have coarity 1, `{}` has {}",
                        gen.name,
                        gen.coarity.len()
                    )));
                }
                vec![FTerm::App(g, args)]
            }
        };
        frontier.splice(s.left..s.left, out);
    }
    Ok(TermForest { inputs: d.dom().clone(), outputs: frontier })
}

/// Equality in the free cartesian category. Variables are positional, so
/// forests are compared directly.
pub fn term_forest_equal(a: &Diagram, b: &Diagram) -> Result<bool> {
    Ok(a.cod() == b.cod() && to_term_forest(a)? == to_term_forest(b)?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::signatures::{word, Doctrine};

    fn sig() -> Arc<Polygraph> {
        Polygraph::new("trees")
            .with_doctrine(Doctrine::Cartesian)
            .with_sort("t")
            .with_generator("f", &["t", "t"], &["t"])
            .with_generator("x", &[], &["t"])
            .build()
            .unwrap()
    }

    fn g(p: &Arc<Polygraph>, n: &str) -> Diagram {
        Diagram::generator(p, n).unwrap()
    }

    #[test]
    fn counit_law() {
        let p = sig();
        let id = Diagram::identity(&p, &word(&["t"])).unwrap();
        let d = g(&p, "copy[t]").compose(&id.tensor(&g(&p, "del[t]")).unwrap()).unwrap();
        let forest = to_term_forest(&d).unwrap();
        assert_eq!(forest.outputs, vec![FTerm::Var(0)]);
        assert!(term_forest_equal(&d, &id).unwrap());
    }

    #[test]
    fn nonlinear_unfolding() {
        let p = sig();
        let t = word(&["t"]);
        let id = Diagram::identity(&p, &t).unwrap();
        // copy[t] * id[t] ; id[t] * f ; f  computes f(x1, f(x1, x2))
        let d = g(&p, "copy[t]")
            .tensor(&id)
            .unwrap()
            .compose(&id.tensor(&g(&p, "f")).unwrap())
            .unwrap()
            .compose(&g(&p, "f"))
            .unwrap();
        assert_eq!(to_term_forest(&d).unwrap().render(&p), "(f(x1, f(x1, x2)))");
    }

    #[test]
    fn identity_forest() {
        let p = sig();
        let id = Diagram::identity(&p, &word(&["t"])).unwrap();
        assert_eq!(to_term_forest(&id).unwrap().outputs, vec![FTerm::Var(0)]);
    }

    #[test]
    fn coarity_two_rejected() {
        let p = Polygraph::new("bad")
            .with_doctrine(Doctrine::Cartesian)
            .with_sort("t")
            .with_generator("split", &["t"], &["t", "t"])
            .build()
            .unwrap();
        assert!(matches!(to_term_forest(&g(&p, "split")), Err(Error::Doctrine(_))));
    }
}
