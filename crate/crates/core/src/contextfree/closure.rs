use super::{CFMonoidalGrammar, Nonterminal, Rule};
use crate::diagrams::{same_sig, Diagram, DiagramContext, HoleType};
use crate::error::{Error, Result};
use crate::optics::{apply_functor, MonoidalFunctor};

fn prefixed(g: &CFMonoidalGrammar, p: &str) -> (Vec<Nonterminal>, Vec<Rule>) {
    let nts = g
        .nonterminals
        .iter()
        .map(|n| Nonterminal { name: format!("{p}.{}", n.name), interface: n.interface.clone() })
        .collect();
    let rules = g.rules.iter().map(|r| Rule { name: format!("{p}.{}", r.name), ..r.clone() }).collect();
    (nts, rules)
}

/// A grammar for the union of two languages with the same start interface:
/// a fresh start symbol with one unit production into each start symbol.
pub fn union(g1: &CFMonoidalGrammar, g2: &CFMonoidalGrammar) -> Result<CFMonoidalGrammar> {
    if !same_sig(&g1.target, &g2.target) {
        return Err(Error::PolygraphMismatch(g1.target.name.clone(), g2.target.name.clone()));
    }
    let t1 = g1.start_interface();
    let t2 = g2.start_interface();
    if t1.dom != t2.dom {
        return Err(Error::InterfaceMismatch { expected: t1.dom.clone(), found: t2.dom.clone() });
    }
    if t1.cod != t2.cod {
        return Err(Error::InterfaceMismatch { expected: t1.cod.clone(), found: t2.cod.clone() });
    }
    let mut g = CFMonoidalGrammar::new(&format!("{}_or_{}", g1.name, g2.name), g1.target.clone());
    let (n1, r1) = prefixed(g1, "l");
    let (n2, r2) = prefixed(g2, "r");
    let off = n1.len();
    g.nonterminals.extend(n1);
    g.nonterminals.extend(n2);
    g.rules.extend(r1);
    g.rules.extend(r2.into_iter().map(|r| Rule {
        lhs: r.lhs + off,
        args: r.args.iter().map(|a| a + off).collect(),
        ..r
    }));
    let start = g.add_nonterminal("start", t1.clone())?;
    g.start = start;
    for (name, target) in [("start.l", g1.start), ("start.r", g2.start + off)] {
        let hole = DiagramContext::new(Diagram::hole(&g.target, t1.clone())?);
        g.add_rule(name, start, vec![target], hole)?;
    }
    Ok(g)
}

/// The grammar whose language is the image of `g`'s under `f`: every rule is
/// postcomposed with the functor.
pub fn map_image(g: &CFMonoidalGrammar, f: &MonoidalFunctor) -> Result<CFMonoidalGrammar> {
    let mut out = CFMonoidalGrammar::new(&format!("{}.image", g.name), f.target.clone());
    for n in &g.nonterminals {
        let interface = HoleType { dom: f.map_word(&n.interface.dom)?, cod: f.map_word(&n.interface.cod)? };
        out.add_nonterminal(&n.name, interface)?;
    }
    out.start = g.start;
    for r in &g.rules {
        let body = DiagramContext::with_vars(apply_functor(f, r.body.diagram())?, r.body.vars().to_vec())?;
        out.add_rule(&r.name, r.lhs, r.args.clone(), body)?;
    }
    Ok(out)
}
