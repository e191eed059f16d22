use std::sync::Arc;

use super::{Diagram, HoleType};
use crate::error::{Error, Result};
use crate::signatures::{GenId, Polygraph, Word};

/// A monoidal term built by the rules of the diagram-context logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Id(Word),
    Gen(GenId),
    Hole { var: String, ty: HoleType },
    Seq(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
}

impl Term {
    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn par(a: Term, b: Term) -> Term {
        Term::Par(Box::new(a), Box::new(b))
    }

    /// Domain and codomain of the term, checking sequential interfaces.
    pub fn interface(&self, sig: &Polygraph) -> Result<(Word, Word)> {
        match self {
            Term::Id(w) => Ok((w.clone(), w.clone())),
            Term::Gen(g) => {
                let g = sig.generators().get(g.index()).ok_or_else(|| Error::UnknownGenerator(format!("#{}", g.0)))?;
                Ok((g.arity.clone(), g.coarity.clone()))
            }
            Term::Hole { ty, .. } => Ok((ty.dom.clone(), ty.cod.clone())),
            Term::Seq(a, b) => {
                let (ad, ac) = a.interface(sig)?;
                let (bd, bc) = b.interface(sig)?;
                if ac != bd {
                    return Err(Error::InterfaceMismatch { expected: ac, found: bd });
                }
                Ok((ad, bc))
            }
            Term::Par(a, b) => {
                let (mut ad, mut ac) = a.interface(sig)?;
                let (bd, bc) = b.interface(sig)?;
                ad.extend(bd);
                ac.extend(bc);
                Ok((ad, ac))
            }
        }
    }

    /// Hole variables in textual (left-to-right) order.
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Hole { var, .. } => out.push(var),
            Term::Seq(a, b) | Term::Par(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            _ => {}
        }
    }

    /// Interprets the term as a diagram; holes are numbered in textual order.
    pub fn to_diagram(&self, sig: &Arc<Polygraph>) -> Result<Diagram> {
        match self {
            Term::Id(w) => Diagram::identity(sig, w),
            Term::Gen(g) => Diagram::of_generator(sig, *g),
            Term::Hole { ty, .. } => Diagram::hole(sig, ty.clone()),
            Term::Seq(a, b) => a.to_diagram(sig)?.compose(&b.to_diagram(sig)?),
            Term::Par(a, b) => a.to_diagram(sig)?.tensor(&b.to_diagram(sig)?),
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            Term::Gen(_) => 1,
            Term::Seq(a, b) | Term::Par(a, b) => a.generator_count() + b.generator_count(),
            _ => 0,
        }
    }
}
