//! Normal forms for the cartesian and hypergraph doctrines.

mod cartesian;
mod hypergraph;

pub use cartesian::{term_forest_equal, to_term_forest, FTerm, TermForest};
pub use hypergraph::{certificate, hypergraph_iso, to_hypergraph, Certificate, Hyperedge, MultiPointedHypergraph};

use crate::diagrams::Diagram;
use crate::error::Result;
use crate::signatures::Doctrine;

/// A key identifying a morphism up to the equations of its doctrine.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalKey {
    Free(Diagram),
    Cartesian(TermForest),
    Hypergraph(Certificate),
}

pub fn normal_key(d: &Diagram) -> Result<NormalKey> {
    Ok(match d.sig().doctrine {
        Doctrine::Free => NormalKey::Free(d.canonical_form()),
        Doctrine::Cartesian => NormalKey::Cartesian(to_term_forest(d)?),
        Doctrine::Hypergraph => NormalKey::Hypergraph(certificate(&to_hypergraph(d)?)),
    })
}

/// Equality in the free category of the diagrams' doctrine.
pub fn equal_in_doctrine(a: &Diagram, b: &Diagram) -> Result<bool> {
    if a.sig().doctrine == Doctrine::Free {
        return a.equal(b);
    }
    if !crate::diagrams::same_sig(a.sig(), b.sig()) {
        return Err(crate::error::Error::PolygraphMismatch(a.sig().name.clone(), b.sig().name.clone()));
    }
    if a.dom() != b.dom() || a.cod() != b.cod() {
        return Ok(false);
    }
    Ok(normal_key(a)? == normal_key(b)?)
}
