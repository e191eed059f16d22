//! String diagram languages: signatures, diagrams and contexts, regular and
//! context-free monoidal grammars, and the optical contour construction.

pub mod budget;
pub mod contextfree;
pub mod corpus;
pub mod diagrams;
pub mod doctrines;
pub mod error;
pub mod optics;
pub mod regular;
pub mod signatures;
pub mod workspace;

pub use budget::Budget;
pub use diagrams::{make_context, Diagram, DiagramContext, HoleType, Label, Slice, Term};
pub use error::{Error, Result};
pub use signatures::*;
