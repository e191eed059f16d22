use std::fmt;

use crate::signatures::{Sort, Word};

/// Displays a word of sorts as space separated names, `ε` when empty.
pub struct ShowWord<'a>(pub &'a [Sort]);

impl fmt::Display for ShowWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn at(line: usize, col: usize, msg: &str) -> String {
    if line == 0 {
        msg.to_string()
    } else {
        format!("{line}:{col}: {msg}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("undeclared sort `{0}`")]
    UndeclaredSort(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("interface mismatch: expected `{}`, found `{}`", ShowWord(.expected), ShowWord(.found))]
    InterfaceMismatch { expected: Word, found: Word },
    #[error("polygraph mismatch: `{0}` vs `{1}`")]
    PolygraphMismatch(String, String),
    #[error("state word has length {found}, diagram expects {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("hole variable `{0}` used more than once")]
    NonlinearVariable(String),
    #[error("unknown hole variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid permutation of {0} elements")]
    InvalidPermutation(usize),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("doctrine error: {0}")]
    Doctrine(String),
    #[error("grammar error: {0}")]
    Grammar(String),
    #[error("malformed contour: {0}")]
    MalformedContour(String),
    #[error("hole order is incompatible with the diagram: {0}")]
    HoleOrder(String),
    #[error("factorization widths differ at cuts {i} ({ki}) and {j} ({kj})")]
    WidthMismatch { i: usize, j: usize, ki: usize, kj: usize },
    #[error("enumeration exceeded the work limit of {0} nodes")]
    WorkLimit(usize),
    #[error("{}", at(*.line, *.col, .msg))]
    Syntax { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
