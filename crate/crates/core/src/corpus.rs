//! The example workspaces shipped with the crate.

use crate::error::Result;
use crate::workspace::Workspace;

pub const FILES: [(&str, &str); 5] = [
    ("parens.mon", include_str!("../corpus/parens.mon")),
    ("sierpinski.mon", include_str!("../corpus/sierpinski.mon")),
    ("tree.mon", include_str!("../corpus/tree.mon")),
    ("cfg-hyper.mon", include_str!("../corpus/cfg-hyper.mon")),
    ("unbraids.mon", include_str!("../corpus/unbraids.mon")),
];

pub fn source(file: &str) -> Option<&'static str> {
    FILES.iter().find(|(f, _)| *f == file).map(|(_, s)| *s)
}

pub fn load(file: &str) -> Result<Workspace> {
    let src = source(file).ok_or_else(|| crate::Error::UnknownName(file.to_string()))?;
    Workspace::parse(src)
}

/// Every corpus file in one workspace; names are unique across files.
pub fn all() -> Result<Workspace> {
    let src: String = FILES.iter().map(|(_, s)| *s).collect::<Vec<_>>().join("\n");
    Workspace::parse(&src)
}
