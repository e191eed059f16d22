//! The `.mon` text format: a sequence of named blocks declaring polygraphs,
//! multigraphs, automata, grammars and pumping families.
//!
//! ```text
//! polygraph braid {
//!   sorts: w;
//!   gen over : w w -> w w;
//!   gen under : w w -> w w;
//! }
//! cfg unbraids over braid {
//!   nt S : w w -> w w;
//!   rule r0 : S := id[w w];
//!   rule r1 : S := over ; [S] ; under ; [S];
//! }
//! ```

mod lexer;
mod parser;
mod printer;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::contextfree::CFMonoidalGrammar;
use crate::diagrams::{Diagram, Label, Term};
use crate::error::{Error, Result};
use crate::regular::{accepts, Factorization, MonoidalAutomaton, RegularMonoidalGrammar};
use crate::signatures::{GenId, Multigraph, Polygraph};

pub use parser::{parse_diagram, parse_term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ItemKind {
    Polygraph,
    Multigraph,
    Automaton,
    Grammar,
    Regular,
    Family,
}

impl ItemKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ItemKind::Polygraph => "polygraph",
            ItemKind::Multigraph => "multigraph",
            ItemKind::Automaton => "automaton",
            ItemKind::Grammar => "cfg",
            ItemKind::Regular => "regular",
            ItemKind::Family => "family",
        }
    }
}

/// How a pumping family decides membership of a pumped diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Every slice is one of the two generators, spanning the whole
    /// interface, and they occur equally often.
    Balanced(GenId, GenId),
    Automaton(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyItem {
    pub diagram: Diagram,
    /// Repeated `n` times in the `n`-th member of the family.
    pub repeated: bool,
}

/// A parameterised factorization `n ↦ u₀ ⨾ u₁ⁿ ⨾ …` fed to the pumping check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub polygraph: Arc<Polygraph>,
    pub items: Vec<FamilyItem>,
    pub member: Membership,
    pub k: usize,
    pub max: usize,
}

impl Family {
    pub fn factorization(&self, n: usize) -> Result<Factorization> {
        let mut parts = Vec::new();
        for it in &self.items {
            let times = if it.repeated { n } else { 1 };
            parts.extend(std::iter::repeat_n(it.diagram.clone(), times));
        }
        Factorization::new(parts)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    pub polygraphs: BTreeMap<String, Arc<Polygraph>>,
    pub multigraphs: BTreeMap<String, Multigraph>,
    pub automata: BTreeMap<String, MonoidalAutomaton>,
    pub grammars: BTreeMap<String, CFMonoidalGrammar>,
    pub regulars: BTreeMap<String, RegularMonoidalGrammar>,
    pub families: BTreeMap<String, Family>,
    /// Declaration order.
    pub order: Vec<(ItemKind, String)>,
}

impl Workspace {
    pub fn parse(src: &str) -> Result<Workspace> {
        parser::parse_workspace(src)
    }

    pub fn load(path: &Path) -> Result<Workspace> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Syntax { line: 0, col: 0, msg: format!("{}: {e}", path.display()) })?;
        Workspace::parse(&src)
    }

    pub fn kind_of(&self, name: &str) -> Option<ItemKind> {
        self.order.iter().find(|(_, n)| n == name).map(|(k, _)| *k)
    }

    pub fn polygraph(&self, name: &str) -> Result<&Arc<Polygraph>> {
        self.polygraphs.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn automaton(&self, name: &str) -> Result<&MonoidalAutomaton> {
        self.automata.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn grammar(&self, name: &str) -> Result<&CFMonoidalGrammar> {
        self.grammars.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn regular(&self, name: &str) -> Result<&RegularMonoidalGrammar> {
        self.regulars.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn family(&self, name: &str) -> Result<&Family> {
        self.families.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Membership predicate of a family.
    pub fn member(&self, fam: &Family, d: &Diagram) -> Result<bool> {
        match &fam.member {
            Membership::Balanced(a, b) => Ok(balanced(d, *a, *b)),
            Membership::Automaton(x) => accepts(self.automaton(x)?, d),
        }
    }

    /// A term over the named polygraph, holes written `[x : a -> b]`.
    pub fn term(&self, polygraph: &str, src: &str) -> Result<Term> {
        parse_term(self.polygraph(polygraph)?, src)
    }

    pub fn diagram(&self, polygraph: &str, src: &str) -> Result<Diagram> {
        parse_diagram(self.polygraph(polygraph)?, src)
    }
}

fn balanced(d: &Diagram, a: GenId, b: GenId) -> bool {
    let mut diff = 0i64;
    for s in d.slices() {
        if s.left != 0 || s.right != 0 {
            return false;
        }
        match s.label {
            Label::Gen(g) if g == a => diff += 1,
            Label::Gen(g) if g == b => diff -= 1,
            _ => return false,
        }
    }
    diff == 0
}

impl fmt::Display for Workspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer::write_workspace(f, self)
    }
}
