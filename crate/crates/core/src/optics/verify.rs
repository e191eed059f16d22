use std::fmt;

use super::{apply_functor, induced_functor, optical_contour, raw_representative, regular_representative};
use crate::budget::Budget;
use crate::contextfree::{cf_language, language_of, CFMonoidalGrammar, Language};
use crate::diagrams::Diagram;
use crate::error::Result;
use crate::regular::grammar_language;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub grammar: String,
    pub bound: usize,
    pub lhs: usize,
    pub rhs: usize,
    /// In the context-free language but not in the image.
    pub missing: Vec<Diagram>,
    /// In the image but not in the context-free language.
    pub extra: Vec<Diagram>,
}

impl VerifyReport {
    pub fn equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VERIFY {} bound={} equal={} lhs={} rhs={}",
            self.grammar,
            self.bound,
            self.equal(),
            self.lhs,
            self.rhs
        )
    }
}

/// Compares the language of `g` up to `bound` rule nodes with the image under
/// the induced functor of the regular representative's language up to the
/// matching contour size `2·bound − 1`.
pub fn verify_representation(g: &CFMonoidalGrammar, bound: usize, budget: &Budget) -> Result<VerifyReport> {
    let rep = raw_representative(g)?;
    let contour = optical_contour(&rep.multigraph)?;
    let regular = regular_representative(g, &contour)?;
    let functor = induced_functor(g, &rep, &contour)?;
    let contour_bound = (2 * bound).saturating_sub(1);
    let (lhs, rhs) = std::thread::scope(|s| {
        let lhs = s.spawn(|| cf_language(g, bound, budget));
        let rhs = s.spawn(|| -> Result<Language> {
            let contours = grammar_language(&regular, contour_bound, budget)?;
            language_of(contours.iter().map(|c| apply_functor(&functor, c)).collect::<Result<Vec<_>>>()?)
        });
        (lhs.join().expect("enumeration thread"), rhs.join().expect("enumeration thread"))
    });
    let (lhs, rhs) = (lhs?, rhs?);
    let missing = lhs.iter().filter(|(k, _)| !rhs.contains_key(k)).map(|(_, d)| d.clone()).collect();
    let extra = rhs.iter().filter(|(k, _)| !lhs.contains_key(k)).map(|(_, d)| d.clone()).collect();
    Ok(VerifyReport { grammar: g.name.clone(), bound, lhs: lhs.len(), rhs: rhs.len(), missing, extra })
}
