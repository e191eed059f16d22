use std::collections::BTreeSet;
use std::sync::Arc;

use super::{automaton_to_grammar, grammar_language, MonoidalAutomaton};
use crate::budget::Budget;
use crate::diagrams::{Diagram, Label, Slice};
use crate::error::Result;
use crate::signatures::{Polygraph, Word};

/// All diagrams `dom → cod` of the free monoidal category with at most
/// `max_gens` generator occurrences, as canonical forms. Breadth first by
/// occurrence count.
pub fn enumerate_free(
    sig: &Arc<Polygraph>,
    dom: &Word,
    cod: &Word,
    max_gens: usize,
    budget: &Budget,
) -> Result<BTreeSet<Diagram>> {
    let gens: Vec<_> = sig.gen_ids().map(|g| (g, sig.gen(g))).collect();
    let max_shrink = gens.iter().map(|(_, g)| g.arity.len().saturating_sub(g.coarity.len())).max().unwrap_or(0);
    let max_grow = gens.iter().map(|(_, g)| g.coarity.len().saturating_sub(g.arity.len())).max().unwrap_or(0);
    let reachable = |w: usize, left: usize| {
        cod.len() + left * max_shrink >= w && w + left * max_grow >= cod.len()
    };
    let mut out = BTreeSet::new();
    let mut level: BTreeSet<Diagram> = BTreeSet::new();
    level.insert(Diagram::identity(sig, dom)?);
    for n in 0..=max_gens {
        for d in &level {
            if d.cod() == cod {
                out.insert(d.clone());
            }
        }
        if n == max_gens {
            break;
        }
        let mut next = BTreeSet::new();
        for d in &level {
            let w = d.cod();
            for (g, gen) in &gens {
                let k = gen.arity.len();
                if k > w.len() {
                    continue;
                }
                for left in 0..=w.len() - k {
                    if w[left..left + k] != gen.arity[..] {
                        continue;
                    }
                    let width = w.len() - k + gen.coarity.len();
                    if !reachable(width, max_gens - n - 1) {
                        continue;
                    }
                    budget.spend(1)?;
                    let mut slices = d.slices().to_vec();
                    slices.push(Slice { left, label: Label::Gen(*g), right: w.len() - left - k });
                    let e = Diagram::from_slices(sig.clone(), dom.clone(), slices, vec![])?;
                    next.insert(e.canonical_form());
                }
            }
        }
        level = next;
    }
    Ok(out)
}

/// Accepted diagrams with at most `max_gens` generators, via the grammar of
/// accepting runs.
pub fn enumerate_regular(a: &MonoidalAutomaton, max_gens: usize, budget: &Budget) -> Result<BTreeSet<Diagram>> {
    grammar_language(&automaton_to_grammar(a)?, max_gens, budget)
}
