use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{enumerate_free, MonoidalAutomaton};
use crate::budget::Budget;
use crate::diagrams::Diagram;
use crate::error::Result;
use crate::signatures::{Polygraph, PolygraphMorphism, Sort, Word};

/// A morphism of finite polygraphs `ψ : ℚ → Γ` with initial and final words
/// over the sorts of `ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularMonoidalGrammar {
    pub name: String,
    pub psi: PolygraphMorphism,
    pub initial: Word,
    pub final_: Word,
}

impl RegularMonoidalGrammar {
    pub fn new(name: &str, psi: PolygraphMorphism, initial: Word, final_: Word) -> Result<Self> {
        psi.source.check_word(&initial)?;
        psi.source.check_word(&final_)?;
        Ok(RegularMonoidalGrammar { name: name.to_string(), psi, initial, final_ })
    }

    pub fn state_graph(&self) -> &Arc<Polygraph> {
        &self.psi.source
    }

    pub fn alphabet(&self) -> &Arc<Polygraph> {
        &self.psi.target
    }
}

/// One generator of `ℚ` per transition tuple, named `γ_k`.
pub fn automaton_to_grammar(a: &MonoidalAutomaton) -> Result<RegularMonoidalGrammar> {
    a.validate()?;
    let mut q = Polygraph::new(&format!("{}.runs", a.name));
    for s in &a.states {
        q.add_sort(Sort::new(s));
    }
    let state_sort = |w: &[usize]| -> Word { w.iter().map(|&s| Sort::new(&a.states[s])).collect() };
    let mut gen_map = Vec::new();
    for (g, rel) in &a.transitions {
        let name = &a.alphabet.gen(*g).name;
        for (k, (from, to)) in rel.iter().enumerate() {
            q.add_generator(&format!("{name}_{k}"), state_sort(from), state_sort(to));
            gen_map.push(*g);
        }
    }
    let q = q.build().map_err(|mut e| e.remove(0))?;
    let sort_map: BTreeMap<Sort, Sort> =
        a.states.iter().zip(&a.state_sorts).map(|(s, t)| (Sort::new(s), t.clone())).collect();
    let psi = PolygraphMorphism::new(q, a.alphabet.clone(), sort_map, gen_map)?;
    RegularMonoidalGrammar::new(&a.name, psi, state_sort(&a.initial), state_sort(&a.final_))
}

/// States are the sorts of `ℚ`; each generator of `ℚ` contributes one tuple
/// to the relation of its image.
pub fn grammar_to_automaton(g: &RegularMonoidalGrammar) -> Result<MonoidalAutomaton> {
    let q = g.state_graph();
    let states: Vec<String> = q.sorts().iter().map(|s| s.name().to_string()).collect();
    let index = |s: &Sort| states.iter().position(|x| x == s.name()).unwrap();
    let mut transitions: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for id in q.gen_ids() {
        let gen = q.gen(id);
        let from = gen.arity.iter().map(index).collect();
        let to = gen.coarity.iter().map(index).collect();
        transitions.entry(g.psi.map_gen(id)).or_default().insert((from, to));
    }
    let initial = g.initial.iter().map(index).collect();
    let final_ = g.final_.iter().map(index).collect();
    let a = MonoidalAutomaton {
        name: g.name.clone(),
        alphabet: g.alphabet().clone(),
        state_sorts: q.sorts().iter().map(|s| g.psi.map_sort(s)).collect(),
        states,
        transitions,
        initial,
        final_,
    };
    a.validate()?;
    Ok(a)
}

/// The image under `ψ` of the diagrams `i → f` of `ℚ` with at most `bound`
/// generators, as canonical forms.
pub fn grammar_language(g: &RegularMonoidalGrammar, bound: usize, budget: &Budget) -> Result<BTreeSet<Diagram>> {
    let runs = enumerate_free(g.state_graph(), &g.initial, &g.final_, bound, budget)?;
    let mut out = BTreeSet::new();
    for r in runs {
        out.insert(r.map(&g.psi)?.canonical_form());
    }
    Ok(out)
}
