//! Monoidal automata, regular monoidal grammars, bounded enumeration and pumping.

mod enumerate;
mod grammar;
mod pumping;

pub use enumerate::{enumerate_free, enumerate_regular};
pub use grammar::{automaton_to_grammar, grammar_language, grammar_to_automaton, RegularMonoidalGrammar};
pub use pumping::{pump, pumping_witness, Factorization, Violation, WitnessReport};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::diagrams::{same_sig, Diagram, Label, Term};
use crate::error::{Error, Result};
use crate::signatures::{GenId, Polygraph, Sort, Word};

/// A word of states, as indices into the automaton's state list.
pub type StateWord = Vec<usize>;

/// A nondeterministic monoidal automaton. Each state is typed by the sort of
/// the wires it may label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidalAutomaton {
    pub name: String,
    pub alphabet: Arc<Polygraph>,
    pub states: Vec<String>,
    pub state_sorts: Vec<Sort>,
    pub transitions: BTreeMap<GenId, BTreeSet<(StateWord, StateWord)>>,
    pub initial: StateWord,
    pub final_: StateWord,
}

impl MonoidalAutomaton {
    /// An automaton without transitions whose states all label wires of one sort.
    pub fn new(name: &str, alphabet: Arc<Polygraph>, states: &[&str], sort: &Sort) -> Self {
        MonoidalAutomaton {
            name: name.to_string(),
            alphabet,
            states: states.iter().map(|s| s.to_string()).collect(),
            state_sorts: vec![sort.clone(); states.len()],
            transitions: BTreeMap::new(),
            initial: vec![],
            final_: vec![],
        }
    }

    pub fn state(&self, name: &str) -> Result<usize> {
        self.states.iter().position(|s| s == name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn state_word(&self, names: &[&str]) -> Result<StateWord> {
        names.iter().map(|n| self.state(n)).collect()
    }

    pub fn with_initial(mut self, names: &[&str]) -> Result<Self> {
        self.initial = self.state_word(names)?;
        Ok(self)
    }

    pub fn with_final(mut self, names: &[&str]) -> Result<Self> {
        self.final_ = self.state_word(names)?;
        Ok(self)
    }

    pub fn with_transition(mut self, gen: &str, from: &[&str], to: &[&str]) -> Result<Self> {
        let g = self.alphabet.lookup(gen).ok_or_else(|| Error::UnknownGenerator(gen.to_string()))?;
        let t = (self.state_word(from)?, self.state_word(to)?);
        self.transitions.entry(g).or_default().insert(t);
        self.validate()?;
        Ok(self)
    }

    pub fn sorts_of(&self, q: &[usize]) -> Word {
        q.iter().map(|&s| self.state_sorts[s].clone()).collect()
    }

    /// Checks that transition tuples match their generator's interface.
    pub fn validate(&self) -> Result<()> {
        for s in &self.state_sorts {
            self.alphabet.check_word(std::slice::from_ref(s))?;
        }
        for (g, rel) in &self.transitions {
            let gen = self.alphabet.generators().get(g.index()).ok_or_else(|| Error::UnknownGenerator(format!("#{}", g.0)))?;
            for (from, to) in rel {
                if from.iter().chain(to).any(|&q| q >= self.states.len()) {
                    return Err(Error::UnknownName(format!("state in transition of `{}`", gen.name)));
                }
                if self.sorts_of(from) != gen.arity {
                    return Err(Error::InterfaceMismatch { expected: gen.arity.clone(), found: self.sorts_of(from) });
                }
                if self.sorts_of(to) != gen.coarity {
                    return Err(Error::InterfaceMismatch { expected: gen.coarity.clone(), found: self.sorts_of(to) });
                }
            }
        }
        if self.initial.iter().chain(&self.final_).any(|&q| q >= self.states.len()) {
            return Err(Error::UnknownName("initial or final state".into()));
        }
        Ok(())
    }

    fn relation(&self, g: GenId) -> impl Iterator<Item = &(StateWord, StateWord)> {
        self.transitions.get(&g).into_iter().flatten()
    }

    fn step(&self, g: GenId, q: &[usize]) -> BTreeSet<StateWord> {
        self.relation(g).filter(|(from, _)| from[..] == *q).map(|(_, to)| to.clone()).collect()
    }

    pub fn render_word(&self, q: &[usize]) -> String {
        if q.is_empty() {
            return "ε".into();
        }
        q.iter().map(|&s| self.states[s].as_str()).collect::<Vec<_>>().join(" ")
    }
}

fn check_alphabet(a: &MonoidalAutomaton, d: &Diagram) -> Result<()> {
    if same_sig(&a.alphabet, d.sig()) {
        Ok(())
    } else {
        Err(Error::PolygraphMismatch(a.alphabet.name.clone(), d.sig().name.clone()))
    }
}

/// δ̂ by the inductive clauses on the diagram read as a term.
pub fn delta_hat(a: &MonoidalAutomaton, q: &[usize], d: &Diagram) -> Result<BTreeSet<StateWord>> {
    check_alphabet(a, d)?;
    if q.len() != d.dom().len() {
        return Err(Error::LengthMismatch { expected: d.dom().len(), found: q.len() });
    }
    if !d.holes().is_empty() {
        return Err(Error::InvalidMorphism("automata read closed diagrams".into()));
    }
    delta_hat_term(a, q, &d.to_term())
}

/// δ̂ on a term: generators, identities, tensors with a split state word, and
/// composites with the resulting set of sets flattened by union.
pub fn delta_hat_term(a: &MonoidalAutomaton, q: &[usize], t: &Term) -> Result<BTreeSet<StateWord>> {
    match t {
        Term::Id(w) => {
            if w.len() != q.len() {
                return Err(Error::LengthMismatch { expected: w.len(), found: q.len() });
            }
            Ok(BTreeSet::from([q.to_vec()]))
        }
        Term::Gen(g) => {
            let n = a.alphabet.gen(*g).arity.len();
            if n != q.len() {
                return Err(Error::LengthMismatch { expected: n, found: q.len() });
            }
            Ok(a.step(*g, q))
        }
        Term::Hole { .. } => Err(Error::InvalidMorphism("automata read closed diagrams".into())),
        Term::Par(l, r) => {
            let (ld, _) = l.interface(&a.alphabet)?;
            if ld.len() > q.len() {
                return Err(Error::LengthMismatch { expected: ld.len(), found: q.len() });
            }
            let (q1, q2) = q.split_at(ld.len());
            let left = delta_hat_term(a, q1, l)?;
            if left.is_empty() {
                return Ok(left);
            }
            let right = delta_hat_term(a, q2, r)?;
            Ok(left
                .iter()
                .flat_map(|p| right.iter().map(move |p2| p.iter().chain(p2).copied().collect()))
                .collect())
        }
        Term::Seq(l, r) => {
            let mut out = BTreeSet::new();
            for mid in delta_hat_term(a, q, l)? {
                out.extend(delta_hat_term(a, &mid, r)?);
            }
            Ok(out)
        }
    }
}

/// δ̂ by running slice after slice on sets of frontier state words.
pub fn delta_hat_frontier(a: &MonoidalAutomaton, q: &[usize], d: &Diagram) -> Result<BTreeSet<StateWord>> {
    check_alphabet(a, d)?;
    if q.len() != d.dom().len() {
        return Err(Error::LengthMismatch { expected: d.dom().len(), found: q.len() });
    }
    let mut current = BTreeSet::from([q.to_vec()]);
    for s in d.slices() {
        let Label::Gen(g) = s.label else {
            return Err(Error::InvalidMorphism("automata read closed diagrams".into()));
        };
        let n = a.alphabet.gen(g).arity.len();
        let mut next = BTreeSet::new();
        for w in &current {
            for out in a.step(g, &w[s.left..s.left + n]) {
                let mut v = w[..s.left].to_vec();
                v.extend(out);
                v.extend_from_slice(&w[s.left + n..]);
                next.insert(v);
            }
        }
        current = next;
    }
    Ok(current)
}

/// Whether the final word is reachable from the initial word.
pub fn accepts(a: &MonoidalAutomaton, d: &Diagram) -> Result<bool> {
    check_alphabet(a, d)?;
    if *d.dom() != a.sorts_of(&a.initial) || *d.cod() != a.sorts_of(&a.final_) {
        return Ok(false);
    }
    Ok(delta_hat(a, &a.initial, d)?.contains(&a.final_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signatures::word;

    pub(crate) fn parens() -> MonoidalAutomaton {
        let p = Polygraph::new("parens")
            .with_sort("w")
            .with_generator("open", &["w"], &["w", "w"])
            .with_generator("close", &["w", "w"], &["w"])
            .build()
            .unwrap();
        MonoidalAutomaton::new("parensAut", p, &["S", "M"], &Sort::new("w"))
            .with_transition("open", &["S"], &["S", "M"])
            .unwrap()
            .with_transition("close", &["S", "M"], &["S"])
            .unwrap()
            .with_initial(&["S"])
            .unwrap()
            .with_final(&["S"])
            .unwrap()
    }

    fn g(a: &MonoidalAutomaton, n: &str) -> Diagram {
        Diagram::generator(&a.alphabet, n).unwrap()
    }

    #[test]
    fn identity_clause() {
        let a = parens();
        let id = Diagram::identity(&a.alphabet, &word(&["w", "w"])).unwrap();
        assert_eq!(delta_hat(&a, &[0, 1], &id).unwrap(), BTreeSet::from([vec![0, 1]]));
    }

    #[test]
    fn open_close() {
        let a = parens();
        let d = g(&a, "open").compose(&g(&a, "close")).unwrap();
        assert_eq!(delta_hat(&a, &[0], &d).unwrap(), BTreeSet::from([vec![0]]));
        assert!(accepts(&a, &d).unwrap());
        assert!(!accepts(&a, &g(&a, "open")).unwrap());
    }

    #[test]
    fn tensor_splits_state_word() {
        let a = parens();
        let d = g(&a, "open").tensor(&g(&a, "open")).unwrap();
        assert_eq!(delta_hat(&a, &[0, 0], &d).unwrap(), BTreeSet::from([vec![0, 1, 0, 1]]));
        assert!(delta_hat(&a, &[0, 1], &d).unwrap().is_empty());
        assert_eq!(delta_hat_frontier(&a, &[0, 0], &d).unwrap(), delta_hat(&a, &[0, 0], &d).unwrap());
    }

    #[test]
    fn length_mismatch() {
        let a = parens();
        assert_eq!(delta_hat(&a, &[0, 0], &g(&a, "open")), Err(Error::LengthMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn identity_accepted_when_initial_is_final() {
        let a = parens();
        assert!(accepts(&a, &Diagram::identity(&a.alphabet, &word(&["w"])).unwrap()).unwrap());
    }

    #[test]
    fn parens_counts_by_pairs() {
        let a = parens();
        let lang = enumerate_regular(&a, 8, &crate::budget::Budget::default()).unwrap();
        let mut counts = [0usize; 5];
        for d in &lang {
            assert!(accepts(&a, d).unwrap());
            counts[d.size() / 2] += 1;
        }
        assert_eq!(counts, [1, 1, 2, 5, 14]);
    }

    #[test]
    fn round_trip_through_grammar() {
        let a = parens();
        let g = automaton_to_grammar(&a).unwrap();
        assert_eq!(g.state_graph().sorts().len(), 2);
        assert_eq!(g.state_graph().generators().len(), 2);
        let b = grammar_to_automaton(&g).unwrap();
        let budget = crate::budget::Budget::default();
        assert_eq!(enumerate_regular(&a, 6, &budget).unwrap(), enumerate_regular(&b, 6, &budget).unwrap());
    }

    #[test]
    fn pumping_parens_stays_inside() {
        let a = parens();
        let d = g(&a, "open").compose(&g(&a, "close")).unwrap();
        let fact = Factorization::new(vec![g(&a, "open"), g(&a, "close")]).unwrap();
        assert_eq!(pump(&fact, 0, 2, 1).unwrap(), d);
        let cubed = pump(&fact, 0, 2, 3).unwrap();
        assert_eq!(cubed.size(), 6);
        assert!(accepts(&a, &cubed).unwrap());
        assert!(pump(&fact, 0, 2, 0).unwrap().is_identity());
        assert!(matches!(pump(&fact, 0, 1, 2), Err(Error::WidthMismatch { .. })));
    }
}
