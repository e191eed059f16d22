use std::collections::{BTreeMap, VecDeque};

use super::CFMonoidalGrammar;
use crate::diagrams::{Diagram, DiagramContext, HoleType};
use crate::error::Result;
use crate::regular::RegularMonoidalGrammar;
use crate::signatures::Word;

fn nt_name(w: &Word) -> String {
    let mut s = String::from("T");
    for x in w {
        s.push('.');
        s.push_str(x.name());
    }
    s
}

/// A context-free grammar with the language of `rg`, for runs whose state
/// words never exceed `max_width` wires.
///
/// Nonterminal `T.w` stands for the runs from state word `w` to the final
/// word, with interface `⟨ψ(w)|ψ(f)⟩`. Each rule reads one whiskered
/// generator and continues in a single hole; `T.f` also closes with an
/// identity. The start symbol is `T.i`.
pub fn lift_regular(rg: &RegularMonoidalGrammar, max_width: usize) -> Result<CFMonoidalGrammar> {
    let q = rg.state_graph();
    let psi = &rg.psi;
    let alphabet = rg.alphabet();
    let mut g = CFMonoidalGrammar::new(&format!("{}.lifted", rg.name), alphabet.clone());
    let target = psi.map_word(&rg.final_);
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |g: &mut CFMonoidalGrammar, queue: &mut VecDeque<Word>, w: &Word| -> Result<usize> {
        if let Some(&i) = index.get(w) {
            return Ok(i);
        }
        let i = g.add_nonterminal(&nt_name(w), HoleType { dom: psi.map_word(w), cod: target.clone() })?;
        index.insert(w.clone(), i);
        queue.push_back(w.clone());
        Ok(i)
    };
    g.start = intern(&mut g, &mut queue, &rg.initial)?;
    let mut rule_no = 0usize;
    while let Some(w) = queue.pop_front() {
        let lhs = index_of(&g, &w);
        if w == rg.final_ {
            let body = DiagramContext::new(Diagram::identity(alphabet, &target)?);
            g.add_rule(&format!("{}.end", nt_name(&w)), lhs, vec![], body)?;
        }
        for id in q.gen_ids() {
            let gen = q.gen(id);
            let n = gen.arity.len();
            if n > w.len() {
                continue;
            }
            for left in 0..=w.len() - n {
                if w[left..left + n] != gen.arity[..] {
                    continue;
                }
                let mut next = w[..left].to_vec();
                next.extend(gen.coarity.iter().cloned());
                next.extend_from_slice(&w[left + n..]);
                if next.len() > max_width {
                    continue;
                }
                let arg = intern(&mut g, &mut queue, &next)?;
                let step = Diagram::of_generator(alphabet, psi.map_gen(id))?
                    .whisker(&psi.map_word(&w[..left]), &psi.map_word(&w[left + n..]));
                let hole = Diagram::hole(alphabet, g.nonterminals[arg].interface.clone())?;
                let body = DiagramContext::new(step.compose(&hole)?);
                g.add_rule(&format!("r{rule_no}"), lhs, vec![arg], body)?;
                rule_no += 1;
            }
        }
    }
    Ok(g)
}

fn index_of(g: &CFMonoidalGrammar, w: &Word) -> usize {
    g.nonterminal(&nt_name(w)).expect("interned")
}
