//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use moncat_core::regular::MonoidalAutomaton;
use moncat_core::{Diagram, GenId, Label, Polygraph, Slice, Sort};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const MAX_WIDTH: usize = 6;

fn io(sig: &Polygraph, l: Label) -> (usize, usize) {
    match l {
        Label::Gen(g) => (sig.gen(g).arity.len(), sig.gen(g).coarity.len()),
        Label::Hole(_) => panic!("oracle diagrams are closed"),
    }
}

/// Random generator applications on a random domain, one slice at a time.
pub fn random_diagram(rng: &mut StdRng, sig: &Arc<Polygraph>, max_slices: usize) -> Diagram {
    let sorts = sig.sorts();
    let width = rng.gen_range(0..=3usize);
    let dom: Vec<Sort> = (0..width).map(|_| sorts.choose(rng).unwrap().clone()).collect();
    random_from(rng, sig, &dom, max_slices)
}

/// Random generator applications starting from `dom`.
pub fn random_from(rng: &mut StdRng, sig: &Arc<Polygraph>, dom: &[Sort], max_slices: usize) -> Diagram {
    let mut frontier = dom.to_vec();
    let mut slices = Vec::new();
    let steps = rng.gen_range(0..=max_slices);
    for _ in 0..steps {
        let mut cands = Vec::new();
        for id in sig.gen_ids() {
            let g = sig.gen(id);
            if frontier.len() - g.arity.len().min(frontier.len()) + g.coarity.len() > MAX_WIDTH {
                continue;
            }
            for left in 0..=frontier.len().saturating_sub(g.arity.len()) {
                if frontier.len() >= g.arity.len() && frontier[left..left + g.arity.len()] == g.arity[..] {
                    cands.push((id, left));
                }
            }
        }
        let Some(&(id, left)) = cands.choose(rng) else { break };
        let g = sig.gen(id);
        let right = frontier.len() - left - g.arity.len();
        frontier.splice(left..left + g.arity.len(), g.coarity.iter().cloned());
        slices.push(Slice { left, label: Label::Gen(id), right });
    }
    Diagram::from_slices(sig.clone(), dom.to_vec(), slices, vec![]).unwrap()
}

/// Positions `k` where slices `k` and `k+1` touch disjoint wires.
pub fn exchangeable(d: &Diagram) -> Vec<usize> {
    let sig = d.sig();
    let s = d.slices();
    (0..s.len().saturating_sub(1))
        .filter(|&k| {
            let (a, b) = (s[k], s[k + 1]);
            let (_, out_a) = io(sig, a.label);
            let (in_b, _) = io(sig, b.label);
            b.left + in_b <= a.left || b.left >= a.left + out_a
        })
        .collect()
}

/// One interchange move: swap two adjacent independent slices, shifting offsets.
pub fn interchange(d: &Diagram, k: usize) -> Diagram {
    let sig = d.sig();
    let s = d.slices();
    let (a, b) = (s[k], s[k + 1]);
    let (in_a, out_a) = io(sig, a.label);
    let (in_b, out_b) = io(sig, b.label);
    let w0 = a.left + in_a + a.right;
    let (x_left, y_left) = if b.left + in_b <= a.left {
        (b.left, a.left + out_b - in_b)
    } else {
        assert!(b.left >= a.left + out_a);
        (b.left + in_a - out_a, a.left)
    };
    let x = Slice { left: x_left, label: b.label, right: w0 - x_left - in_b };
    let mid = w0 - in_b + out_b;
    let y = Slice { left: y_left, label: a.label, right: mid - y_left - in_a };
    let mut slices = s.to_vec();
    slices[k] = x;
    slices[k + 1] = y;
    Diagram::from_slices(sig.clone(), d.dom().clone(), slices, vec![]).unwrap()
}

pub fn random_moves(rng: &mut StdRng, d: &Diagram, moves: usize) -> Diagram {
    let mut cur = d.clone();
    for _ in 0..moves {
        let ks = exchangeable(&cur);
        let Some(&k) = ks.choose(rng) else { break };
        cur = interchange(&cur, k);
    }
    cur
}

/// Runs the automaton slice by slice on sets of state words.
pub fn frontier_states(a: &MonoidalAutomaton, q: &[usize], d: &Diagram) -> BTreeSet<Vec<usize>> {
    let mut cur: BTreeSet<Vec<usize>> = [q.to_vec()].into();
    for s in d.slices() {
        let Label::Gen(g) = s.label else { panic!("closed") };
        let n = d.sig().gen(g).arity.len();
        let mut next = BTreeSet::new();
        for w in &cur {
            for (from, to) in a.transitions.get(&g).into_iter().flatten() {
                if w[s.left..s.left + n] == from[..] {
                    let mut v = w[..s.left].to_vec();
                    v.extend(to);
                    v.extend(&w[s.left + n..]);
                    next.insert(v);
                }
            }
        }
        cur = next;
    }
    cur
}

pub fn oracle_accepts(a: &MonoidalAutomaton, d: &Diagram) -> bool {
    let sorts = |q: &[usize]| q.iter().map(|&i| a.state_sorts[i].clone()).collect::<Vec<_>>();
    d.dom() == &sorts(&a.initial) && d.cod() == &sorts(&a.final_) && frontier_states(a, &a.initial, d).contains(&a.final_)
}

/// A random run: a state word and a diagram built from applicable transitions.
pub fn random_run(rng: &mut StdRng, a: &MonoidalAutomaton, max_slices: usize) -> (Vec<usize>, Diagram) {
    let sig = &a.alphabet;
    let width = rng.gen_range(0..=3usize);
    let q0: Vec<usize> = if rng.gen_bool(0.3) {
        a.initial.clone()
    } else {
        (0..width).map(|_| rng.gen_range(0..a.states.len())).collect()
    };
    let dom: Vec<Sort> = q0.iter().map(|&i| a.state_sorts[i].clone()).collect();
    let mut q = q0.clone();
    let mut slices = Vec::new();
    for _ in 0..rng.gen_range(0..=max_slices) {
        let mut cands = Vec::new();
        for (g, ts) in &a.transitions {
            for (from, to) in ts {
                if q.len() - from.len().min(q.len()) + to.len() > MAX_WIDTH {
                    continue;
                }
                for left in 0..=q.len().saturating_sub(from.len()) {
                    if q.len() >= from.len() && q[left..left + from.len()] == from[..] {
                        cands.push((*g, left, from.len(), to.clone()));
                    }
                }
            }
        }
        let Some((g, left, n, to)) = cands.choose(rng).cloned() else { break };
        slices.push(Slice { left, label: Label::Gen(g), right: q.len() - left - n });
        q.splice(left..left + n, to);
    }
    (q0, Diagram::from_slices(sig.clone(), dom, slices, vec![]).unwrap())
}

/// The diagram of a bracket word, each generator acting on the leftmost wire.
pub fn bracket_diagram(sig: &Arc<Polygraph>, open: GenId, close: GenId, word: &[bool]) -> Diagram {
    let mut width = 1usize;
    let mut slices = Vec::new();
    for &o in word {
        if o {
            slices.push(Slice { left: 0, label: Label::Gen(open), right: width - 1 });
            width += 1;
        } else {
            slices.push(Slice { left: 0, label: Label::Gen(close), right: width - 2 });
            width -= 1;
        }
    }
    Diagram::from_slices(sig.clone(), sig.gen(open).arity.clone(), slices, vec![]).unwrap()
}

/// All balanced bracket words with `n` pairs, by brute force over `2^(2n)` words.
pub fn dyck_words(n: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << (2 * n)) {
        let w: Vec<bool> = (0..2 * n).map(|i| bits >> i & 1 == 1).collect();
        let mut depth = 0i32;
        let ok = w.iter().all(|&o| {
            depth += if o { 1 } else { -1 };
            depth >= 0
        }) && depth == 0;
        if ok {
            out.push(w);
        }
    }
    out
}

/// A first-order term with parameters and nonterminal calls.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tree {
    Sym(String, Vec<Tree>),
    Param(usize),
    Call(String, Vec<Tree>),
}

pub fn sym(name: &str, args: Vec<Tree>) -> Tree {
    Tree::Sym(name.to_string(), args)
}

pub fn call(name: &str, args: Vec<Tree>) -> Tree {
    Tree::Call(name.to_string(), args)
}

/// A classical context-free tree grammar: each rule rewrites `N(y₁…yₙ)`.
pub struct TreeGrammar {
    pub rules: Vec<(String, Tree)>,
}

fn subst(t: &Tree, args: &[Tree]) -> Tree {
    match t {
        Tree::Sym(f, c) => Tree::Sym(f.clone(), c.iter().map(|x| subst(x, args)).collect()),
        Tree::Param(i) => args[*i].clone(),
        Tree::Call(n, c) => Tree::Call(n.clone(), c.iter().map(|x| subst(x, args)).collect()),
    }
}

fn product(sets: Vec<BTreeSet<Tree>>) -> Vec<Vec<Tree>> {
    let mut out = vec![Vec::new()];
    for s in sets {
        out = out.into_iter().flat_map(|p| s.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
    }
    out
}

impl TreeGrammar {
    /// Call-free templates derivable from `nt` with rewriting depth at most `depth`.
    pub fn language(&self, nt: &str, depth: usize) -> BTreeSet<Tree> {
        if depth == 0 {
            return BTreeSet::new();
        }
        let mut out = BTreeSet::new();
        for (lhs, rhs) in &self.rules {
            if lhs == nt {
                out.extend(self.expand(rhs, depth - 1));
            }
        }
        out
    }

    fn expand(&self, t: &Tree, depth: usize) -> BTreeSet<Tree> {
        match t {
            Tree::Param(_) => [t.clone()].into(),
            Tree::Sym(f, c) => {
                product(c.iter().map(|x| self.expand(x, depth)).collect()).into_iter().map(|a| Tree::Sym(f.clone(), a)).collect()
            }
            Tree::Call(n, c) => {
                let bodies = self.language(n, depth);
                let mut out = BTreeSet::new();
                for a in product(c.iter().map(|x| self.expand(x, depth)).collect()) {
                    for b in &bodies {
                        out.insert(subst(b, &a));
                    }
                }
                out
            }
        }
    }
}

/// `f(x, y)` style rendering, with parameters as `x1, x2, ...`.
pub fn render_tree(t: &Tree) -> String {
    match t {
        Tree::Sym(f, c) if c.is_empty() => f.clone(),
        Tree::Sym(f, c) | Tree::Call(f, c) => {
            format!("{f}({})", c.iter().map(render_tree).collect::<Vec<_>>().join(", "))
        }
        Tree::Param(i) => format!("x{}", i + 1),
    }
}

/// Control-flow shape: one entry and one exit point, only program edges, and
/// every point lies on a path from entry to exit.
pub fn valid_control_flow(h: &moncat_core::doctrines::MultiPointedHypergraph, sig: &Polygraph) -> bool {
    if h.dom.len() != 1 || h.cod.len() != 1 {
        return false;
    }
    let n = h.nodes.len();
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for e in &h.edges {
        let g = sig.gen(e.label);
        if g.structural.is_some() || e.sources.len() != g.arity.len() || e.targets.len() != g.coarity.len() {
            return false;
        }
        for &s in &e.sources {
            for &t in &e.targets {
                succ[s].push(t);
                pred[t].push(s);
            }
        }
    }
    let reach = |start: usize, adj: &Vec<Vec<usize>>| {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            if !std::mem::replace(&mut seen[x], true) {
                stack.extend(&adj[x]);
            }
        }
        seen
    };
    let fwd = reach(h.dom[0], &succ);
    let bwd = reach(h.cod[0], &pred);
    (0..n).all(|x| fwd[x] && bwd[x])
}
