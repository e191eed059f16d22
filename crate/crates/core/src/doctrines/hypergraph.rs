use std::collections::BTreeMap;

use crate::diagrams::{Diagram, Label};
use crate::error::{Error, Result};
use crate::signatures::{GenId, Sort, Structural};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperedge {
    pub label: GenId,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

/// A hypergraph with ordered source and target boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPointedHypergraph {
    pub nodes: Vec<Sort>,
    pub edges: Vec<Hyperedge>,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn fresh(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

/// Reads a diagram over the hypergraph doctrine as a hypergraph: wires are
/// merged by the Frobenius generators and every base generator is an edge.
pub fn to_hypergraph(d: &Diagram) -> Result<MultiPointedHypergraph> {
    let sig = d.sig();
    let mut uf = UnionFind(Vec::new());
    let mut sorts: Vec<Sort> = Vec::new();
    let fresh = |uf: &mut UnionFind, sorts: &mut Vec<Sort>, s: &Sort| {
        sorts.push(s.clone());
        uf.fresh()
    };
    let mut frontier: Vec<usize> = d.dom().iter().map(|s| fresh(&mut uf, &mut sorts, s)).collect();
    let dom = frontier.clone();
    let mut edges = Vec::new();
    for s in d.slices() {
        let g = match s.label {
            Label::Gen(g) => g,
            Label::Hole(_) => return Err(Error::Doctrine("hypergraphs are defined for closed diagrams".into())),
        };
        let gen = sig.gen(g);
        let args: Vec<usize> = frontier.drain(s.left..s.left + gen.arity.len()).collect();
        let out: Vec<usize> = match &gen.structural {
            Some(Structural::Swap(..)) => vec![args[1], args[0]],
            Some(Structural::Mu(_)) => {
                uf.union(args[0], args[1]);
                vec![args[0]]
            }
            Some(Structural::Eta(a)) => vec![fresh(&mut uf, &mut sorts, a)],
            Some(Structural::Delta(_)) => vec![args[0], args[0]],
            Some(Structural::Eps(_)) => vec![],
            Some(other) => {
                return Err(Error::Doctrine(format!("`{}` is not a hypergraph structural generator", other.name())))
            }
            None => {
                let targets: Vec<usize> = gen.coarity.iter().map(|s| fresh(&mut uf, &mut sorts, s)).collect();
                edges.push(Hyperedge { label: g, sources: args, targets: targets.clone() });
                targets
            }
        };
        frontier.splice(s.left..s.left, out);
    }
    let mut index = BTreeMap::new();
    let mut nodes = Vec::new();
    for v in 0..sorts.len() {
        let r = uf.find(v);
        index.entry(r).or_insert_with(|| {
            nodes.push(sorts[r].clone());
            nodes.len() - 1
        });
    }
    let mut map = |v: usize| index[&uf.find(v)];
    let edges = edges
        .into_iter()
        .map(|e| Hyperedge {
            label: e.label,
            sources: e.sources.iter().map(|&v| map(v)).collect(),
            targets: e.targets.iter().map(|&v| map(v)).collect(),
        })
        .collect();
    let dom = dom.iter().map(|&v| map(v)).collect();
    let cod = frontier.iter().map(|&v| map(v)).collect();
    Ok(MultiPointedHypergraph { nodes, edges, dom, cod })
}

fn ranks<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect()
}

fn count(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

type Incidence = (GenId, bool, usize, Vec<usize>, Vec<usize>);

/// Iterated colour refinement; colours are ranks of isomorphism-invariant
/// signatures, so isomorphic inputs receive corresponding colourings.
fn refine(h: &MultiPointedHypergraph, mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let mut inc: Vec<Vec<Incidence>> = vec![Vec::new(); h.nodes.len()];
        for e in &h.edges {
            let src: Vec<usize> = e.sources.iter().map(|&v| colors[v]).collect();
            let tgt: Vec<usize> = e.targets.iter().map(|&v| colors[v]).collect();
            for (p, &v) in e.sources.iter().enumerate() {
                inc[v].push((e.label, false, p, src.clone(), tgt.clone()));
            }
            for (p, &v) in e.targets.iter().enumerate() {
                inc[v].push((e.label, true, p, src.clone(), tgt.clone()));
            }
        }
        let sigs: Vec<(usize, Vec<Incidence>)> = inc
            .into_iter()
            .enumerate()
            .map(|(v, mut l)| {
                l.sort();
                (colors[v], l)
            })
            .collect();
        let next = ranks(&sigs);
        if count(&next) == count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn initial_colors(h: &MultiPointedHypergraph) -> Vec<usize> {
    let sigs: Vec<(Sort, Vec<usize>, Vec<usize>)> = (0..h.nodes.len())
        .map(|v| {
            let d = h.dom.iter().enumerate().filter(|(_, &x)| x == v).map(|(i, _)| i).collect();
            let c = h.cod.iter().enumerate().filter(|(_, &x)| x == v).map(|(i, _)| i).collect();
            (h.nodes[v].clone(), d, c)
        })
        .collect();
    ranks(&sigs)
}

/// A complete isomorphism invariant, usable as a deduplication key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate {
    nodes: Vec<Sort>,
    edges: Vec<Hyperedge>,
    dom: Vec<usize>,
    cod: Vec<usize>,
}

fn encode(h: &MultiPointedHypergraph, colors: &[usize]) -> Certificate {
    let mut nodes = vec![None; h.nodes.len()];
    for (v, &c) in colors.iter().enumerate() {
        nodes[c] = Some(h.nodes[v].clone());
    }
    let mut edges: Vec<Hyperedge> = h
        .edges
        .iter()
        .map(|e| Hyperedge {
            label: e.label,
            sources: e.sources.iter().map(|&v| colors[v]).collect(),
            targets: e.targets.iter().map(|&v| colors[v]).collect(),
        })
        .collect();
    edges.sort();
    Certificate {
        nodes: nodes.into_iter().map(|s| s.expect("discrete colouring")).collect(),
        edges,
        dom: h.dom.iter().map(|&v| colors[v]).collect(),
        cod: h.cod.iter().map(|&v| colors[v]).collect(),
    }
}

fn search(h: &MultiPointedHypergraph, colors: Vec<usize>, best: &mut Option<Certificate>) {
    let colors = refine(h, colors);
    let n = h.nodes.len();
    if count(&colors) == n {
        let c = encode(h, &colors);
        if best.as_ref().is_none_or(|b| c < *b) {
            *best = Some(c);
        }
        return;
    }
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let cell = (0..n).find(|&c| sizes[c] > 1).expect("non-discrete colouring has a large cell");
    for v in (0..n).filter(|&v| colors[v] == cell) {
        let sigs: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
        search(h, ranks(&sigs), best);
    }
}

/// Canonical certificate by individualisation and refinement.
pub fn certificate(h: &MultiPointedHypergraph) -> Certificate {
    let mut best = None;
    search(h, initial_colors(h), &mut best);
    best.unwrap_or(Certificate { nodes: vec![], edges: vec![], dom: vec![], cod: vec![] })
}

fn edge_multiset(h: &MultiPointedHypergraph, map: &[usize]) -> Vec<Hyperedge> {
    let mut edges: Vec<Hyperedge> = h
        .edges
        .iter()
        .map(|e| Hyperedge {
            label: e.label,
            sources: e.sources.iter().map(|&v| map[v]).collect(),
            targets: e.targets.iter().map(|&v| map[v]).collect(),
        })
        .collect();
    edges.sort();
    edges
}

/// Backtracking isomorphism search, fixing the interfaces pointwise.
pub fn hypergraph_iso(a: &MultiPointedHypergraph, b: &MultiPointedHypergraph) -> bool {
    let n = a.nodes.len();
    if n != b.nodes.len() || a.edges.len() != b.edges.len() || a.dom.len() != b.dom.len() || a.cod.len() != b.cod.len()
    {
        return false;
    }
    let ca = refine(a, initial_colors(a));
    let cb = refine(b, initial_colors(b));
    let degree = |h: &MultiPointedHypergraph, v: usize| {
        let inn = h.edges.iter().map(|e| e.targets.iter().filter(|&&x| x == v).count()).sum::<usize>();
        let out = h.edges.iter().map(|e| e.sources.iter().filter(|&&x| x == v).count()).sum::<usize>();
        (inn, out)
    };
    let key = |h: &MultiPointedHypergraph, c: &[usize], v: usize| (h.nodes[v].clone(), degree(h, v), c[v]);
    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for (x, y) in a.dom.iter().zip(&b.dom).chain(a.cod.iter().zip(&b.cod)) {
        match map[*x] {
            Some(m) if m != *y => return false,
            Some(_) => {}
            None => {
                if used[*y] || key(a, &ca, *x) != key(b, &cb, *y) {
                    return false;
                }
                map[*x] = Some(*y);
                used[*y] = true;
            }
        }
    }
    let target = edge_multiset(b, &(0..n).collect::<Vec<_>>());
    let free: Vec<usize> = (0..n).filter(|&v| map[v].is_none()).collect();
    let keys_a: Vec<_> = (0..n).map(|v| key(a, &ca, v)).collect();
    let keys_b: Vec<_> = (0..n).map(|v| key(b, &cb, v)).collect();

    fn go(
        k: usize,
        free: &[usize],
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        keys: (&[(Sort, (usize, usize), usize)], &[(Sort, (usize, usize), usize)]),
        a: &MultiPointedHypergraph,
        target: &[Hyperedge],
    ) -> bool {
        if k == free.len() {
            let m: Vec<usize> = map.iter().map(|x| x.unwrap()).collect();
            return edge_multiset(a, &m) == target;
        }
        let x = free[k];
        for y in 0..used.len() {
            if !used[y] && keys.0[x] == keys.1[y] {
                used[y] = true;
                map[x] = Some(y);
                if go(k + 1, free, map, used, keys, a, target) {
                    return true;
                }
                map[x] = None;
                used[y] = false;
            }
        }
        false
    }
    go(0, &free, &mut map, &mut used, (&keys_a, &keys_b), a, &target)
}
