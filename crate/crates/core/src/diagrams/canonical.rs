//! Canonical scheduling of a diagram's occurrences.
//!
//! Two slice lists denote the same morphism exactly when they realise the same
//! wiring with the same faces: every wire keeps the faces on its two sides,
//! and an occurrence without inputs stays in its face. Components that touch
//! neither boundary float freely inside their face; they are canonicalised on
//! their own and inserted, sorted, where their face first opens. The rest is
//! scheduled as the lexicographically least `(left, label)` slice list among
//! all schedules with the same wiring, memoised on the set of scheduled
//! occurrences together with the current frontier of wires.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::{Diagram, Label, Slice};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Occ {
    pub left: usize,
    pub label: Label,
    pub n_in: usize,
    pub n_out: usize,
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
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Wires and faces of a slice list, named independently of the schedule.
struct Layout {
    occs: Vec<Occ>,
    inputs: Vec<Vec<usize>>,
    outputs: Vec<Vec<usize>>,
    /// Face an input-free occurrence sits in.
    place: Vec<usize>,
    left_face: Vec<usize>,
    right_face: Vec<usize>,
    walls: (usize, usize),
    dom: Vec<usize>,
    cod: Vec<usize>,
    /// Least and greatest codomain position reachable downwards from a wire.
    reach: Vec<Option<(usize, usize)>>,
}

impl Layout {
    fn new(occs: Vec<Occ>, dom_len: usize) -> Layout {
        let mut uf = UnionFind(Vec::new());
        let mut frontier: Vec<usize> = (0..dom_len).collect();
        let mut gaps: Vec<usize> = (0..=dom_len).map(|_| uf.fresh()).collect();
        let mut n_wires = dom_len;
        let mut sides: Vec<(usize, usize)> = (0..dom_len).map(|p| (gaps[p], gaps[p + 1])).collect();
        let walls = (gaps[0], gaps[gaps.len() - 1]);
        let dom = frontier.clone();
        let (mut inputs, mut outputs, mut place) = (Vec::new(), Vec::new(), Vec::new());
        for o in &occs {
            let (l, n, m) = (o.left, o.n_in, o.n_out);
            inputs.push(frontier[l..l + n].to_vec());
            place.push(gaps[l]);
            let outs: Vec<usize> = (n_wires..n_wires + m).collect();
            n_wires += m;
            frontier.splice(l..l + n, outs.iter().copied());
            let mut next = Vec::with_capacity(frontier.len() + 1);
            next.extend_from_slice(&gaps[..=l]);
            if m == 0 {
                uf.union(gaps[l], gaps[l + n]);
            } else {
                for _ in 1..m {
                    next.push(uf.fresh());
                }
                next.push(gaps[l + n]);
            }
            next.extend_from_slice(&gaps[l + n + 1..]);
            for (k, &w) in outs.iter().enumerate() {
                sides.push((next[l + k], next[l + k + 1]));
                debug_assert_eq!(sides.len(), w + 1);
            }
            gaps = next;
            outputs.push(outs);
        }
        let mut reach = vec![None; n_wires];
        for (p, &w) in frontier.iter().enumerate() {
            reach[w] = Some((p, p));
        }
        for i in (0..occs.len()).rev() {
            let r = outputs[i].iter().filter_map(|&w| reach[w]).reduce(|a: (usize, usize), b| (a.0.min(b.0), a.1.max(b.1)));
            for &w in &inputs[i] {
                reach[w] = r;
            }
        }
        let left_face = sides.iter().map(|s| uf.find(s.0)).collect();
        let right_face = sides.iter().map(|s| uf.find(s.1)).collect();
        let place = place.into_iter().map(|g| uf.find(g)).collect();
        let walls = (uf.find(walls.0), uf.find(walls.1));
        Layout { occs, inputs, outputs, place, left_face, right_face, walls, dom, cod: frontier, reach }
    }

    fn gap_face(&self, frontier: &[usize], g: usize) -> usize {
        if g == 0 {
            self.walls.0
        } else {
            self.right_face[frontier[g - 1]]
        }
    }

    fn right_of(&self, frontier: &[usize], g: usize) -> usize {
        if g == frontier.len() {
            self.walls.1
        } else {
            self.left_face[frontier[g]]
        }
    }

    /// Paths to the codomain cannot cross, so wires further left reach
    /// further left.
    fn ordered(&self, frontier: &[usize]) -> bool {
        let mut last = (0, 0);
        for r in frontier.iter().filter_map(|&w| self.reach[w]) {
            if r.0 < last.0 || r.1 < last.1 {
                return false;
            }
            last = r;
        }
        true
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Least `(left, label)` sequence.
    Canonical,
    /// Holes in index order; generators before holes whenever possible.
    HolesInOrder,
}

type Tail = Option<Rc<Vec<(usize, Occ)>>>;

struct Search<'a> {
    lay: &'a Layout,
    mode: Mode,
    memo: HashMap<(Vec<u64>, Vec<usize>), Tail>,
}

impl Search<'_> {
    fn rank(&self, o: &Occ) -> (bool, usize, Label) {
        match self.mode {
            Mode::Canonical => (false, o.left, o.label),
            Mode::HolesInOrder => (matches!(o.label, Label::Hole(_)), o.left, o.label),
        }
    }

    fn less(&self, a: &((usize, Occ), Rc<Vec<(usize, Occ)>>), b: &((usize, Occ), Rc<Vec<(usize, Occ)>>)) -> bool {
        let ka = std::iter::once(&a.0).chain(a.1.iter()).map(|o| self.rank(&o.1));
        let kb = std::iter::once(&b.0).chain(b.1.iter()).map(|o| self.rank(&o.1));
        ka.lt(kb)
    }

    fn best(&mut self, done: &mut Vec<u64>, remaining: usize, next_hole: u32, frontier: &[usize]) -> Tail {
        if remaining == 0 {
            return (frontier == self.lay.cod.as_slice()).then(|| Rc::new(Vec::new()));
        }
        let key = (done.clone(), frontier.to_vec());
        if let Some(t) = self.memo.get(&key) {
            return t.clone();
        }
        let lay = self.lay;
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for i in 0..lay.occs.len() {
            if done[i / 64] >> (i % 64) & 1 == 1 {
                continue;
            }
            if self.mode == Mode::HolesInOrder && matches!(lay.occs[i].label, Label::Hole(h) if h != next_hole) {
                continue;
            }
            let ins = &lay.inputs[i];
            if let Some(&first) = ins.first() {
                if let Some(p) = frontier.iter().position(|&w| w == first) {
                    if frontier.len() >= p + ins.len() && frontier[p..p + ins.len()] == ins[..] {
                        cands.push((i, p));
                    }
                }
            } else {
                cands.extend((0..=frontier.len()).filter(|&g| lay.gap_face(frontier, g) == lay.place[i]).map(|g| (i, g)));
            }
        }
        cands.retain(|&(i, l)| {
            let outs = &lay.outputs[i];
            let before = lay.gap_face(frontier, l);
            let after = lay.right_of(frontier, l + lay.inputs[i].len());
            match (outs.first(), outs.last()) {
                (Some(&a), Some(&b)) => lay.left_face[a] == before && lay.right_face[b] == after,
                _ => before == after,
            }
        });
        cands.sort_by_key(|&(i, l)| self.rank(&Occ { left: l, ..lay.occs[i] }));
        // Only the least first slice that can be completed matters.
        let mut winner: Option<((usize, Occ), Rc<Vec<(usize, Occ)>>)> = None;
        let mut k = 0;
        while k < cands.len() && winner.is_none() {
            let rank = self.rank(&Occ { left: cands[k].1, ..lay.occs[cands[k].0] });
            while k < cands.len() && self.rank(&Occ { left: cands[k].1, ..lay.occs[cands[k].0] }) == rank {
                let (i, l) = cands[k];
                k += 1;
                let o = lay.occs[i];
                let mut next = frontier.to_vec();
                next.splice(l..l + lay.inputs[i].len(), lay.outputs[i].iter().copied());
                if !lay.ordered(&next) {
                    continue;
                }
                let hole = matches!(o.label, Label::Hole(_));
                done[i / 64] |= 1 << (i % 64);
                let tail = self.best(done, remaining - 1, next_hole + u32::from(hole), &next);
                done[i / 64] &= !(1 << (i % 64));
                if let Some(tail) = tail {
                    let cand = ((i, Occ { left: l, ..o }), tail);
                    if winner.as_ref().is_none_or(|w| self.less(&cand, w)) {
                        winner = Some(cand);
                    }
                }
            }
        }
        let out = winner.map(|(o, tail)| {
            let mut v = Vec::with_capacity(tail.len() + 1);
            v.push(o);
            v.extend_from_slice(&tail);
            Rc::new(v)
        });
        self.memo.insert(key, out.clone());
        out
    }
}

fn search(lay: &Layout, mode: Mode) -> Option<Vec<(usize, Occ)>> {
    let n = lay.occs.len();
    let mut s = Search { lay, mode, memo: HashMap::new() };
    let mut done = vec![0u64; n.div_ceil(64).max(1)];
    s.best(&mut done, n, 0, &lay.dom).map(|v| v.to_vec())
}

/// Connected components of a layout, the floating ones nested by face.
struct Forest<'a> {
    lay: &'a Layout,
    floats: Vec<Vec<usize>>,
    /// `(face, float)` pairs directly inside the anchored part.
    top: Vec<(usize, usize)>,
    /// `(face, float)` pairs directly inside each float.
    inner: Vec<Vec<(usize, usize)>>,
}

impl<'a> Forest<'a> {
    fn new(lay: &'a Layout) -> Self {
        let n_wires = lay.reach.len();
        let n = lay.occs.len();
        let mut uf = UnionFind((0..n_wires + n).collect());
        for i in 0..n {
            for &w in lay.inputs[i].iter().chain(&lay.outputs[i]) {
                uf.union(w, n_wires + i);
            }
        }
        let anchored: Vec<usize> = lay.dom.iter().chain(&lay.cod).map(|&w| uf.find(w)).collect();
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut floats: Vec<Vec<usize>> = Vec::new();
        let mut comp_of_occ = vec![None; n];
        for i in 0..n {
            let c = uf.find(n_wires + i);
            if anchored.contains(&c) {
                continue;
            }
            let k = *index.entry(c).or_insert_with(|| {
                floats.push(Vec::new());
                floats.len() - 1
            });
            floats[k].push(i);
            comp_of_occ[i] = Some(k);
        }
        let mut comp_of_wire = vec![None; n_wires];
        for i in 0..n {
            for &w in &lay.outputs[i] {
                comp_of_wire[w] = comp_of_occ[i];
            }
        }
        let outer: Vec<usize> = floats.iter().map(|f| lay.place[f[0]]).collect();
        let mut top = Vec::new();
        let mut inner = vec![Vec::new(); floats.len()];
        for (k, &face) in outer.iter().enumerate() {
            let touching = (0..n_wires).filter(|&w| lay.left_face[w] == face || lay.right_face[w] == face);
            let mut owner = None;
            let mut on_top = face == lay.walls.0 || face == lay.walls.1;
            for w in touching {
                match comp_of_wire[w] {
                    None => on_top = true,
                    Some(p) if outer[p] != face => owner = Some(p),
                    Some(_) => {}
                }
            }
            match owner {
                Some(p) if !on_top => inner[p].push((face, k)),
                _ => top.push((face, k)),
            }
        }
        Forest { lay, floats, top, inner }
    }

    /// Schedules `members` on their own, then inserts the nested floats.
    fn emit(&self, members: &[usize], anchored: bool, kids: &[(usize, usize)]) -> Vec<Occ> {
        let lay = self.lay;
        let n_wires = lay.reach.len();
        let mut sub_id: Vec<Option<usize>> = vec![None; n_wires];
        let dom_len = if anchored { lay.dom.len() } else { 0 };
        if anchored {
            for (k, &w) in lay.dom.iter().enumerate() {
                sub_id[w] = Some(k);
            }
        }
        let mut next_id = dom_len;
        let mut frontier = lay.dom.clone();
        let mut sub_occs = Vec::with_capacity(members.len());
        let mut mi = 0;
        for i in 0..lay.occs.len() {
            let o = lay.occs[i];
            if mi < members.len() && members[mi] == i {
                mi += 1;
                let left = frontier[..o.left].iter().filter(|&&w| sub_id[w].is_some()).count();
                sub_occs.push(Occ { left, ..o });
                for &w in &lay.outputs[i] {
                    sub_id[w] = Some(next_id);
                    next_id += 1;
                }
            }
            frontier.splice(o.left..o.left + o.n_in, lay.outputs[i].iter().copied());
        }
        let sub = Layout::new(sub_occs, dom_len);
        let sched = search(&sub, Mode::Canonical).expect("the diagram's own schedule is always available");
        let face_of = |f: usize| -> usize {
            for w in 0..n_wires {
                if let Some(s) = sub_id[w] {
                    if lay.left_face[w] == f {
                        return sub.left_face[s];
                    }
                    if lay.right_face[w] == f {
                        return sub.right_face[s];
                    }
                }
            }
            if f == lay.walls.0 {
                sub.walls.0
            } else {
                debug_assert_eq!(f, lay.walls.1);
                sub.walls.1
            }
        };
        let mut pending: BTreeMap<usize, Vec<Vec<Occ>>> = BTreeMap::new();
        for &(f, k) in kids {
            let block = self.emit(&self.floats[k], false, &self.inner[k]);
            pending.entry(face_of(f)).or_default().push(block);
        }
        for blocks in pending.values_mut() {
            blocks.sort();
        }
        let mut out = Vec::new();
        let mut frontier = sub.dom.clone();
        for t in 0..=sched.len() {
            if !pending.is_empty() {
                let mut open: Vec<(usize, usize)> = pending
                    .keys()
                    .filter_map(|&f| (0..=frontier.len()).find(|&g| sub.gap_face(&frontier, g) == f).map(|g| (g, f)))
                    .collect();
                open.sort();
                for (g, f) in open {
                    for block in pending.remove(&f).unwrap() {
                        out.extend(block.into_iter().map(|o| Occ { left: o.left + g, ..o }));
                    }
                }
            }
            if let Some(&(i, o)) = sched.get(t) {
                frontier.splice(o.left..o.left + o.n_in, sub.outputs[i].iter().copied());
                out.push(o);
            }
        }
        debug_assert!(pending.is_empty(), "every face is open at some time");
        out
    }
}

pub(crate) fn occurrences(d: &Diagram) -> Vec<Occ> {
    d.slices()
        .iter()
        .map(|s| {
            let (i, o) = d.label_interface(s.label);
            Occ { left: s.left, label: s.label, n_in: i.len(), n_out: o.len() }
        })
        .collect()
}

pub(crate) fn rebuild(d: &Diagram, occs: &[Occ]) -> Vec<Slice> {
    let mut width = d.dom().len();
    occs.iter()
        .map(|o| {
            let s = Slice { left: o.left, label: o.label, right: width - o.left - o.n_in };
            width = width - o.n_in + o.n_out;
            s
        })
        .collect()
}

pub(crate) fn canonical_form(d: &Diagram) -> Diagram {
    let lay = Layout::new(occurrences(d), d.dom().len());
    let forest = Forest::new(&lay);
    let mut floating = vec![false; lay.occs.len()];
    for &i in forest.floats.iter().flatten() {
        floating[i] = true;
    }
    let anchored: Vec<usize> = (0..lay.occs.len()).filter(|&i| !floating[i]).collect();
    let occs = forest.emit(&anchored, true, &forest.top);
    let slices = rebuild(d, &occs);
    d.with_parts(d.dom().clone(), d.cod().clone(), slices, d.holes().to_vec())
}

/// An equivalent slice list in which the holes occur in index order, with
/// generators placed before holes wherever the wiring allows.
pub(crate) fn holes_in_order(d: &Diagram) -> Result<Diagram> {
    let lay = Layout::new(occurrences(d), d.dom().len());
    let occs: Vec<Occ> = search(&lay, Mode::HolesInOrder)
        .ok_or_else(|| Error::HoleOrder("no schedule places the holes in index order".into()))?
        .into_iter()
        .map(|(_, o)| o)
        .collect();
    let slices = rebuild(d, &occs);
    Ok(d.with_parts(d.dom().clone(), d.cod().clone(), slices, d.holes().to_vec()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::signatures::{word, Polygraph};

    fn sig() -> Arc<Polygraph> {
        Polygraph::new("p")
            .with_sort("a")
            .with_generator("f", &["a"], &["a"])
            .with_generator("g", &["a"], &["a"])
            .with_generator("s", &[], &[])
            .with_generator("e", &[], &["a"])
            .with_generator("k", &["a"], &[])
            .build()
            .unwrap()
    }

    fn d(s: &str) -> Diagram {
        let p = sig();
        let mut acc: Option<Diagram> = None;
        for part in s.split(';') {
            let mut row: Option<Diagram> = None;
            for t in part.split('*') {
                let t = t.trim();
                let x = if t == "1" {
                    Diagram::identity(&p, &word(&["a"])).unwrap()
                } else {
                    Diagram::generator(&p, t).unwrap()
                };
                row = Some(match row {
                    None => x,
                    Some(r) => r.tensor(&x).unwrap(),
                });
            }
            let row = row.unwrap();
            acc = Some(match acc {
                None => row,
                Some(a) => a.compose(&row).unwrap(),
            });
        }
        acc.unwrap()
    }

    #[test]
    fn idempotent_on_examples() {
        for s in ["f * g ; g * f", "s * 1 ; s * f", "e ; k", "e * e ; k * k", "1 * s ; f"] {
            let c = d(s).canonical_form();
            assert_eq!(c.canonical_form(), c, "{s}");
        }
    }

    #[test]
    fn disjoint_occurrences_commute() {
        assert_eq!(d("f * 1 ; 1 * g").canonical_form(), d("1 * g ; f * 1").canonical_form());
    }

    #[test]
    fn scalars_commute_with_each_other_but_not_across_wires() {
        let p = sig();
        let s = Diagram::generator(&p, "s").unwrap();
        let id = Diagram::identity(&p, &word(&["a"])).unwrap();
        assert!(!s.tensor(&id).unwrap().equal(&id.tensor(&s).unwrap()).unwrap());
        // A scalar slides past a wire's endpoint: e ; (s ⊗ id) = s ; e.
        let e = Diagram::generator(&p, "e").unwrap();
        assert!(e.compose(&s.tensor(&id).unwrap()).unwrap().equal(&s.compose(&e).unwrap()).unwrap());
    }

    #[test]
    fn arcs_slide_around_endpoints() {
        let chain = d("f ; k ; e ; g").canonical_form();
        assert_eq!(d("e * 1 ; g * f ; 1 * k").canonical_form(), chain);
        assert_eq!(d("1 * e ; f * g ; k * 1").canonical_form(), chain);
        let loop_then_wire = d("e ; k ; e").canonical_form();
        assert_eq!(d("e ; e * 1 ; k * 1").canonical_form(), loop_then_wire);
        assert_eq!(d("e ; 1 * e ; 1 * k").canonical_form(), loop_then_wire);
    }

    #[test]
    fn floating_components_are_a_multiset() {
        let a = d("e ; f ; k ; e ; g ; k");
        let b = d("e ; g ; k ; e ; f ; k");
        let c = d("e * e ; f * g ; k * k");
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_eq!(a.canonical_form(), c.canonical_form());
        assert_ne!(a.canonical_form(), d("e ; f ; g ; k ; e ; k").canonical_form());
    }

    #[test]
    fn many_constants_stay_fast() {
        let row = ["e"; 12].join(" * ");
        let kill = ["k"; 12].join(" * ");
        let sideways = (0..12).map(|_| "e ; k").collect::<Vec<_>>().join(" ; ");
        assert_eq!(d(&format!("{row} ; {kill}")).canonical_form(), d(&sideways).canonical_form());
        let c = d(&row).canonical_form();
        assert_eq!(c.size(), 12);
    }

    #[test]
    fn holes_follow_index_order() {
        let p = sig();
        let t = crate::diagrams::HoleType { dom: word(&["a"]), cod: word(&["a"]) };
        let h0 = Diagram::hole(&p, t.clone()).unwrap();
        let h1 = Diagram::hole(&p, t).unwrap();
        let two = h0.tensor(&h1).unwrap();
        let ordered = two.with_holes_in_order().unwrap();
        let labels: Vec<Label> = ordered.slices().iter().map(|s| s.label).collect();
        assert_eq!(labels, vec![Label::Hole(0), Label::Hole(1)]);
    }

    #[test]
    fn sequential_generators_stay_ordered() {
        assert!(!d("f ; g").equal(&d("g ; f")).unwrap());
    }
}
