//! Sorts, polygraphs, multigraphs and their morphisms, and the free symmetric
//! multigraph (`clique`) on a multigraph.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An interned sort name. Equality is by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A word over sorts, i.e. an object of a free monoidal category.
pub type Word = Vec<Sort>;

pub fn word(names: &[&str]) -> Word {
    names.iter().map(|n| Sort::new(n)).collect()
}

/// The equational regime layered over the free monoidal category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Doctrine {
    #[default]
    Free,
    Cartesian,
    Hypergraph,
}

impl Doctrine {
    pub fn keyword(self) -> &'static str {
        match self {
            Doctrine::Free => "free",
            Doctrine::Cartesian => "cartesian",
            Doctrine::Hypergraph => "hypergraph",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "free" => Some(Doctrine::Free),
            "cartesian" => Some(Doctrine::Cartesian),
            "hypergraph" => Some(Doctrine::Hypergraph),
            _ => None,
        }
    }
}

/// Structural generators injected by the cartesian and hypergraph doctrines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Structural {
    Swap(Sort, Sort),
    Copy(Sort),
    Delete(Sort),
    Mu(Sort),
    Eta(Sort),
    Delta(Sort),
    Eps(Sort),
}

impl Structural {
    pub fn name(&self) -> String {
        match self {
            Structural::Swap(a, b) => format!("swap[{a},{b}]"),
            Structural::Copy(a) => format!("copy[{a}]"),
            Structural::Delete(a) => format!("del[{a}]"),
            Structural::Mu(a) => format!("mu[{a}]"),
            Structural::Eta(a) => format!("eta[{a}]"),
            Structural::Delta(a) => format!("delta[{a}]"),
            Structural::Eps(a) => format!("eps[{a}]"),
        }
    }

    pub fn interface(&self) -> (Word, Word) {
        match self {
            Structural::Swap(a, b) => (vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]),
            Structural::Copy(a) | Structural::Delta(a) => (vec![a.clone()], vec![a.clone(), a.clone()]),
            Structural::Delete(a) | Structural::Eps(a) => (vec![a.clone()], vec![]),
            Structural::Mu(a) => (vec![a.clone(), a.clone()], vec![a.clone()]),
            Structural::Eta(a) => (vec![], vec![a.clone()]),
        }
    }
}

/// Index of a generator inside its polygraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: Word,
    pub coarity: Word,
    pub structural: Option<Structural>,
}

/// A signature of generators with word-shaped interfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygraph {
    pub name: String,
    pub doctrine: Doctrine,
    sorts: Vec<Sort>,
    generators: Vec<Generator>,
    index: HashMap<String, GenId>,
}

impl Polygraph {
    pub fn new(name: &str) -> Self {
        Polygraph {
            name: name.to_string(),
            doctrine: Doctrine::Free,
            sorts: Vec::new(),
            generators: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn with_doctrine(mut self, doctrine: Doctrine) -> Self {
        self.doctrine = doctrine;
        self
    }

    pub fn with_sort(mut self, name: &str) -> Self {
        self.add_sort(Sort::new(name));
        self
    }

    pub fn with_generator(mut self, name: &str, arity: &[&str], coarity: &[&str]) -> Self {
        self.add_generator(name, word(arity), word(coarity));
        self
    }

    /// Adds a sort without checking for duplicates; see [`Polygraph::validate`].
    pub fn add_sort(&mut self, sort: Sort) {
        self.sorts.push(sort);
    }

    /// Adds a generator without checking; see [`Polygraph::validate`].
    pub fn add_generator(&mut self, name: &str, arity: Word, coarity: Word) -> GenId {
        self.push_generator(Generator { name: name.to_string(), arity, coarity, structural: None })
    }

    fn push_generator(&mut self, g: Generator) -> GenId {
        let id = GenId(self.generators.len() as u32);
        self.index.entry(g.name.clone()).or_insert(id);
        self.generators.push(g);
        id
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn gen(&self, id: GenId) -> &Generator {
        &self.generators[id.index()]
    }

    pub fn gen_ids(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.generators.len() as u32).map(GenId)
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.index.get(name).copied()
    }

    pub fn has_sort(&self, s: &Sort) -> bool {
        self.sorts.contains(s)
    }

    pub fn structural(&self, s: &Structural) -> Option<GenId> {
        self.lookup(&s.name())
    }

    /// User-declared (non-structural) generators.
    pub fn base_generators(&self) -> impl Iterator<Item = (GenId, &Generator)> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.structural.is_none())
            .map(|(i, g)| (GenId(i as u32), g))
    }

    pub fn check_word(&self, w: &[Sort]) -> Result<()> {
        match w.iter().find(|s| !self.has_sort(s)) {
            Some(s) => Err(Error::UndeclaredSort(s.name().to_string())),
            None => Ok(()),
        }
    }

    /// Checks every invariant and reports each violation.
    pub fn validate(&self) -> std::result::Result<(), Vec<Error>> {
        let mut report = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for s in &self.sorts {
            if !seen.insert(s.clone()) {
                report.push(Error::DuplicateName(s.name().to_string()));
            }
        }
        let mut names = std::collections::HashSet::new();
        for g in &self.generators {
            if !names.insert(g.name.as_str()) {
                report.push(Error::DuplicateName(g.name.clone()));
            }
            for s in g.arity.iter().chain(&g.coarity) {
                if !self.has_sort(s) {
                    report.push(Error::UndeclaredSort(s.name().to_string()));
                }
            }
        }
        if report.is_empty() {
            Ok(())
        } else {
            Err(report)
        }
    }

    /// Validates, injects the doctrine's structural generators and freezes.
    pub fn build(mut self) -> std::result::Result<Arc<Polygraph>, Vec<Error>> {
        self.validate()?;
        self.inject_structural();
        Ok(Arc::new(self))
    }

    fn inject_structural(&mut self) {
        if self.generators.iter().any(|g| g.structural.is_some()) {
            return;
        }
        let sorts = self.sorts.clone();
        let mut extra = Vec::new();
        if self.doctrine != Doctrine::Free {
            for a in &sorts {
                for b in &sorts {
                    extra.push(Structural::Swap(a.clone(), b.clone()));
                }
            }
        }
        for a in &sorts {
            match self.doctrine {
                Doctrine::Free => {}
                Doctrine::Cartesian => {
                    extra.push(Structural::Copy(a.clone()));
                    extra.push(Structural::Delete(a.clone()));
                }
                Doctrine::Hypergraph => {
                    extra.push(Structural::Mu(a.clone()));
                    extra.push(Structural::Eta(a.clone()));
                    extra.push(Structural::Delta(a.clone()));
                    extra.push(Structural::Eps(a.clone()));
                }
            }
        }
        for s in extra {
            let (arity, coarity) = s.interface();
            self.push_generator(Generator { name: s.name(), arity, coarity, structural: Some(s) });
        }
    }
}

/// Free function form of [`Polygraph::validate`].
pub fn validate_polygraph(p: &Polygraph) -> std::result::Result<(), Vec<Error>> {
    p.validate()
}

/// A morphism of polygraphs: a sort map and a generator map preserving interfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygraphMorphism {
    pub source: Arc<Polygraph>,
    pub target: Arc<Polygraph>,
    pub sort_map: BTreeMap<Sort, Sort>,
    pub gen_map: Vec<GenId>,
}

impl PolygraphMorphism {
    pub fn new(
        source: Arc<Polygraph>,
        target: Arc<Polygraph>,
        sort_map: BTreeMap<Sort, Sort>,
        gen_map: Vec<GenId>,
    ) -> Result<Self> {
        let m = PolygraphMorphism { source, target, sort_map, gen_map };
        m.check()?;
        Ok(m)
    }

    pub fn identity(p: &Arc<Polygraph>) -> Self {
        PolygraphMorphism {
            source: p.clone(),
            target: p.clone(),
            sort_map: p.sorts().iter().map(|s| (s.clone(), s.clone())).collect(),
            gen_map: p.gen_ids().collect(),
        }
    }

    pub fn map_sort(&self, s: &Sort) -> Sort {
        self.sort_map[s].clone()
    }

    pub fn map_word(&self, w: &[Sort]) -> Word {
        w.iter().map(|s| self.map_sort(s)).collect()
    }

    pub fn map_gen(&self, g: GenId) -> GenId {
        self.gen_map[g.index()]
    }

    fn check(&self) -> Result<()> {
        for s in self.source.sorts() {
            match self.sort_map.get(s) {
                None => return Err(Error::InvalidMorphism(format!("sort `{s}` unmapped"))),
                Some(t) if !self.target.has_sort(t) => {
                    return Err(Error::UndeclaredSort(t.name().to_string()))
                }
                _ => {}
            }
        }
        if self.gen_map.len() != self.source.generators().len() {
            return Err(Error::InvalidMorphism("generator map is not total".into()));
        }
        for (g, img) in self.source.generators().iter().zip(&self.gen_map) {
            let Some(h) = self.target.generators().get(img.index()) else {
                return Err(Error::InvalidMorphism(format!("`{}` maps outside the target", g.name)));
            };
            if self.map_word(&g.arity) != h.arity || self.map_word(&g.coarity) != h.coarity {
                return Err(Error::InvalidMorphism(format!(
                    "`{}` ↦ `{}` does not preserve the interface",
                    g.name, h.name
                )));
            }
        }
        Ok(())
    }

    /// Diagrammatic composite `self ⨾ other`.
    pub fn then(&self, other: &PolygraphMorphism) -> Result<PolygraphMorphism> {
        if *self.target != *other.source {
            return Err(Error::PolygraphMismatch(self.target.name.clone(), other.source.name.clone()));
        }
        Ok(PolygraphMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            sort_map: self.sort_map.iter().map(|(k, v)| (k.clone(), other.map_sort(v))).collect(),
            gen_map: self.gen_map.iter().map(|g| other.map_gen(*g)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub inputs: Word,
    pub output: Sort,
}

/// A signature of operations with a list of inputs and a single output.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    pub name: String,
    pub sorts: Vec<Sort>,
    pub ops: Vec<Operation>,
}

impl Multigraph {
    pub fn new(name: &str) -> Self {
        Multigraph { name: name.to_string(), ..Default::default() }
    }

    pub fn with_sort(mut self, s: &str) -> Self {
        self.sorts.push(Sort::new(s));
        self
    }

    pub fn with_op(mut self, name: &str, inputs: &[&str], output: &str) -> Self {
        self.ops.push(Operation { name: name.to_string(), inputs: word(inputs), output: Sort::new(output) });
        self
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Error>> {
        let mut report = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for s in &self.sorts {
            if !seen.insert(s) {
                report.push(Error::DuplicateName(s.name().to_string()));
            }
        }
        let mut names = std::collections::HashSet::new();
        for op in &self.ops {
            if !names.insert(op.name.as_str()) {
                report.push(Error::DuplicateName(op.name.clone()));
            }
            for s in op.inputs.iter().chain(std::iter::once(&op.output)) {
                if !self.sorts.contains(s) {
                    report.push(Error::UndeclaredSort(s.name().to_string()));
                }
            }
        }
        if report.is_empty() {
            Ok(())
        } else {
            Err(report)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultigraphMorphism {
    pub sort_map: BTreeMap<Sort, Sort>,
    pub op_map: Vec<usize>,
}

impl MultigraphMorphism {
    pub fn check(&self, source: &Multigraph, target: &Multigraph) -> Result<()> {
        if self.op_map.len() != source.ops.len() {
            return Err(Error::InvalidMorphism("operation map is not total".into()));
        }
        let map = |s: &Sort| {
            self.sort_map
                .get(s)
                .cloned()
                .ok_or_else(|| Error::InvalidMorphism(format!("sort `{s}` unmapped")))
        };
        for (op, &img) in source.ops.iter().zip(&self.op_map) {
            let t = target
                .ops
                .get(img)
                .ok_or_else(|| Error::InvalidMorphism(format!("`{}` maps outside the target", op.name)))?;
            let inputs = op.inputs.iter().map(map).collect::<Result<Word>>()?;
            if inputs != t.inputs || map(&op.output)? != t.output {
                return Err(Error::InvalidMorphism(format!("`{}` ↦ `{}` is ill-typed", op.name, t.name)));
            }
        }
        Ok(())
    }

    pub fn then(&self, other: &MultigraphMorphism) -> MultigraphMorphism {
        MultigraphMorphism {
            sort_map: self.sort_map.iter().map(|(k, v)| (k.clone(), other.sort_map[v].clone())).collect(),
            op_map: self.op_map.iter().map(|&o| other.op_map[o]).collect(),
        }
    }
}

/// A permutation of `0..n`, as the list of images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(n));
            }
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Reorders a list: `(l·σ)[i] = l[σ(i)]`.
    pub fn apply<T: Clone>(&self, list: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| list[i].clone()).collect()
    }

    /// The product for which `apply(apply(l, σ), τ) = apply(l, σ·τ)`.
    pub fn product(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    go(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        go(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// An element `f_σ` of a clique: operation `op` with inputs reordered by `σ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliqueElement {
    pub op: usize,
    pub perm: Permutation,
}

/// A multigraph with symmetric-group actions on its operations. Orbits are
/// kept implicit as (representative, permutation) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricMultigraph {
    base: Multigraph,
}

/// Largest arity for which orbits are materialized.
pub const MAX_MATERIALIZED_ARITY: usize = 6;

impl SymmetricMultigraph {
    pub fn base(&self) -> &Multigraph {
        &self.base
    }

    pub fn inputs(&self, e: &CliqueElement) -> Word {
        e.perm.apply(&self.base.ops[e.op].inputs)
    }

    pub fn output(&self, e: &CliqueElement) -> &Sort {
        &self.base.ops[e.op].output
    }

    /// `σ*`, sending an element with inputs `Y` to the element with inputs `Y·σ`.
    pub fn act(&self, sigma: &Permutation, e: &CliqueElement) -> CliqueElement {
        CliqueElement { op: e.op, perm: e.perm.product(sigma) }
    }

    pub fn representative_of(&self, op: usize) -> CliqueElement {
        CliqueElement { op, perm: Permutation::identity(self.base.ops[op].inputs.len()) }
    }

    /// The orbit of an operation, or `None` above [`MAX_MATERIALIZED_ARITY`].
    pub fn orbit(&self, op: usize) -> Option<Vec<CliqueElement>> {
        let n = self.base.ops[op].inputs.len();
        if n > MAX_MATERIALIZED_ARITY {
            return None;
        }
        Some(Permutation::all(n).into_iter().map(|perm| CliqueElement { op, perm }).collect())
    }
}

/// The free symmetric multigraph on `m`.
pub fn clique(m: &Multigraph) -> SymmetricMultigraph {
    SymmetricMultigraph { base: m.clone() }
}

/// Chooses one element per orbit (the identity-permuted one).
pub fn representative(s: &SymmetricMultigraph) -> Multigraph {
    s.base.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_polygraph_is_valid() {
        assert!(Polygraph::new("empty").validate().is_ok());
    }

    #[test]
    fn braid_polygraph_is_valid() {
        let p = Polygraph::new("braid")
            .with_sort("w")
            .with_generator("over", &["w", "w"], &["w", "w"])
            .with_generator("under", &["w", "w"], &["w", "w"]);
        assert!(validate_polygraph(&p).is_ok());
    }

    #[test]
    fn undeclared_sort_is_reported() {
        let p = Polygraph::new("bad").with_sort("a").with_generator("f", &["a", "b"], &["a"]);
        assert_eq!(p.validate(), Err(vec![Error::UndeclaredSort("b".into())]));
    }

    #[test]
    fn every_violation_is_listed() {
        let p = Polygraph::new("bad")
            .with_sort("a")
            .with_sort("a")
            .with_generator("f", &["c"], &[])
            .with_generator("f", &[], &[]);
        let report = p.validate().unwrap_err();
        assert_eq!(report.len(), 3);
        assert!(report.contains(&Error::DuplicateName("a".into())));
        assert!(report.contains(&Error::DuplicateName("f".into())));
        assert!(report.contains(&Error::UndeclaredSort("c".into())));
    }

    #[test]
    fn structural_generators_follow_the_doctrine() {
        let p = Polygraph::new("t")
            .with_doctrine(Doctrine::Cartesian)
            .with_sort("a")
            .with_generator("f", &["a", "a"], &["a"])
            .build()
            .unwrap();
        assert!(p.lookup("copy[a]").is_some());
        assert!(p.lookup("del[a]").is_some());
        assert!(p.lookup("swap[a,a]").is_some());
        assert!(p.lookup("mu[a]").is_none());
        assert_eq!(p.base_generators().count(), 1);
    }

    #[test]
    fn binary_op_orbit_has_two_elements() {
        let m = Multigraph::new("m").with_sort("X").with_sort("Y").with_sort("Z").with_op("f", &["X", "Y"], "Z");
        let s = clique(&m);
        let orbit = s.orbit(0).unwrap();
        assert_eq!(orbit.len(), 2);
        assert_eq!(s.inputs(&orbit[1]), word(&["Y", "X"]));
    }

    #[test]
    fn nullary_op_orbit_is_a_singleton() {
        let m = Multigraph::new("m").with_sort("Y").with_op("c", &[], "Y");
        assert_eq!(clique(&m).orbit(0).unwrap().len(), 1);
    }

    #[test]
    fn ternary_action_is_associative_and_unital() {
        let m = Multigraph::new("m").with_sort("X").with_sort("Y").with_op("f", &["X", "X", "X"], "Y");
        let s = clique(&m);
        let orbit = s.orbit(0).unwrap();
        assert_eq!(orbit.len(), 6);
        let perms = Permutation::all(3);
        for e in &orbit {
            assert_eq!(&s.act(&Permutation::identity(3), e), e);
            for sig in &perms {
                assert_eq!(s.inputs(&s.act(sig, e)), sig.apply(&s.inputs(e)));
                for tau in &perms {
                    assert_eq!(s.act(tau, &s.act(sig, e)), s.act(&sig.product(tau), e));
                }
            }
        }
    }

    #[test]
    fn representative_round_trips() {
        let m = Multigraph::new("m").with_sort("X").with_sort("Y").with_sort("Z").with_op("f", &["X", "Y"], "Z");
        let r = representative(&clique(&m));
        assert_eq!(r, m);
        assert_eq!(clique(&r), clique(&m));
    }

    #[test]
    fn permutation_from_images_rejects_repeats() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![1, 0]).is_ok());
    }
}
