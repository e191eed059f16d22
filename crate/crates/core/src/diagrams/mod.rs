//! Morphisms of the free strict monoidal category over a polygraph, stored as
//! lists of whiskered generators, with holes for diagram contexts.

mod canonical;
mod context;
mod term;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use context::{make_context, DiagramContext};
pub use term::Term;

use crate::error::{Error, Result};
use crate::signatures::{GenId, Polygraph, PolygraphMorphism, Sort, Word};

/// What a slice applies: a generator of the polygraph or a hole of the context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Gen(GenId),
    Hole(u32),
}

/// `id_{left} ⊗ label ⊗ id_{right}` against the current frontier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slice {
    pub left: usize,
    pub label: Label,
    pub right: usize,
}

/// The interface `⟨dom|cod⟩` of a hole.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HoleType {
    pub dom: Word,
    pub cod: Word,
}

#[derive(Clone)]
pub struct Diagram {
    sig: Arc<Polygraph>,
    dom: Word,
    cod: Word,
    slices: Vec<Slice>,
    holes: Vec<HoleType>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        same_sig(&self.sig, &other.sig)
            && self.dom == other.dom
            && self.cod == other.cod
            && self.slices == other.slices
            && self.holes == other.holes
    }
}

impl Eq for Diagram {}

impl Hash for Diagram {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dom.hash(state);
        self.cod.hash(state);
        self.slices.hash(state);
        self.holes.hash(state);
    }
}

impl PartialOrd for Diagram {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Diagram {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.dom, &self.cod, &self.slices, &self.holes)
            .cmp(&(&other.dom, &other.cod, &other.slices, &other.holes))
            .then_with(|| self.sig.name.cmp(&other.sig.name))
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({})", self)
    }
}

pub fn same_sig(a: &Arc<Polygraph>, b: &Arc<Polygraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Diagram {
    /// Builds a diagram from slices, checking every frontier.
    pub fn from_slices(sig: Arc<Polygraph>, dom: Word, slices: Vec<Slice>, holes: Vec<HoleType>) -> Result<Self> {
        sig.check_word(&dom)?;
        for h in &holes {
            sig.check_word(&h.dom)?;
            sig.check_word(&h.cod)?;
        }
        let mut used = vec![false; holes.len()];
        let mut frontier = dom.clone();
        for s in &slices {
            let (input, output) = match s.label {
                Label::Gen(g) => {
                    let g = sig.generators().get(g.index()).ok_or_else(|| Error::UnknownGenerator(format!("#{}", g.0)))?;
                    (&g.arity, &g.coarity)
                }
                Label::Hole(h) => {
                    let slot = used
                        .get_mut(h as usize)
                        .ok_or_else(|| Error::UnknownVariable(format!("#{h}")))?;
                    if std::mem::replace(slot, true) {
                        return Err(Error::NonlinearVariable(format!("#{h}")));
                    }
                    let t = &holes[h as usize];
                    (&t.dom, &t.cod)
                }
            };
            if s.left + input.len() + s.right != frontier.len()
                || frontier[s.left..s.left + input.len()] != input[..]
            {
                return Err(Error::InterfaceMismatch {
                    expected: input.clone(),
                    found: frontier.get(s.left..).map(|w| w.to_vec()).unwrap_or_default(),
                });
            }
            frontier.splice(s.left..s.left + input.len(), output.iter().cloned());
        }
        if let Some(h) = used.iter().position(|u| !u) {
            return Err(Error::UnknownVariable(format!("#{h} is never placed")));
        }
        Ok(Diagram { sig, dom, cod: frontier, slices, holes })
    }

    pub fn identity(sig: &Arc<Polygraph>, w: &[Sort]) -> Result<Self> {
        sig.check_word(w)?;
        Ok(Diagram { sig: sig.clone(), dom: w.to_vec(), cod: w.to_vec(), slices: Vec::new(), holes: Vec::new() })
    }

    pub fn of_generator(sig: &Arc<Polygraph>, g: GenId) -> Result<Self> {
        let gen = sig.generators().get(g.index()).ok_or_else(|| Error::UnknownGenerator(format!("#{}", g.0)))?;
        Ok(Diagram {
            sig: sig.clone(),
            dom: gen.arity.clone(),
            cod: gen.coarity.clone(),
            slices: vec![Slice { left: 0, label: Label::Gen(g), right: 0 }],
            holes: Vec::new(),
        })
    }

    pub fn generator(sig: &Arc<Polygraph>, name: &str) -> Result<Self> {
        let g = sig.lookup(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Self::of_generator(sig, g)
    }

    /// A single hole `⟨dom|cod⟩`.
    pub fn hole(sig: &Arc<Polygraph>, t: HoleType) -> Result<Self> {
        sig.check_word(&t.dom)?;
        sig.check_word(&t.cod)?;
        Ok(Diagram {
            sig: sig.clone(),
            dom: t.dom.clone(),
            cod: t.cod.clone(),
            slices: vec![Slice { left: 0, label: Label::Hole(0), right: 0 }],
            holes: vec![t],
        })
    }

    pub fn sig(&self) -> &Arc<Polygraph> {
        &self.sig
    }

    pub fn dom(&self) -> &Word {
        &self.dom
    }

    pub fn cod(&self) -> &Word {
        &self.cod
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn holes(&self) -> &[HoleType] {
        &self.holes
    }

    pub fn is_identity(&self) -> bool {
        self.slices.is_empty()
    }

    /// Number of generator occurrences (holes excluded).
    pub fn size(&self) -> usize {
        self.slices.iter().filter(|s| matches!(s.label, Label::Gen(_))).count()
    }

    pub fn count_generator(&self, g: GenId) -> usize {
        self.slices.iter().filter(|s| s.label == Label::Gen(g)).count()
    }

    pub fn label_interface(&self, label: Label) -> (&Word, &Word) {
        match label {
            Label::Gen(g) => {
                let g = self.sig.gen(g);
                (&g.arity, &g.coarity)
            }
            Label::Hole(h) => {
                let t = &self.holes[h as usize];
                (&t.dom, &t.cod)
            }
        }
    }

    pub fn label_name(&self, label: Label) -> String {
        match label {
            Label::Gen(g) => self.sig.gen(g).name.clone(),
            Label::Hole(h) => format!("#{h}"),
        }
    }

    /// Frontier before each slice, followed by the codomain.
    pub fn frontiers(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.slices.len() + 1);
        let mut frontier = self.dom.clone();
        for s in &self.slices {
            out.push(frontier.clone());
            let (input, output) = self.label_interface(s.label);
            frontier.splice(s.left..s.left + input.len(), output.iter().cloned());
        }
        out.push(frontier);
        out
    }

    fn check_same_sig(&self, other: &Diagram) -> Result<()> {
        if same_sig(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(Error::PolygraphMismatch(self.sig.name.clone(), other.sig.name.clone()))
        }
    }

    fn shifted_slices(&self, left: usize, right: usize, hole_offset: u32) -> impl Iterator<Item = Slice> + '_ {
        self.slices.iter().map(move |s| Slice {
            left: s.left + left,
            right: s.right + right,
            label: match s.label {
                Label::Hole(h) => Label::Hole(h + hole_offset),
                l => l,
            },
        })
    }

    /// Sequential composite `self ⨾ other`.
    pub fn compose(&self, other: &Diagram) -> Result<Diagram> {
        self.check_same_sig(other)?;
        if self.cod != other.dom {
            return Err(Error::InterfaceMismatch { expected: self.cod.clone(), found: other.dom.clone() });
        }
        let offset = self.holes.len() as u32;
        let mut slices = self.slices.clone();
        slices.extend(other.shifted_slices(0, 0, offset));
        let mut holes = self.holes.clone();
        holes.extend(other.holes.iter().cloned());
        Ok(Diagram { sig: self.sig.clone(), dom: self.dom.clone(), cod: other.cod.clone(), slices, holes })
    }

    /// Parallel composite `self ⊗ other`: the slices of `self` first.
    pub fn tensor(&self, other: &Diagram) -> Result<Diagram> {
        self.check_same_sig(other)?;
        let offset = self.holes.len() as u32;
        let mut slices: Vec<Slice> = self.shifted_slices(0, other.dom.len(), 0).collect();
        slices.extend(other.shifted_slices(self.cod.len(), 0, offset));
        let mut holes = self.holes.clone();
        holes.extend(other.holes.iter().cloned());
        let cat = |a: &Word, b: &Word| a.iter().chain(b).cloned().collect::<Word>();
        Ok(Diagram {
            sig: self.sig.clone(),
            dom: cat(&self.dom, &other.dom),
            cod: cat(&self.cod, &other.cod),
            slices,
            holes,
        })
    }

    /// `id_left ⊗ self ⊗ id_right`.
    pub fn whisker(&self, left: &[Sort], right: &[Sort]) -> Diagram {
        let cat = |a: &[Sort], b: &[Sort], c: &[Sort]| a.iter().chain(b).chain(c).cloned().collect::<Word>();
        Diagram {
            sig: self.sig.clone(),
            dom: cat(left, &self.dom, right),
            cod: cat(left, &self.cod, right),
            slices: self.shifted_slices(left.len(), right.len(), 0).collect(),
            holes: self.holes.clone(),
        }
    }

    /// The sub-diagram made of slices `range`, starting at the matching frontier.
    pub fn segment(&self, range: std::ops::Range<usize>) -> Diagram {
        let frontiers = self.frontiers();
        let slices = self.slices[range.clone()].to_vec();
        Diagram {
            sig: self.sig.clone(),
            dom: frontiers[range.start].clone(),
            cod: frontiers[range.end].clone(),
            slices,
            holes: self.holes.clone(),
        }
        .compact_holes()
    }

    /// Drops holes that no slice references and renumbers the rest in order.
    pub(crate) fn compact_holes(mut self) -> Diagram {
        let mut map = vec![None; self.holes.len()];
        let mut holes = Vec::new();
        for i in 0..self.holes.len() {
            if self.slices.iter().any(|s| s.label == Label::Hole(i as u32)) {
                map[i] = Some(holes.len() as u32);
                holes.push(self.holes[i].clone());
            }
        }
        for s in &mut self.slices {
            if let Label::Hole(h) = s.label {
                s.label = Label::Hole(map[h as usize].expect("referenced hole"));
            }
        }
        self.holes = holes;
        self
    }

    pub(crate) fn with_parts(&self, dom: Word, cod: Word, slices: Vec<Slice>, holes: Vec<HoleType>) -> Diagram {
        Diagram { sig: self.sig.clone(), dom, cod, slices, holes }
    }

    /// Deterministic normal form: equal morphisms have identical normal forms.
    pub fn canonical_form(&self) -> Diagram {
        canonical::canonical_form(self)
    }

    /// An equivalent slice list in which holes occur in index order.
    pub fn with_holes_in_order(&self) -> Result<Diagram> {
        canonical::holes_in_order(self)
    }

    /// Equality in the free strict monoidal category.
    pub fn equal(&self, other: &Diagram) -> Result<bool> {
        self.check_same_sig(other)?;
        Ok(self.dom == other.dom
            && self.cod == other.cod
            && self.holes == other.holes
            && self.canonical_form().slices == other.canonical_form().slices)
    }

    /// Image under the free monoidal functor of a polygraph morphism.
    pub fn map(&self, m: &PolygraphMorphism) -> Result<Diagram> {
        if !same_sig(&self.sig, &m.source) {
            return Err(Error::PolygraphMismatch(self.sig.name.clone(), m.source.name.clone()));
        }
        let slices = self
            .slices
            .iter()
            .map(|s| Slice {
                label: match s.label {
                    Label::Gen(g) => Label::Gen(m.map_gen(g)),
                    l => l,
                },
                ..*s
            })
            .collect();
        let holes = self
            .holes
            .iter()
            .map(|h| HoleType { dom: m.map_word(&h.dom), cod: m.map_word(&h.cod) })
            .collect();
        Ok(Diagram { sig: m.target.clone(), dom: m.map_word(&self.dom), cod: m.map_word(&self.cod), slices, holes })
    }

    /// The diagram as a composite of whiskered generators.
    pub fn to_term(&self) -> Term {
        let frontiers = self.frontiers();
        let mut acc = Term::Id(self.dom.clone());
        for (s, frontier) in self.slices.iter().zip(&frontiers) {
            let (input, _) = self.label_interface(s.label);
            let core = match s.label {
                Label::Gen(g) => Term::Gen(g),
                Label::Hole(h) => Term::Hole { var: format!("#{h}"), ty: self.holes[h as usize].clone() },
            };
            let left = Term::Id(frontier[..s.left].to_vec());
            let right = Term::Id(frontier[s.left + input.len()..].to_vec());
            let slice = Term::par(Term::par(left, core), right);
            acc = Term::seq(acc, slice);
        }
        acc
    }
}

impl fmt::Display for Diagram {
    /// Expression syntax: slices joined by `;`, each `id[..] * gen * id[..]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_expr(f, &|h| format!("#{h}"))
    }
}

impl Diagram {
    /// Expression text with holes printed as `[name(h)]`.
    pub fn display_with(&self, name: &dyn Fn(u32) -> String) -> String {
        let mut s = String::new();
        self.write_expr(&mut s, name).expect("writing to a string");
        s
    }

    fn write_expr(&self, f: &mut impl fmt::Write, name: &dyn Fn(u32) -> String) -> fmt::Result {
        let frontiers = self.frontiers();
        if self.slices.is_empty() {
            return write_id(f, &self.dom);
        }
        for (i, (s, frontier)) in self.slices.iter().zip(&frontiers).enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            let (input, _) = self.label_interface(s.label);
            if s.left > 0 {
                write_id(f, &frontier[..s.left])?;
                f.write_str(" * ")?;
            }
            match s.label {
                Label::Gen(g) => f.write_str(&self.sig.gen(g).name)?,
                Label::Hole(h) => write!(f, "[{}]", name(h))?,
            }
            if s.right > 0 {
                f.write_str(" * ")?;
                write_id(f, &frontier[s.left + input.len()..])?;
            }
        }
        Ok(())
    }
}

pub(crate) fn write_id(f: &mut impl fmt::Write, w: &[Sort]) -> fmt::Result {
    f.write_str("id[")?;
    for (i, s) in w.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{s}")?;
    }
    f.write_str("]")
}
