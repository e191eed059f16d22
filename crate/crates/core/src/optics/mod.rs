//! Raw optics, the optical contour of a rule signature, the induced monoidal
//! functor, and the check that a context-free language is the functor image of
//! its regular representative.

mod contour;
mod functor;
mod verify;

pub use contour::{
    contour_of_derivation, derivation_of_contour, optical_contour, raw_representative, regular_representative,
    ContourPolygraph, RawRepresentative,
};
pub use functor::{apply_functor, induced_functor, MonoidalFunctor};
pub use verify::{verify_representation, VerifyReport};

use std::sync::Arc;

use crate::diagrams::{Diagram, DiagramContext, HoleType, Label};
use crate::error::{Error, Result};
use crate::signatures::{Polygraph, Word};

/// `f₀ : S → M₁A₁N₁`, `fᵢ : MᵢBᵢNᵢ → Mᵢ₊₁Aᵢ₊₁Nᵢ₊₁`, `fₙ : MₙBₙNₙ → T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOptic {
    pub dom: Word,
    pub cod: Word,
    pub holes: Vec<HoleType>,
    pub m: Vec<Word>,
    pub n: Vec<Word>,
    pub parts: Vec<Diagram>,
}

fn cat(parts: &[&[crate::signatures::Sort]]) -> Word {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

impl RawOptic {
    pub fn new(
        dom: Word,
        cod: Word,
        holes: Vec<HoleType>,
        m: Vec<Word>,
        n: Vec<Word>,
        parts: Vec<Diagram>,
    ) -> Result<Self> {
        let o = RawOptic { dom, cod, holes, m, n, parts };
        o.validate()?;
        Ok(o)
    }

    pub fn arity(&self) -> usize {
        self.holes.len()
    }

    pub fn sig(&self) -> &Arc<Polygraph> {
        self.parts[0].sig()
    }

    /// The nullary optic of a closed diagram.
    pub fn closed(d: Diagram) -> Self {
        RawOptic { dom: d.dom().clone(), cod: d.cod().clone(), holes: vec![], m: vec![], n: vec![], parts: vec![d] }
    }

    /// `(id_A, id_B)` with empty padding: glues to a bare hole.
    pub fn identity(sig: &Arc<Polygraph>, t: &HoleType) -> Result<Self> {
        RawOptic::new(
            t.dom.clone(),
            t.cod.clone(),
            vec![t.clone()],
            vec![vec![]],
            vec![vec![]],
            vec![Diagram::identity(sig, &t.dom)?, Diagram::identity(sig, &t.cod)?],
        )
    }

    /// Wires entering part `i` and leaving it.
    fn part_interface(&self, i: usize) -> (Word, Word) {
        let k = self.holes.len();
        let input = if i == 0 { self.dom.clone() } else { cat(&[&self.m[i - 1], &self.holes[i - 1].cod, &self.n[i - 1]]) };
        let output = if i == k { self.cod.clone() } else { cat(&[&self.m[i], &self.holes[i].dom, &self.n[i]]) };
        (input, output)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.holes.len();
        if self.parts.len() != k + 1 || self.m.len() != k || self.n.len() != k {
            return Err(Error::LengthMismatch { expected: k + 1, found: self.parts.len() });
        }
        for (i, p) in self.parts.iter().enumerate() {
            if !p.holes().is_empty() {
                return Err(Error::InvalidMorphism("optic components must be closed".into()));
            }
            let (input, output) = self.part_interface(i);
            if *p.dom() != input {
                return Err(Error::InterfaceMismatch { expected: input, found: p.dom().clone() });
            }
            if *p.cod() != output {
                return Err(Error::InterfaceMismatch { expected: output, found: p.cod().clone() });
            }
        }
        Ok(())
    }
}

/// `f₀ ⨾ (id_{M₁} ⊗ □₁ ⊗ id_{N₁}) ⨾ f₁ ⨾ … ⨾ fₙ`.
pub fn glue(o: &RawOptic) -> Result<DiagramContext> {
    let sig = o.sig().clone();
    let mut acc = o.parts[0].clone();
    for i in 0..o.holes.len() {
        let hole = Diagram::hole(&sig, o.holes[i].clone())?.whisker(&o.m[i], &o.n[i]);
        acc = acc.compose(&hole)?.compose(&o.parts[i + 1])?;
    }
    Ok(DiagramContext::new(acc))
}

/// Plugs `f` into hole `i` of `g`.
pub fn raw_compose(f: &RawOptic, g: &RawOptic, i: usize) -> Result<RawOptic> {
    let t = g.holes.get(i).ok_or_else(|| Error::UnknownVariable(format!("#{i}")))?;
    if f.dom != t.dom {
        return Err(Error::InterfaceMismatch { expected: t.dom.clone(), found: f.dom.clone() });
    }
    if f.cod != t.cod {
        return Err(Error::InterfaceMismatch { expected: t.cod.clone(), found: f.cod.clone() });
    }
    let (gm, gn) = (&g.m[i], &g.n[i]);
    let w = |d: &Diagram| d.whisker(gm, gn);
    let nf = f.holes.len();
    let mut parts: Vec<Diagram> = g.parts[..i].to_vec();
    if nf == 0 {
        parts.push(g.parts[i].compose(&w(&f.parts[0]))?.compose(&g.parts[i + 1])?);
    } else {
        parts.push(g.parts[i].compose(&w(&f.parts[0]))?);
        for p in &f.parts[1..nf] {
            parts.push(w(p));
        }
        parts.push(w(&f.parts[nf]).compose(&g.parts[i + 1])?);
    }
    parts.extend(g.parts[i + 2..].iter().cloned());
    let mut holes = g.holes[..i].to_vec();
    holes.extend(f.holes.iter().cloned());
    holes.extend(g.holes[i + 1..].iter().cloned());
    let mut m = g.m[..i].to_vec();
    m.extend(f.m.iter().map(|x| cat(&[gm, x])));
    m.extend(g.m[i + 1..].iter().cloned());
    let mut n = g.n[..i].to_vec();
    n.extend(f.n.iter().map(|x| cat(&[x, gn])));
    n.extend(g.n[i + 1..].iter().cloned());
    RawOptic::new(g.dom.clone(), g.cod.clone(), holes, m, n, parts)
}

/// Splits a context at its holes, taken in their declared order. Every
/// generator is placed before a hole whenever the interchange law allows it.
pub fn factor_context(c: &DiagramContext) -> Result<RawOptic> {
    let d = c.diagram().with_holes_in_order()?;
    let frontiers = d.frontiers();
    let sig = d.sig().clone();
    let mut parts = Vec::new();
    let (mut m, mut n) = (Vec::new(), Vec::new());
    let mut start = 0;
    for (k, s) in d.slices().iter().enumerate() {
        if let Label::Hole(h) = s.label {
            let before = &frontiers[k];
            let a = &d.holes()[h as usize].dom;
            let mut seg = Diagram::identity(&sig, &frontiers[start])?;
            for j in start..k {
                seg = seg.compose(&d.segment(j..j + 1))?;
            }
            parts.push(seg);
            m.push(before[..s.left].to_vec());
            n.push(before[s.left + a.len()..].to_vec());
            start = k + 1;
        }
    }
    let mut seg = Diagram::identity(&sig, &frontiers[start])?;
    for j in start..d.slices().len() {
        seg = seg.compose(&d.segment(j..j + 1))?;
    }
    parts.push(seg);
    RawOptic::new(d.dom().clone(), d.cod().clone(), d.holes().to_vec(), m, n, parts)
}
