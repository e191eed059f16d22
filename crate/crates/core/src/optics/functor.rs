use std::collections::BTreeMap;
use std::sync::Arc;

use super::{ContourPolygraph, RawRepresentative};
use crate::contextfree::CFMonoidalGrammar;
use crate::diagrams::{same_sig, Diagram, HoleType, Label, Slice};
use crate::error::{Error, Result};
use crate::signatures::{Polygraph, Sort, Word};

/// A strict monoidal functor between free categories: sorts go to words and
/// generators to diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidalFunctor {
    pub source: Arc<Polygraph>,
    pub target: Arc<Polygraph>,
    pub sort_map: BTreeMap<Sort, Word>,
    pub gen_map: Vec<Diagram>,
}

impl MonoidalFunctor {
    pub fn new(
        source: Arc<Polygraph>,
        target: Arc<Polygraph>,
        sort_map: BTreeMap<Sort, Word>,
        gen_map: Vec<Diagram>,
    ) -> Result<Self> {
        let f = MonoidalFunctor { source, target, sort_map, gen_map };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(p: &Arc<Polygraph>) -> Self {
        MonoidalFunctor {
            source: p.clone(),
            target: p.clone(),
            sort_map: p.sorts().iter().map(|s| (s.clone(), vec![s.clone()])).collect(),
            gen_map: p.gen_ids().map(|g| Diagram::of_generator(p, g).expect("declared")).collect(),
        }
    }

    pub fn map_word(&self, w: &[Sort]) -> Result<Word> {
        let mut out = Word::new();
        for s in w {
            out.extend(self.sort_map.get(s).ok_or_else(|| Error::UndeclaredSort(s.name().to_string()))?.iter().cloned());
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        for s in self.source.sorts() {
            let img = self.sort_map.get(s).ok_or_else(|| Error::InvalidMorphism(format!("sort `{s}` unmapped")))?;
            self.target.check_word(img)?;
        }
        if self.gen_map.len() != self.source.generators().len() {
            return Err(Error::InvalidMorphism("generator map is not total".into()));
        }
        for (g, img) in self.source.generators().iter().zip(&self.gen_map) {
            if !same_sig(img.sig(), &self.target) || !img.holes().is_empty() {
                return Err(Error::InvalidMorphism(format!("image of `{}` is not a diagram of the target", g.name)));
            }
            let dom = self.map_word(&g.arity)?;
            let cod = self.map_word(&g.coarity)?;
            if *img.dom() != dom {
                return Err(Error::InterfaceMismatch { expected: dom, found: img.dom().clone() });
            }
            if *img.cod() != cod {
                return Err(Error::InterfaceMismatch { expected: cod, found: img.cod().clone() });
            }
        }
        Ok(())
    }
}

/// Slice-wise image: each generator is replaced by its image, padded by the
/// images of the wires beside it. Holes keep their index with translated
/// interfaces.
pub fn apply_functor(f: &MonoidalFunctor, d: &Diagram) -> Result<Diagram> {
    if !same_sig(d.sig(), &f.source) {
        return Err(Error::PolygraphMismatch(d.sig().name.clone(), f.source.name.clone()));
    }
    let frontiers = d.frontiers();
    let mut slices = Vec::new();
    for (s, frontier) in d.slices().iter().zip(&frontiers) {
        let (input, _) = d.label_interface(s.label);
        let left = f.map_word(&frontier[..s.left])?.len();
        let right = f.map_word(&frontier[s.left + input.len()..])?.len();
        match s.label {
            Label::Gen(g) => slices.extend(
                f.gen_map[g.index()].slices().iter().map(|x| Slice { left: x.left + left, right: x.right + right, ..*x }),
            ),
            Label::Hole(_) => slices.push(Slice { left, right, ..*s }),
        }
    }
    let holes = d
        .holes()
        .iter()
        .map(|h| Ok(HoleType { dom: f.map_word(&h.dom)?, cod: f.map_word(&h.cod)? }))
        .collect::<Result<Vec<_>>>()?;
    Diagram::from_slices(f.target.clone(), f.map_word(d.dom())?, slices, holes)
}

/// `X^L ↦ dom X`, `X^R ↦ cod X`, `f.Mᵢ ↦ Mᵢ`, `f.Nᵢ ↦ Nᵢ` and `f/i ↦ fᵢ`.
pub fn induced_functor(
    g: &CFMonoidalGrammar,
    rep: &RawRepresentative,
    contour: &ContourPolygraph,
) -> Result<MonoidalFunctor> {
    let mut sort_map = BTreeMap::new();
    for (x, nt) in g.nonterminals.iter().enumerate() {
        sort_map.insert(contour.left[x].clone(), nt.interface.dom.clone());
        sort_map.insert(contour.right[x].clone(), nt.interface.cod.clone());
    }
    for (r, optic) in rep.optics.iter().enumerate() {
        for i in 0..optic.arity() {
            sort_map.insert(contour.m[r][i].clone(), optic.m[i].clone());
            sort_map.insert(contour.n[r][i].clone(), optic.n[i].clone());
        }
    }
    let gen_map = contour.pieces.iter().map(|&(r, i)| rep.optics[r].parts[i].clone()).collect();
    MonoidalFunctor::new(contour.polygraph.clone(), g.target.clone(), sort_map, gen_map)
}
