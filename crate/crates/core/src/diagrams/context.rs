use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{Diagram, HoleType, Label, Slice, Term};
use crate::error::{Error, Result};
use crate::signatures::{Permutation, Polygraph};

/// A diagram with linear, labeled holes. Hole `k` of the diagram carries the
/// variable `vars[k]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramContext {
    diagram: Diagram,
    vars: Vec<String>,
}

impl fmt::Debug for DiagramContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Context({:?} ⊢ {})", self.vars, self.diagram)
    }
}

impl fmt::Display for DiagramContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.diagram)
    }
}

/// Builds a context from a term. The diagram is stored in canonical form,
/// with holes numbered by their first appearance there.
pub fn make_context(sig: &Arc<Polygraph>, term: &Term) -> Result<DiagramContext> {
    let names = term.variables();
    let mut seen = BTreeSet::new();
    for v in &names {
        if !seen.insert(*v) {
            return Err(Error::NonlinearVariable(v.to_string()));
        }
    }
    let d = term.to_diagram(sig)?;
    let ctx = DiagramContext { diagram: d, vars: names.into_iter().map(str::to_string).collect() };
    Ok(ctx.in_canonical_order())
}

impl DiagramContext {
    /// Wraps a diagram, naming its holes `x0, x1, ...`.
    pub fn new(diagram: Diagram) -> Self {
        let vars = (0..diagram.holes().len()).map(|i| format!("x{i}")).collect();
        DiagramContext { diagram, vars }
    }

    pub fn with_vars(diagram: Diagram, vars: Vec<String>) -> Result<Self> {
        if vars.len() != diagram.holes().len() {
            return Err(Error::LengthMismatch { expected: diagram.holes().len(), found: vars.len() });
        }
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(Error::NonlinearVariable(v.clone()));
            }
        }
        Ok(DiagramContext { diagram, vars })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn into_diagram(self) -> Diagram {
        self.diagram
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn holes(&self) -> &[HoleType] {
        self.diagram.holes()
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_closed(&self) -> bool {
        self.vars.is_empty()
    }

    /// Hole indices in the order they appear in the canonical form.
    fn canonical_hole_order(&self) -> Vec<usize> {
        self.diagram
            .canonical_form()
            .slices()
            .iter()
            .filter_map(|s| match s.label {
                Label::Hole(h) => Some(h as usize),
                _ => None,
            })
            .collect()
    }

    pub(crate) fn in_canonical_order(self) -> DiagramContext {
        let order = self.canonical_hole_order();
        let sigma = Permutation::from_images(order).expect("every hole appears once");
        let c = self.permute_holes(&sigma);
        DiagramContext { diagram: c.diagram.canonical_form(), vars: c.vars }
    }

    /// Relabels holes so that new hole `j` is old hole `σ(j)`.
    pub fn permute_holes(&self, sigma: &Permutation) -> DiagramContext {
        assert_eq!(sigma.len(), self.vars.len(), "permutation size must match the hole count");
        let inv = sigma.inverse();
        let slices = self
            .diagram
            .slices()
            .iter()
            .map(|s| match s.label {
                Label::Hole(h) => Slice { label: Label::Hole(inv.image(h as usize) as u32), ..*s },
                _ => *s,
            })
            .collect();
        let holes = sigma.apply(self.diagram.holes());
        let d = self.diagram.with_parts(self.diagram.dom().clone(), self.diagram.cod().clone(), slices, holes);
        DiagramContext { diagram: d, vars: sigma.apply(&self.vars) }
    }

    /// Fills holes by variable name. Unassigned holes stay open.
    pub fn substitute(&self, assignment: &BTreeMap<String, DiagramContext>) -> Result<DiagramContext> {
        for v in assignment.keys() {
            if !self.vars.contains(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        let args: Vec<Option<&DiagramContext>> = self.vars.iter().map(|v| assignment.get(v)).collect();
        self.fill(&args)
    }

    /// Fills every hole positionally.
    pub fn substitute_all(&self, args: &[DiagramContext]) -> Result<DiagramContext> {
        if args.len() != self.vars.len() {
            return Err(Error::LengthMismatch { expected: self.vars.len(), found: args.len() });
        }
        let args: Vec<Option<&DiagramContext>> = args.iter().map(Some).collect();
        self.fill(&args)
    }

    /// Fills hole `i` with `arg`; the holes of `arg` take its place in the order.
    pub fn plug(&self, i: usize, arg: &DiagramContext) -> Result<DiagramContext> {
        let mut args: Vec<Option<&DiagramContext>> = vec![None; self.vars.len()];
        *args.get_mut(i).ok_or_else(|| Error::UnknownVariable(format!("#{i}")))? = Some(arg);
        self.fill(&args)
    }

    fn fill(&self, args: &[Option<&DiagramContext>]) -> Result<DiagramContext> {
        let d = &self.diagram;
        let mut offsets = Vec::with_capacity(args.len());
        let mut holes = Vec::new();
        let mut vars = Vec::new();
        for (k, a) in args.iter().enumerate() {
            offsets.push(holes.len() as u32);
            match a {
                None => {
                    holes.push(d.holes()[k].clone());
                    vars.push(self.vars[k].clone());
                }
                Some(c) => {
                    if !super::same_sig(d.sig(), c.diagram.sig()) {
                        return Err(Error::PolygraphMismatch(d.sig().name.clone(), c.diagram.sig().name.clone()));
                    }
                    let t = &d.holes()[k];
                    if c.diagram.dom() != &t.dom {
                        return Err(Error::InterfaceMismatch { expected: t.dom.clone(), found: c.diagram.dom().clone() });
                    }
                    if c.diagram.cod() != &t.cod {
                        return Err(Error::InterfaceMismatch { expected: t.cod.clone(), found: c.diagram.cod().clone() });
                    }
                    holes.extend(c.diagram.holes().iter().cloned());
                    vars.extend(c.vars.iter().cloned());
                }
            }
        }
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(Error::NonlinearVariable(v.clone()));
            }
        }
        let mut slices = Vec::with_capacity(d.slices().len());
        for s in d.slices() {
            match s.label {
                Label::Hole(h) => match args[h as usize] {
                    None => slices.push(Slice { label: Label::Hole(offsets[h as usize]), ..*s }),
                    Some(c) => slices.extend(c.diagram.slices().iter().map(|x| Slice {
                        left: x.left + s.left,
                        right: x.right + s.right,
                        label: match x.label {
                            Label::Hole(j) => Label::Hole(j + offsets[h as usize]),
                            l => l,
                        },
                    })),
                },
                _ => slices.push(*s),
            }
        }
        let out = d.with_parts(d.dom().clone(), d.cod().clone(), slices, holes);
        debug_assert_eq!(out.holes().len(), vars.len());
        Ok(DiagramContext { diagram: out, vars })
    }

    /// Equality of the underlying diagrams with holes compared by position.
    pub fn equal(&self, other: &DiagramContext) -> Result<bool> {
        self.diagram.equal(&other.diagram)
    }
}
