use std::collections::BTreeMap;
use std::sync::Arc;

use super::{factor_context, RawOptic};
use crate::contextfree::{validate_grammar, CFMonoidalGrammar, Derivation};
use crate::diagrams::{same_sig, Diagram, Label};
use crate::error::{Error, Result};
use crate::regular::RegularMonoidalGrammar;
use crate::signatures::{GenId, Multigraph, Polygraph, PolygraphMorphism, Sort};

/// The optical contour of a multigraph together with the bookkeeping that
/// relates its sorts and generators back to operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourPolygraph {
    pub polygraph: Arc<Polygraph>,
    /// `X^L` and `X^R` for each sort of the multigraph, by sort index.
    pub left: Vec<Sort>,
    pub right: Vec<Sort>,
    /// `f.Mᵢ` and `f.Nᵢ` for each operation and hole position.
    pub m: Vec<Vec<Sort>>,
    pub n: Vec<Vec<Sort>>,
    /// `(operation, i)` for each generator, by generator index.
    pub pieces: Vec<(usize, usize)>,
    /// Generators `f/0 … f/n` for each operation.
    pub gens: Vec<Vec<GenId>>,
}

/// Polarises every sort into `X^L`, `X^R` and cuts each operation
/// `f : X₁…Xₙ → Y` into `n+1` sector generators:
/// `f/0 : Y^L → f.M1 X₁^L f.N1`, `f/i : f.Mi Xᵢ^R f.Ni → f.M(i+1) Xᵢ₊₁^L f.N(i+1)`,
/// `f/n : f.Mn Xₙ^R f.Nn → Y^R`.
pub fn optical_contour(mg: &Multigraph) -> Result<ContourPolygraph> {
    mg.validate().map_err(|mut e| e.remove(0))?;
    let mut p = Polygraph::new(&format!("{}.contour", mg.name));
    let left: Vec<Sort> = mg.sorts.iter().map(|s| Sort::new(&format!("{s}^L"))).collect();
    let right: Vec<Sort> = mg.sorts.iter().map(|s| Sort::new(&format!("{s}^R"))).collect();
    for (l, r) in left.iter().zip(&right) {
        p.add_sort(l.clone());
        p.add_sort(r.clone());
    }
    let sort_index = |s: &Sort| mg.sorts.iter().position(|x| x == s).expect("validated");
    let (mut ms, mut ns, mut pieces, mut gens) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (oi, op) in mg.ops.iter().enumerate() {
        let k = op.inputs.len();
        let m: Vec<Sort> = (1..=k).map(|i| Sort::new(&format!("{}.M{i}", op.name))).collect();
        let n: Vec<Sort> = (1..=k).map(|i| Sort::new(&format!("{}.N{i}", op.name))).collect();
        for (a, b) in m.iter().zip(&n) {
            p.add_sort(a.clone());
            p.add_sort(b.clone());
        }
        let y = sort_index(&op.output);
        let xs: Vec<usize> = op.inputs.iter().map(sort_index).collect();
        let mut ids = Vec::new();
        for i in 0..=k {
            let dom = if i == 0 { vec![left[y].clone()] } else { vec![m[i - 1].clone(), right[xs[i - 1]].clone(), n[i - 1].clone()] };
            let cod = if i == k { vec![right[y].clone()] } else { vec![m[i].clone(), left[xs[i]].clone(), n[i].clone()] };
            ids.push(p.add_generator(&format!("{}/{i}", op.name), dom, cod));
            pieces.push((oi, i));
        }
        ms.push(m);
        ns.push(n);
        gens.push(ids);
    }
    let polygraph = p.build().map_err(|mut e| e.remove(0))?;
    Ok(ContourPolygraph { polygraph, left, right, m: ms, n: ns, pieces, gens })
}

/// The rule signature of a grammar together with one raw optic per rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRepresentative {
    pub multigraph: Multigraph,
    pub optics: Vec<RawOptic>,
}

fn checked(g: &CFMonoidalGrammar) -> Result<()> {
    validate_grammar(g).map_err(|e| {
        Error::Grammar(e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "))
    })
}

/// Factors each rule body in its declared hole order.
pub fn raw_representative(g: &CFMonoidalGrammar) -> Result<RawRepresentative> {
    checked(g)?;
    let optics = g.rules.iter().map(|r| factor_context(&r.body)).collect::<Result<Vec<_>>>()?;
    Ok(RawRepresentative { multigraph: g.rule_multigraph(), optics })
}

/// The identity grammar over the contour, from `S^L` to `S^R`.
pub fn regular_representative(g: &CFMonoidalGrammar, contour: &ContourPolygraph) -> Result<RegularMonoidalGrammar> {
    let psi = PolygraphMorphism::identity(&contour.polygraph);
    RegularMonoidalGrammar::new(
        &format!("{}.regular", g.name),
        psi,
        vec![contour.left[g.start].clone()],
        vec![contour.right[g.start].clone()],
    )
}

/// `(r/0) ⨾ (M₁ ⊗ C(p₁) ⊗ N₁) ⨾ (r/1) ⨾ … ⨾ (r/n)`.
pub fn contour_of_derivation(g: &CFMonoidalGrammar, contour: &ContourPolygraph, d: &Derivation) -> Result<Diagram> {
    if !d.check(g) {
        return Err(Error::Grammar(format!("ill-typed derivation {}", d.render(g))));
    }
    build(contour, d)
}

fn build(contour: &ContourPolygraph, d: &Derivation) -> Result<Diagram> {
    let p = &contour.polygraph;
    let ids = &contour.gens[d.rule];
    let mut acc = Diagram::of_generator(p, ids[0])?;
    for (k, c) in d.children.iter().enumerate() {
        let inner = build(contour, c)?.whisker(&[contour.m[d.rule][k].clone()], &[contour.n[d.rule][k].clone()]);
        acc = acc.compose(&inner)?.compose(&Diagram::of_generator(p, ids[k + 1])?)?;
    }
    Ok(acc)
}

/// Reads a contour diagram `S^L → S^R` back as a derivation.
pub fn derivation_of_contour(g: &CFMonoidalGrammar, contour: &ContourPolygraph, c: &Diagram) -> Result<Derivation> {
    if !same_sig(c.sig(), &contour.polygraph) {
        return Err(Error::PolygraphMismatch(c.sig().name.clone(), contour.polygraph.name.clone()));
    }
    let s = g.start;
    if *c.dom() != [contour.left[s].clone()] || *c.cod() != [contour.right[s].clone()] {
        return Err(Error::MalformedContour(format!("expected {}^L → {}^R", g.nonterminals[s].name, g.nonterminals[s].name)));
    }
    let lookup: BTreeMap<GenId, (usize, usize)> =
        contour.pieces.iter().enumerate().map(|(k, &x)| (GenId(k as u32), x)).collect();
    let mut pos = 0;
    let d = parse(g, c, &lookup, &mut pos, 0, s)?;
    if pos != c.slices().len() {
        return Err(Error::MalformedContour(format!("{} trailing slices", c.slices().len() - pos)));
    }
    Ok(d)
}

fn parse(
    g: &CFMonoidalGrammar,
    c: &Diagram,
    lookup: &BTreeMap<GenId, (usize, usize)>,
    pos: &mut usize,
    pad: usize,
    sort: usize,
) -> Result<Derivation> {
    let mut next = |want_rule: Option<usize>, want_i: usize| -> Result<usize> {
        let s = c.slices().get(*pos).ok_or_else(|| Error::MalformedContour("unexpected end".into()))?;
        let Label::Gen(id) = s.label else {
            return Err(Error::MalformedContour("contours have no holes".into()));
        };
        let (r, i) = lookup[&id];
        if s.left != pad || i != want_i || want_rule.is_some_and(|w| w != r) {
            return Err(Error::MalformedContour(format!("unexpected `{}` at slice {}", c.label_name(s.label), *pos)));
        }
        *pos += 1;
        Ok(r)
    };
    let r = next(None, 0)?;
    let rule = &g.rules[r];
    if rule.lhs != sort {
        return Err(Error::MalformedContour(format!("`{}` does not produce `{}`", rule.name, g.nonterminals[sort].name)));
    }
    let mut children = Vec::with_capacity(rule.args.len());
    for (k, &a) in rule.args.iter().enumerate() {
        children.push(parse(g, c, lookup, pos, pad + 1, a)?);
        let s = c.slices().get(*pos).ok_or_else(|| Error::MalformedContour("unexpected end".into()))?;
        match s.label {
            Label::Gen(id) if lookup[&id] == (r, k + 1) && s.left == pad => *pos += 1,
            _ => return Err(Error::MalformedContour(format!("expected `{}/{}` at slice {}", rule.name, k + 1, *pos))),
        }
    }
    Ok(Derivation::node(r, children))
}
