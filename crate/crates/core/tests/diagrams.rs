mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use moncat_core::corpus;
use moncat_core::{make_context, Diagram, DiagramContext, Label, Permutation, Polygraph};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const POLYGRAPHS: [(&str, &str); 4] =
    [("parens.mon", "parens"), ("sierpinski.mon", "sierpinski"), ("unbraids.mon", "braid"), ("parens.mon", "parensRuns")];

fn sig(file: &str, name: &str) -> Arc<Polygraph> {
    corpus::load(file).unwrap().polygraph(name).unwrap().clone()
}

fn braid_word(w: &[bool]) -> String {
    if w.is_empty() {
        return "id[w w]".into();
    }
    w.iter().map(|&b| if b { "over" } else { "under" }).collect::<Vec<_>>().join(" ; ")
}

fn braid_context(src: &str) -> DiagramContext {
    let ws = corpus::load("unbraids.mon").unwrap();
    let p = ws.polygraph("braid").unwrap();
    make_context(p, &ws.term("braid", src).unwrap()).unwrap()
}

fn closed(w: &[bool]) -> DiagramContext {
    braid_context(&braid_word(w))
}

fn word() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_survives_interchange(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (file, name) in POLYGRAPHS {
            let p = sig(file, name);
            let d = random_diagram(&mut rng, &p, 8);
            let moved = random_moves(&mut rng, &d, 20);
            prop_assert_eq!(d.canonical_form(), moved.canonical_form());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (file, name) in POLYGRAPHS {
            let d = random_diagram(&mut rng, &sig(file, name), 8);
            let c = d.canonical_form();
            prop_assert_eq!(c.canonical_form(), c.clone());
            prop_assert_eq!(c.size(), d.size());
        }
    }

    #[test]
    fn frontiers_match_the_boundary(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for (file, name) in POLYGRAPHS {
            let d = random_diagram(&mut rng, &sig(file, name), 8);
            let f = d.frontiers();
            prop_assert_eq!(f.len(), d.slices().len() + 1);
            prop_assert_eq!(f.first().unwrap(), d.dom());
            prop_assert_eq!(f.last().unwrap(), d.cod());
            let c = d.canonical_form();
            prop_assert_eq!(c.dom(), d.dom());
            prop_assert_eq!(c.cod(), d.cod());
        }
    }

    #[test]
    fn segments_recompose(seed in any::<u64>(), cut in 0usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &sig("sierpinski.mon", "sierpinski"), 8);
        let k = cut.min(d.slices().len());
        let n = d.slices().len();
        let back = d.segment(0..k).compose(&d.segment(k..n)).unwrap();
        prop_assert_eq!(back, d.clone());
        let id = Diagram::identity(d.sig(), d.cod()).unwrap();
        prop_assert!(d.compose(&id).unwrap().equal(&d).unwrap());
    }

    #[test]
    fn tensor_obeys_interchange(s1 in any::<u64>(), s2 in any::<u64>()) {
        let p = sig("parens.mon", "parens");
        let a = random_diagram(&mut StdRng::seed_from_u64(s1), &p, 4);
        let b = random_diagram(&mut StdRng::seed_from_u64(s2), &p, 4);
        let ab = a.tensor(&b).unwrap();
        let first = a.whisker(&[], b.dom()).compose(&b.whisker(a.cod(), &[])).unwrap();
        let second = b.whisker(a.dom(), &[]).compose(&a.whisker(&[], b.cod())).unwrap();
        prop_assert!(ab.equal(&first).unwrap());
        prop_assert!(ab.equal(&second).unwrap());
    }

    #[test]
    fn plugging_is_associative(u in word(), v in word(), w in word()) {
        let outer = braid_context(&format!("{} ; [x : w w -> w w] ; {}", braid_word(&u), braid_word(&v)));
        let middle = braid_context(&format!("over ; [y : w w -> w w] ; {}", braid_word(&w)));
        let inner = closed(&u);
        let left = outer.plug(0, &middle).unwrap().plug(0, &inner).unwrap();
        let right = outer.plug(0, &middle.plug(0, &inner).unwrap()).unwrap();
        prop_assert!(left.is_closed());
        prop_assert!(left.equal(&right).unwrap());
    }

    #[test]
    fn substitution_matches_plugging(u in word(), v in word(), w in word()) {
        let c = braid_context("over ; [x : w w -> w w] ; under ; [y : w w -> w w]");
        let (a, b) = (closed(&v), closed(&w));
        let by_name = c.substitute(&BTreeMap::from([("x".to_string(), a.clone()), ("y".to_string(), b.clone())])).unwrap();
        let positional = c.substitute_all(&[a.clone(), b.clone()]).unwrap();
        let stepwise = c.plug(1, &b).unwrap().plug(0, &a).unwrap();
        prop_assert!(by_name.equal(&positional).unwrap());
        prop_assert!(by_name.equal(&stepwise).unwrap());
        let partial = c.substitute(&BTreeMap::from([("y".to_string(), closed(&u))])).unwrap();
        prop_assert_eq!(partial.vars(), &["x".to_string()][..]);
    }

    #[test]
    fn permuting_holes_commutes_with_substitution(v in word(), w in word(), z in word()) {
        let c = braid_context(
            "[x : w w -> w w] * id[w] ; over * id[w] ; id[w] * [y : w w -> w w] ; [z : w w -> w w] * id[w]",
        );
        let args = vec![closed(&v), closed(&w), closed(&z)];
        let direct = c.substitute_all(&args).unwrap();
        for sigma in Permutation::all(3) {
            let permuted = c.permute_holes(&sigma);
            let via = permuted.substitute_all(&sigma.apply(&args)).unwrap();
            prop_assert!(via.equal(&direct).unwrap());
            prop_assert_eq!(permuted.vars(), &sigma.apply(c.vars())[..]);
        }
    }
}

#[test]
fn linearity_is_enforced() {
    let c = braid_context("[x : w w -> w w] ; over ; [y : w w -> w w]");
    let x_again = braid_context("under ; [x : w w -> w w]");
    assert!(c.plug(1, &x_again).is_err());
    let ws = corpus::load("unbraids.mon").unwrap();
    let p = ws.polygraph("braid").unwrap();
    let t = ws.term("braid", "[x : w w -> w w] ; [x : w w -> w w]").unwrap();
    assert!(make_context(p, &t).is_err());
}

#[test]
fn hole_order_follows_the_canonical_form() {
    let c = braid_context("id[w w] * [b : w -> w] ; [a : w -> w] * id[w w]");
    let order: Vec<u32> = c
        .diagram()
        .canonical_form()
        .slices()
        .iter()
        .filter_map(|s| match s.label {
            Label::Hole(h) => Some(h),
            _ => None,
        })
        .collect();
    assert_eq!(order, vec![0, 1]);
    assert_eq!(c.vars(), &["a".to_string(), "b".to_string()][..]);
}

#[test]
fn empty_and_scalar_diagrams() {
    let p = sig("sierpinski.mon", "sierpinski");
    let e = Diagram::identity(&p, &[]).unwrap();
    assert!(e.is_identity());
    assert_eq!(e.canonical_form(), e);
    let scalar = Diagram::generator(&p, "start").unwrap().compose(&Diagram::generator(&p, "end").unwrap()).unwrap();
    assert!(scalar.dom().is_empty() && scalar.cod().is_empty());
    let two = scalar.tensor(&scalar).unwrap();
    assert!(two.equal(&scalar.compose(&scalar).unwrap()).unwrap());
}
