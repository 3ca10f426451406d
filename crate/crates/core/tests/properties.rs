//! Module-level invariants from the design contracts: round-trip stability,
//! rank bounds, prolongation structure and determinant nonvanishing across
//! the whole catalog.

use jetlie::catalog::{instantiate, sample_tuples, Catalog};
use jetlie::expr::{mul, Expr, Symbol};
use jetlie::invariants::lie_determinant;
use jetlie::lie::{nu, rank_sequence};
use jetlie::parse::{parse_expr, print_expr};
use jetlie::runner::props::random_expr;
use jetlie::{is_zero, prolong, ZeroPolicy};
use rand::SeedableRng;
use std::collections::BTreeMap;

fn catalog_instances() -> Vec<jetlie::catalog::CatalogEntry> {
    let catalog = Catalog::load().unwrap();
    let mut out = Vec::new();
    for spec in &catalog.entries {
        for group in &spec.groups {
            let tuple = sample_tuples(group).into_iter().next().unwrap();
            out.push(instantiate(spec, &tuple, &BTreeMap::new(), None).unwrap());
        }
    }
    out
}

// print . parse . print = print for every stored cell and random tree.
#[test]
fn printer_round_trips() {
    let catalog = Catalog::load().unwrap();
    for entry in catalog_instances() {
        for e in entry.invariants.iter().chain([&entry.iod]) {
            let printed = print_expr(e);
            let reparsed = parse_expr(&printed)
                .unwrap_or_else(|err| panic!("entry {}: reparse `{printed}`: {err}", entry.label));
            assert_eq!(&reparsed, e, "entry {}", entry.label);
            assert_eq!(print_expr(&reparsed), printed);
        }
        for f in &entry.realization.basis {
            for c in [&f.xi, &f.eta] {
                let printed = print_expr(c);
                assert_eq!(parse_expr(&printed).unwrap(), *c);
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    for _ in 0..300 {
        let e = random_expr(&mut rng, 3);
        let printed = print_expr(&e);
        let back = parse_expr(&printed).unwrap_or_else(|err| panic!("reparse `{printed}`: {err}"));
        assert_eq!(back, e, "round trip changed `{printed}`");
    }
    let _ = catalog;
}

// Parse errors carry spans pointing inside the offending token.
#[test]
fn parse_error_spans() {
    for (text, inside) in [
        ("x 2", 2..3),
        ("y'' + * 3", 6..7),
        ("exp x", 4..5),
        ("(1+x", 4..4),
    ] {
        let err = parse_expr(text).unwrap_err();
        match err {
            jetlie::Error::Parse { span, .. } => {
                assert!(
                    span.begin >= inside.start && span.begin <= inside.end,
                    "`{text}`: span {span:?} outside {inside:?}"
                );
            }
            other => panic!("`{text}`: expected parse error, got {other}"),
        }
    }
}

// Rank sequences are non-decreasing and bounded by min(dim, k+2); nu exists
// for every catalog entry.
#[test]
fn rank_sequences_bounded_and_monotone() {
    let policy = ZeroPolicy::default();
    for entry in catalog_instances() {
        let r = &entry.realization;
        let policy = r.policy_with_params(&policy);
        let dim = r.dim();
        let order = nu(r, &policy).unwrap();
        let ranks = rank_sequence(r, order + 1, &policy).unwrap();
        for (k, &rk) in ranks.iter().enumerate() {
            assert!(rk <= dim.min(k + 2), "entry {}: r_{k} = {rk}", entry.label);
            if k > 0 {
                assert!(rk >= ranks[k - 1], "entry {}: rank decreased", entry.label);
            }
        }
        assert_eq!(ranks[order as usize], dim);
    }
}

// eta^k depends only on jets up to order k, and prolongation is linear in
// the field.
#[test]
fn prolongation_order_bounds_and_linearity() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for entry in catalog_instances() {
        for f in &entry.realization.basis {
            let p = prolong(f, 4);
            for (k, eta) in p.etas.iter().enumerate() {
                assert!(
                    eta.jet_order() <= k as u32 + 1,
                    "entry {}: eta^{} exceeds its order bound",
                    entry.label,
                    k + 1
                );
            }
        }
    }
    // prolong(a v + b w, n) = a prolong(v, n) + b prolong(w, n) coefficientwise.
    use jetlie::jet::VectorField;
    use rand::Rng;
    for _ in 0..10 {
        let a = Expr::int(rng.gen_range(-3..4));
        let b = Expr::int(rng.gen_range(-3..4));
        let v = VectorField::new(Expr::x(), mul(vec![Expr::x(), Expr::y()])).unwrap();
        let w = VectorField::new(Expr::y(), Expr::one() + Expr::x()).unwrap();
        let combo = VectorField::new(
            mul(vec![a.clone(), v.xi.clone()]) + mul(vec![b.clone(), w.xi.clone()]),
            mul(vec![a.clone(), v.eta.clone()]) + mul(vec![b.clone(), w.eta.clone()]),
        )
        .unwrap();
        let pc = prolong(&combo, 3);
        let pv = prolong(&v, 3);
        let pw = prolong(&w, 3);
        for k in 0..3 {
            let want = mul(vec![a.clone(), pv.etas[k].clone()]) + mul(vec![b.clone(), pw.etas[k].clone()]);
            assert_eq!(pc.etas[k], want, "linearity at eta^{}", k + 1);
        }
    }
}

// The Lie determinant of every catalog entry is not identically zero, and
// zero-testing never contradicts a structural zero.
#[test]
fn lie_determinants_do_not_vanish() {
    let policy = ZeroPolicy::default();
    for entry in catalog_instances() {
        let policy = entry.realization.policy_with_params(&policy);
        let det = lie_determinant(&entry.realization, &policy)
            .unwrap_or_else(|e| panic!("entry {}: {e}", entry.label));
        assert!(
            !is_zero(&det, &policy).unwrap(),
            "entry {}: determinant vanished",
            entry.label
        );
    }
}

// Structural zeros are never reported nonzero: e - e simplifies to the zero
// constant and the oracle agrees, for random trees.
#[test]
fn no_false_negatives_on_structural_zeros() {
    let policy = ZeroPolicy::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let e = random_expr(&mut rng, 3);
        let diff = e.clone() - e.clone();
        assert!(diff.is_zero_const());
        assert!(is_zero(&diff, &policy).unwrap());
    }
}

// The multiplier symbol is reserved for invariant-differentiation contexts:
// it parses, prints, and never collides with user parameters.
#[test]
fn lambda_symbol_round_trip() {
    let e = parse_expr("lambda*(1+x^2)").unwrap();
    assert!(e.contains_symbol(&Symbol::Lambda));
    assert_eq!(parse_expr(&print_expr(&e)).unwrap(), e);
}
