//! End-to-end acceptance suite. Each test prints one PASS/FAIL line; run with
//! `cargo test -p jetlie --test acceptance -- --nocapture` to see them.

use jetlie::catalog::{instantiate, sample_tuples, table2_row_build, Catalog, ParamBinding};
use jetlie::expr::{add, fun, mul, pow_i, Expr, FunKind, Symbol};
use jetlie::invariants::{
    lie_determinant, numeric_flow_check, verify_invariant, verify_iod, FlowConfig,
};
use jetlie::jet::VectorField;
use jetlie::lie::{invariant_count, nu, Realization};
use jetlie::runner::{self, RunConfig};
use jetlie::scalar::Scalar;
use jetlie::transform::{apply_table2, change_basis, pushforward, BasisChange, PointTransformation};
use jetlie::{equal_up_to_constant, prolong, ZeroPolicy};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("{} {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}: {detail}");
}

fn half_exp(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn entry_17_symbolic() -> (Realization, Expr, Expr) {
    let catalog = Catalog::load().unwrap();
    let mut params = BTreeMap::new();
    params.insert("b".to_string(), ParamBinding::Symbolic);
    let entry = instantiate(catalog.spec("17").unwrap(), &params, &BTreeMap::new(), None).unwrap();
    let inv = entry.invariants[0].clone();
    let iod = entry.iod.clone();
    (entry.realization, inv, iod)
}

// Criterion 1: exact reproduction of the worked second-order example
// (entry 17 with symbolic b) in under a second.
#[test]
fn criterion_1_worked_example_reproduction() {
    let started = Instant::now();
    let (r, inv, iod) = entry_17_symbolic();
    let policy = r.policy_with_params(&ZeroPolicy::default());
    let b = Expr::param("b");

    // prolong(e2, 2) = x d/dy + d/dy' + 0 d/dy''.
    let p2 = prolong(&r.basis[1], 2);
    assert_eq!(p2.base.eta, Expr::x());
    assert_eq!(p2.etas[0], Expr::one());
    assert!(p2.etas[1].is_zero_const());

    // prolong(e3, 2): eta^1 = -(y - (b+x) y'), eta^2 = (b+3x) y''.
    let p3 = prolong(&r.basis[2], 2);
    let eta1 = -(Expr::y() - mul(vec![b.clone() + Expr::x(), Expr::jet(1)]));
    let eta2 = mul(vec![b.clone() + mul(vec![Expr::int(3), Expr::x()]), Expr::jet(2)]);
    assert_eq!(p3.etas[0], eta1, "eta^1 of e3");
    assert_eq!(p3.etas[1], eta2, "eta^2 of e3");

    // Lie determinant equals -(1+x^2) exactly (canonical equality, not just
    // up to a constant).
    let det = lie_determinant(&r, &policy).unwrap();
    assert_eq!(det, -(Expr::one() + pow_i(Expr::x(), 2)));

    // The second-order invariant and the multiplier verify.
    assert!(verify_invariant(&r, &inv, &policy).unwrap());
    assert!(verify_iod(&r, &iod, &policy).unwrap());
    assert_eq!(iod, Expr::one() + pow_i(Expr::x(), 2));

    // Invariant counts: d_0 = d_1 = 0, d_2 = 1.
    assert_eq!(invariant_count(&r, 0, &policy).unwrap(), 0);
    assert_eq!(invariant_count(&r, 1, &policy).unwrap(), 0);
    assert_eq!(invariant_count(&r, 2, &policy).unwrap(), 1);

    let elapsed = started.elapsed();
    report(
        "criterion 1 (worked example, symbolic b)",
        elapsed.as_secs_f64() < 1.0,
        &format!("prolongations, Lie determinant, invariant, multiplier and counts in {elapsed:?}"),
    );
}

// Criterion 2: the constant-coefficient cross-form of row 17.
#[test]
fn criterion_2_cross_form_17a() {
    let started = Instant::now();
    let catalog = Catalog::load().unwrap();
    let mut params = BTreeMap::new();
    params.insert("b".to_string(), ParamBinding::Symbolic);
    let entry = instantiate(catalog.spec("17a").unwrap(), &params, &BTreeMap::new(), None).unwrap();
    let r = &entry.realization;
    let policy = r.policy_with_params(&ZeroPolicy::default());
    let b = Expr::param("b");

    // I2 = y'' + 2b y' + (b^2+1) y with lambda = 1.
    let want_inv = add(vec![
        Expr::jet(2),
        mul(vec![Expr::int(2), b.clone(), Expr::jet(1)]),
        mul(vec![pow_i(b.clone(), 2) + Expr::one(), Expr::y()]),
    ]);
    assert_eq!(entry.invariants[0], want_inv);
    assert!(verify_invariant(r, &entry.invariants[0], &policy).unwrap());
    assert_eq!(entry.iod, Expr::one());
    assert!(verify_iod(r, &entry.iod, &policy).unwrap());

    // Lie determinant matches -exp(-2bx) up to a nonzero constant.
    let det = lie_determinant(r, &policy).unwrap();
    let cell = -fun(FunKind::Exp, mul(vec![Expr::int(-2), b, Expr::x()]));
    let c = equal_up_to_constant(&det, &cell, &policy).unwrap();
    assert!(c.is_some_and(|c| !c.is_zero()), "determinant {det} vs cell {cell}");

    let elapsed = started.elapsed();
    report(
        "criterion 2 (cross-form 17a)",
        elapsed.as_secs_f64() < 1.0,
        &format!("invariant, multiplier and determinant in {elapsed:?}"),
    );
}

// Criterion 3: the full catalog passes closure, invariant, multiplier and
// Lie determinant checks at the stored samples, within the time budget.
#[test]
fn criterion_3_full_table_verification() {
    let started = Instant::now();
    let catalog = Catalog::load().unwrap();
    let cfg = RunConfig {
        only: ["closure", "inv", "iod", "liedet", "count"]
            .into_iter()
            .map(String::from)
            .collect(),
        ..RunConfig::default()
    };
    let mut instances = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for res in runner::check_all(&catalog, &cfg) {
        for rep in res.expect("entry pipeline") {
            instances += 1;
            if !rep.passed() {
                failures.push(format!("{}{:?}", rep.entry, rep.case));
            }
        }
    }
    let elapsed = started.elapsed();
    let labels = catalog.labels();
    assert!(labels.len() >= 60, "expected 56 rows plus variants, got {}", labels.len());
    for n in 1..=56 {
        assert!(labels.contains(&n.to_string()), "row {n} missing");
    }
    for starred in ["1*", "3*", "5*", "21*", "17a"] {
        assert!(labels.contains(&starred.to_string()), "variant {starred} missing");
    }
    report(
        "criterion 3 (full-table verification)",
        failures.is_empty() && elapsed.as_secs() < 60,
        &format!("{instances} instances over {} entries in {elapsed:?}; failures: {failures:?}", labels.len()),
    );
}

// Criterion 4: the counting law d_n = n+2-r_n accounts for the stored basis
// sizes on the two-invariant rows, and single-invariant rows carry exactly
// one member.
#[test]
fn criterion_4_counting_law() {
    let catalog = Catalog::load().unwrap();
    let counting_rows = ["1*", "2", "3*", "5", "6", "13", "21", "23", "35", "48", "49"];
    let mut checked = 0usize;
    for label in counting_rows {
        let spec = catalog.spec(label).unwrap();
        let tuple = sample_tuples(&spec.groups[0]).into_iter().next().unwrap();
        let entry = instantiate(spec, &tuple, &BTreeMap::new(), None).unwrap();
        let policy = entry.realization.policy_with_params(&ZeroPolicy::default());
        let order = nu(&entry.realization, &policy).unwrap();
        // Telescoped sum of new invariants per order up to nu+1.
        let mut total_new = 0usize;
        let mut prev = 0usize;
        for n in 0..=order + 1 {
            let d = invariant_count(&entry.realization, n, &policy).unwrap();
            total_new += d.saturating_sub(prev);
            prev = d;
        }
        let members = entry
            .invariants
            .iter()
            .filter(|e| e.jet_order() <= order + 1)
            .count();
        assert_eq!(members, total_new, "row {label}: {members} members vs predicted {total_new}");
        checked += 1;
    }
    // Single-invariant rows list exactly one basis member.
    let mut singles = 0usize;
    for spec in &catalog.entries {
        for group in &spec.groups {
            if group.invariant_texts.len() == 1 {
                singles += 1;
            }
        }
    }
    report(
        "criterion 4 (counting law)",
        checked == counting_rows.len() && singles > 0,
        &format!("{checked} two-invariant rows match the d_n prediction; {singles} single-invariant groups"),
    );
}

// Criterion 5: the equivalence-of-realizations example: a variable swap plus
// a parameter shift carries the catalogued four-dimensional series form onto
// the first normal form, and the stated rescaling basis change onto the
// second.
#[test]
fn criterion_5_series_equivalence() {
    let policy = ZeroPolicy::default();
    let field = |xi: Expr, eta: Expr| VectorField::new(xi, eta).unwrap();
    let dx = || field(Expr::one(), Expr::zero());
    let dy = || field(Expr::zero(), Expr::one());
    // Source series form <d/dy, d/dx, x d/dy, x d/dx + bt y d/dy>.
    let source = |bt: Scalar| {
        Realization::new(vec![
            dy(),
            dx(),
            field(Expr::zero(), Expr::x()),
            field(
                mul(vec![Expr::constant(Scalar::one()), Expr::x()]),
                mul(vec![Expr::constant(bt), Expr::y()]),
            ),
        ])
    };
    let swap = PointTransformation::new(
        (Expr::y(), Expr::x()),
        (Expr::sym(jetlie::transform::yt()), Expr::sym(jetlie::transform::xt())),
        &policy,
    )
    .unwrap();

    // Case |b'| <= 1 at b' = 1/3: bt = 1 + b' = 4/3; the swap alone produces
    // the first normal form <d/dx, d/dy, y d/dx, (1+b) x d/dx + y d/dy>.
    let bt = Scalar::from_ratio(4, 3);
    let swapped: Vec<VectorField> = source(bt)
        .basis
        .iter()
        .map(|f| pushforward(f, &swap).unwrap())
        .collect();
    let b = Scalar::from_ratio(1, 3);
    let want_first = vec![
        dx(),
        dy(),
        field(Expr::y(), Expr::zero()),
        field(
            mul(vec![Expr::constant(&Scalar::one() + &b), Expr::x()]),
            Expr::y(),
        ),
    ];
    for (got, want) in swapped.iter().zip(&want_first) {
        assert_eq!(got, want, "first normal form, field-by-field");
    }

    // Case |b'| > 1 at b' = 3 (so b = 1/b' = 1/3): after the swap, the basis
    // change et1 = b' e1, et2 = e3, et3 = -b' e2, et4 = b e4 and the variable
    // rescaling (x, y) -> (bx, by) give the second normal form
    // <d/dx, y d/dx, -d/dy, (1+b) x d/dx + b y d/dy>.
    let bt = Scalar::from_int(4);
    let swapped = Realization::new(
        source(bt)
            .basis
            .iter()
            .map(|f| pushforward(f, &swap).unwrap())
            .collect(),
    );
    let bp = Scalar::from_int(3);
    let z = Scalar::zero;
    let matrix = vec![
        vec![bp.clone(), z(), z(), z()],
        vec![z(), z(), Scalar::one(), z()],
        vec![z(), -&bp, z(), z()],
        vec![z(), z(), z(), b.clone()],
    ];
    let changed = change_basis(&swapped, &BasisChange::new(matrix).unwrap()).unwrap();
    let scale = PointTransformation::new(
        (
            mul(vec![Expr::constant(b.clone()), Expr::x()]),
            mul(vec![Expr::constant(b.clone()), Expr::y()]),
        ),
        (
            mul(vec![Expr::int(3), Expr::sym(jetlie::transform::xt())]),
            mul(vec![Expr::int(3), Expr::sym(jetlie::transform::yt())]),
        ),
        &policy,
    )
    .unwrap();
    let rescaled: Vec<VectorField> = changed
        .basis
        .iter()
        .map(|f| pushforward(f, &scale).unwrap())
        .collect();
    let want_second = vec![
        dx(),
        field(Expr::y(), Expr::zero()),
        field(Expr::zero(), Expr::int(-1)),
        field(
            mul(vec![Expr::constant(&Scalar::one() + &b), Expr::x()]),
            mul(vec![Expr::constant(b), Expr::y()]),
        ),
    ];
    for (got, want) in rescaled.iter().zip(&want_second) {
        assert_eq!(got, want, "second normal form, field-by-field");
    }
    report(
        "criterion 5 (series equivalence)",
        true,
        "swap + shift reaches the first form; rescaling basis change reaches the second",
    );
}

// Criterion 6: all eight real-to-complex rows preserve brackets under
// pushforward plus Gaussian basis change, with vanishing residuals.
#[test]
fn criterion_6_complex_reductions() {
    let catalog = Catalog::load().unwrap();
    let policy = ZeroPolicy::default();
    let rows = ["1", "2", "3", "4", "7", "17", "18", "19"];
    let mut verified = 0usize;
    for n1 in rows {
        let spec_row = catalog.table2_row(n1).unwrap();
        let source_spec = catalog.spec(&spec_row.source).unwrap();
        let tuple = sample_tuples(&source_spec.groups[0]).into_iter().next().unwrap();
        let entry = instantiate(source_spec, &tuple, &BTreeMap::new(), None).unwrap();
        let mut env = BTreeMap::new();
        for (name, binding) in &entry.params_used {
            if let ParamBinding::Value(v) = binding {
                env.insert(Symbol::param(name), Expr::constant(v.clone()));
            }
        }
        let row = table2_row_build(spec_row, &env).unwrap();
        let outcome = apply_table2(&row, &entry.realization, &policy).unwrap();
        assert!(outcome.brackets_preserved, "row {n1}: bracket residual nonzero");
        assert_eq!(outcome.after.basis.len(), entry.realization.dim());
        verified += 1;
    }
    report(
        "criterion 6 (real-to-complex rows)",
        verified == 8,
        "8 rows: brackets preserved, structure constants conjugate, images independent",
    );
}

// Criterion 7: the randomized property suites.
#[test]
fn criterion_7_property_suites() {
    let catalog = Catalog::load().unwrap();
    let cfg = RunConfig::default();
    let outcomes = runner::props::run_all(&catalog, &cfg);
    let mut all = true;
    let mut lines = Vec::new();
    for o in &outcomes {
        lines.push(format!("{}={}", o.name, if o.pass { "ok" } else { "FAIL" }));
        all &= o.pass;
    }
    report("criterion 7 (property suites)", all, &lines.join(", "));
}

// Criterion 8: the numeric flow cross-oracle passes on every catalog
// invariant and rejects the planted non-invariants.
#[test]
fn criterion_8_flow_cross_oracle() {
    let started = Instant::now();
    let catalog = Catalog::load().unwrap();
    let mut checked = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for spec in &catalog.entries {
        for group in &spec.groups {
            let tuple = sample_tuples(group).into_iter().next().unwrap();
            let entry = instantiate(spec, &tuple, &BTreeMap::new(), None).unwrap();
            let cfg = FlowConfig { seed: 42, ..FlowConfig::default() };
            for inv in &entry.invariants {
                match numeric_flow_check(&entry.realization, inv, &cfg) {
                    Ok(rep) if rep.pass => checked += 1,
                    Ok(rep) => failures.push(format!("{}: drift {:.2e}", spec.label, rep.max_rel_drift)),
                    Err(e) => failures.push(format!("{}: {e}", spec.label)),
                }
            }
        }
    }
    // Planted non-invariants must fail: y' for the translations-plus-shear
    // row 9, y for the scaling row 4.
    let field = |xi: Expr, eta: Expr| VectorField::new(xi, eta).unwrap();
    let r9 = Realization::new(vec![
        field(Expr::zero(), Expr::one()),
        field(Expr::one(), Expr::zero()),
        field(Expr::zero(), Expr::x()),
    ]);
    let r4 = Realization::new(vec![
        field(Expr::one(), Expr::zero()),
        field(Expr::x(), Expr::y()),
    ]);
    let cfg = FlowConfig { seed: 42, ..FlowConfig::default() };
    let planted9 = numeric_flow_check(&r9, &Expr::jet(1), &cfg).unwrap();
    let planted4 = numeric_flow_check(&r4, &Expr::y(), &cfg).unwrap();
    let elapsed = started.elapsed();
    report(
        "criterion 8 (flow cross-oracle)",
        failures.is_empty() && !planted9.pass && !planted4.pass,
        &format!(
            "{checked} catalog invariants conserved; planted non-invariants drift ({:.2e}, {:.2e}); {elapsed:?}; failures: {failures:?}",
            planted9.max_rel_drift, planted4.max_rel_drift
        ),
    );
}

// Whenever the multiplier condition holds, the numeric flow agrees that
// lambda*D_x maps invariants to invariants: the extended (order+1) invariant
// is conserved along every basis flow.
#[test]
fn cross_oracle_agreement_on_extension() {
    let catalog = Catalog::load().unwrap();
    let mut agreed = 0usize;
    for label in ["5", "9", "13", "17", "20", "30", "40", "53"] {
        let spec = catalog.spec(label).unwrap();
        let tuple = sample_tuples(&spec.groups[0]).into_iter().next().unwrap();
        let entry = instantiate(spec, &tuple, &BTreeMap::new(), None).unwrap();
        let r = &entry.realization;
        let policy = r.policy_with_params(&ZeroPolicy::default());
        assert!(verify_iod(r, &entry.iod, &policy).unwrap(), "entry {label}: multiplier");
        for inv in &entry.invariants {
            let extended = jetlie::invariants::invariant_derivative(&entry.iod, inv);
            // Generically of order n+1; cancellation can collapse it (for
            // the scaling pair, lambda*D_x y = y'/y' = 1).
            assert!(extended.jet_order() <= inv.jet_order() + 1, "entry {label}");
            assert!(
                verify_invariant(r, &extended, &policy).unwrap(),
                "entry {label}: symbolic oracle rejects the extension"
            );
            if extended.as_const().is_some() {
                agreed += 1;
                continue;
            }
            let cfg = FlowConfig { seed: 7, ..FlowConfig::default() };
            let rep = numeric_flow_check(r, &extended, &cfg).unwrap();
            assert!(
                rep.pass,
                "entry {label}: flow oracle drift {:.2e}",
                rep.max_rel_drift
            );
            agreed += 1;
        }
    }
    // And the worked symbolic form, instantiated for the numeric side.
    let (r, inv, iod) = entry_17_symbolic();
    let policy = r.policy_with_params(&ZeroPolicy::default());
    let extended = jetlie::invariants::invariant_derivative(&iod, &inv);
    assert!(verify_invariant(&r, &extended, &policy).unwrap());
    let b = Symbol::param("b");
    let half = Expr::constant(Scalar::from_rational(half_exp(1, 2)));
    let inst = Realization::new(
        r.basis
            .iter()
            .map(|f| VectorField::new(f.xi.subst_one(&b, &half), f.eta.subst_one(&b, &half)).unwrap())
            .collect(),
    );
    let cfg = FlowConfig { seed: 7, ..FlowConfig::default() };
    let rep = numeric_flow_check(&inst, &extended.subst_one(&b, &half), &cfg).unwrap();
    report(
        "cross-oracle agreement (invariant derivative)",
        rep.pass,
        &format!("{} extensions conserved on both oracles; worked-example drift {:.2e}", agreed + 1, rep.max_rel_drift),
    );
}
