//! The per-entry verification pipeline behind `check` and `check-all`, and
//! the randomized property suites.

use crate::catalog::{instantiate, sample_tuples, Catalog, CatalogEntry, ParamBinding};
use crate::error::{Error, Result};
use crate::expr::zero::{equal_up_to_constant, is_zero, ZeroPolicy};
use crate::expr::Expr;
use crate::invariants::{
    functionally_independent, invariant_derivative, lie_determinant, numeric_flow_check,
    verify_invariant, verify_iod, FlowConfig,
};
use crate::lie::{closure_check, invariant_count, nu};
use crate::parse::print_expr;
use crate::report::{CheckResult, EntryReport};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: u32,
    pub tol: f64,
    pub flow: FlowConfig,
    /// Restrict to these check classes when non-empty
    /// (closure, inv, iod, liedet, count, flow, props).
    pub only: BTreeSet<String>,
    /// Parameter overrides from the command line.
    pub params: BTreeMap<String, ParamBinding>,
    pub series_r: Option<u32>,
    pub json: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            trials: 20,
            tol: 1e-9,
            flow: FlowConfig::default(),
            only: BTreeSet::new(),
            params: BTreeMap::new(),
            series_r: None,
            json: false,
        }
    }
}

impl RunConfig {
    fn wants(&self, class: &str) -> bool {
        self.only.is_empty() || self.only.contains(class)
    }

    /// Flow checks are opt-in for the full sweep: slow, and criterion-gated
    /// separately.
    fn wants_flow(&self) -> bool {
        self.only.contains("flow")
    }

    pub fn policy_for(&self, label: &str, case: Option<&str>, sample_idx: usize) -> ZeroPolicy {
        // Stable per-task seed: reports do not depend on scheduling order.
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(label.as_bytes());
        if let Some(c) = case {
            eat(c.as_bytes());
        }
        eat(&sample_idx.to_le_bytes());
        ZeroPolicy {
            trials: self.trials,
            tol: self.tol,
            seed: self.seed ^ h,
            ..ZeroPolicy::default()
        }
    }
}

fn fmt_params(params: &BTreeMap<String, ParamBinding>) -> BTreeMap<String, String> {
    params
        .iter()
        .map(|(k, v)| {
            let s = match v {
                ParamBinding::Value(c) => c.to_string(),
                ParamBinding::Symbolic => "symbolic".to_string(),
            };
            (k.clone(), s)
        })
        .collect()
}

/// Runs the selected check classes against one instantiated entry.
pub fn verify_instance(
    entry: &CatalogEntry,
    cfg: &RunConfig,
    policy: &ZeroPolicy,
) -> BTreeMap<String, CheckResult> {
    let mut checks: BTreeMap<String, CheckResult> = BTreeMap::new();
    let r = &entry.realization;

    if cfg.wants("closure") {
        checks.insert(
            "closure".into(),
            match closure_check(r, policy) {
                Ok(sc) => {
                    if sc.antisymmetry_ok() && sc.jacobi_ok() {
                        CheckResult::pass("structure constants recovered; antisymmetry and Jacobi exact")
                    } else {
                        CheckResult::fail("structure constant table violates antisymmetry or Jacobi")
                    }
                }
                Err(e) => CheckResult::fail(format!("{e}")),
            },
        );
    }

    let nu_value = match nu(r, policy) {
        Ok(v) => Some(v),
        Err(e) => {
            checks.insert("rank".into(), CheckResult::error(format!("{e}")));
            None
        }
    };

    if cfg.wants("inv") {
        let mut all_ok = true;
        let mut notes: Vec<String> = Vec::new();
        for (i, inv) in entry.invariants.iter().enumerate() {
            match verify_invariant(r, inv, policy) {
                Ok(true) => notes.push(format!("I{} ok", i + 1)),
                Ok(false) => {
                    all_ok = false;
                    notes.push(format!("I{} = {} is NOT annihilated", i + 1, print_expr(inv)));
                }
                Err(e) => {
                    all_ok = false;
                    notes.push(format!("I{}: {e}", i + 1));
                }
            }
        }
        if entry.invariants.len() > 1 {
            match functionally_independent(&entry.invariants, r, policy) {
                Ok(true) => notes.push("independent".into()),
                Ok(false) => {
                    all_ok = false;
                    notes.push("members functionally dependent".into());
                }
                Err(e) => {
                    all_ok = false;
                    notes.push(format!("independence: {e}"));
                }
            }
        }
        let note = notes.join("; ");
        checks.insert(
            "inv".into(),
            if all_ok { CheckResult::pass(note) } else { CheckResult::fail(note) },
        );
    }

    if cfg.wants("iod") {
        checks.insert(
            "iod".into(),
            match verify_iod(r, &entry.iod, policy) {
                Ok(true) => CheckResult::pass(format!("lambda = {}", print_expr(&entry.iod))),
                Ok(false) => CheckResult::fail(format!(
                    "lambda = {} fails the multiplier condition",
                    print_expr(&entry.iod)
                )),
                Err(e) => CheckResult::error(format!("{e}")),
            },
        );
    }

    if cfg.wants("liedet") {
        checks.insert(
            "liedet".into(),
            match lie_determinant(r, policy) {
                Ok(det) => match &entry.liedet_expected {
                    None => {
                        if det.as_const().is_some_and(|c| !c.is_zero()) {
                            CheckResult::pass(format!("{} (nonzero constant)", print_expr(&det)))
                        } else {
                            CheckResult::fail(format!(
                                "expected a nonzero constant, derived {}",
                                print_expr(&det)
                            ))
                        }
                    }
                    Some(cell) => match equal_up_to_constant(&det, cell, policy) {
                        Ok(Some(c)) if !c.is_zero() => {
                            CheckResult::pass(format!("{} = ({c}) * table cell", print_expr(&det)))
                        }
                        Ok(_) => CheckResult::fail(format!(
                            "derived {} does not match table cell {}",
                            print_expr(&det),
                            print_expr(cell)
                        )),
                        Err(e) => CheckResult::error(format!("{e}")),
                    },
                },
                Err(e) => CheckResult::fail(format!("{e}")),
            },
        );
    }

    if cfg.wants("count") {
        let res = (|| -> Result<CheckResult> {
            let Some(order) = nu_value else {
                return Ok(CheckResult::error("stabilization order unavailable".to_string()));
            };
            let expected = invariant_count(r, order + 1, policy)?;
            let low = entry
                .invariants
                .iter()
                .filter(|e| e.jet_order() <= order + 1)
                .count();
            if !entry.counting {
                return Ok(CheckResult::skip(format!(
                    "counting law not asserted for this row (nu={order}, d={expected}, members<=nu+1: {low})"
                )));
            }
            if low == expected {
                Ok(CheckResult::pass(format!("nu={order}; {low} basis member(s) of order <= nu+1 = d_(nu+1) = {expected}")))
            } else {
                Ok(CheckResult::fail(format!(
                    "nu={order}; {low} basis member(s) of order <= nu+1 but d_(nu+1) = {expected}"
                )))
            }
        })();
        checks.insert(
            "count".into(),
            res.unwrap_or_else(|e| CheckResult::error(format!("{e}"))),
        );
    }

    if cfg.wants_flow() {
        let mut flow_cfg = cfg.flow.clone();
        flow_cfg.seed = policy.seed;
        let mut all_ok = true;
        let mut notes = Vec::new();
        for (i, inv) in entry.invariants.iter().enumerate() {
            match numeric_flow_check(r, inv, &flow_cfg) {
                Ok(rep) => {
                    if rep.pass {
                        notes.push(format!("I{} drift {:.2e}", i + 1, rep.max_rel_drift));
                    } else {
                        all_ok = false;
                        notes.push(format!("I{} drifts {:.2e}", i + 1, rep.max_rel_drift));
                    }
                }
                Err(e) => {
                    all_ok = false;
                    notes.push(format!("I{}: {e}", i + 1));
                }
            }
        }
        let note = notes.join("; ");
        checks.insert(
            "flow".into(),
            if all_ok { CheckResult::pass(note) } else { CheckResult::fail(note) },
        );
    }

    checks
}

/// Verifies one catalog entry across its case variants and parameter samples
/// (or at the explicitly supplied parameters).
pub fn check_entry(catalog: &Catalog, label: &str, cfg: &RunConfig) -> Result<Vec<EntryReport>> {
    let spec = catalog.spec(label)?;
    let mut reports = Vec::new();
    if !cfg.params.is_empty() {
        let entry = instantiate(spec, &cfg.params, &BTreeMap::new(), cfg.series_r)?;
        reports.push(run_one(&entry, cfg, 0));
        return Ok(reports);
    }
    // When the entry is regenerated at a non-default series index, the case
    // groups move with it.
    let spec_owned;
    let spec = match (spec.series, cfg.series_r) {
        (Some(series), Some(r)) if r != series.default => {
            spec_owned = crate::catalog::series::build_series(label, r)?;
            &spec_owned
        }
        _ => spec,
    };
    for group in &spec.groups {
        for (k, tuple) in sample_tuples(group).into_iter().enumerate() {
            let entry = instantiate(spec, &tuple, &BTreeMap::new(), cfg.series_r)?;
            reports.push(run_one(&entry, cfg, k));
        }
    }
    Ok(reports)
}

fn run_one(entry: &CatalogEntry, cfg: &RunConfig, sample_idx: usize) -> EntryReport {
    let started = Instant::now();
    let policy = {
        let mut p = cfg.policy_for(&entry.label, entry.case.as_deref(), sample_idx);
        p = entry.realization.policy_with_params(&p);
        p
    };
    let checks = verify_instance(entry, cfg, &policy);
    EntryReport {
        entry: entry.label.clone(),
        case: entry.case.clone(),
        params: fmt_params(&entry.params_used),
        seed: policy.seed,
        checks,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Runs every catalog entry on a small worker pool; reports come back in
/// catalog order regardless of completion order.
pub fn check_all(catalog: &Catalog, cfg: &RunConfig) -> Vec<Result<Vec<EntryReport>>> {
    let labels = catalog.labels();
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<Vec<EntryReport>>>> = Vec::new();
    slots.resize_with(labels.len(), || None);
    let slots = std::sync::Mutex::new(slots);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= labels.len() {
                    break;
                }
                let res = check_entry(catalog, &labels[i], cfg);
                slots.lock().unwrap()[i] = Some(res);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|s| s.expect("worker filled slot")).collect()
}

pub mod props {
    //! Randomized property suites shared by the test harness and the CLI's
    //! `check-all --only props`.

    use super::*;
    use crate::expr::eval::Bindings;
    use crate::expr::{add, fun, mul, pow_i, FunKind, Symbol};
    use crate::jet::{apply, prolong, total_derivative, VectorField};
    use crate::lie::lie_bracket;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub struct PropOutcome {
        pub name: &'static str,
        pub pass: bool,
        pub detail: String,
    }

    /// Random expression tree over x, y, low jets and the parameters a, b.
    pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
        if depth == 0 {
            return match rng.gen_range(0..8) {
                0 => Expr::x(),
                1 => Expr::y(),
                2 => Expr::jet(1),
                3 => Expr::jet(2),
                4 => Expr::jet(3),
                5 => Expr::param("a"),
                6 => Expr::int(rng.gen_range(-3..4)),
                _ => Expr::ratio(rng.gen_range(1..5), rng.gen_range(1..5)),
            };
        }
        match rng.gen_range(0..10) {
            0..=3 => {
                let n = rng.gen_range(2..4);
                add((0..n).map(|_| random_expr(rng, depth - 1)).collect())
            }
            4..=6 => {
                let n = rng.gen_range(2..4);
                mul((0..n).map(|_| random_expr(rng, depth - 1)).collect())
            }
            7 => pow_i(random_expr(rng, depth - 1), *[2i64, 3, -1, -2].get(rng.gen_range(0..4)).unwrap()),
            8 => fun(
                *[FunKind::Exp, FunKind::Sin, FunKind::Cos, FunKind::Arctan]
                    .get(rng.gen_range(0..4))
                    .unwrap(),
                random_expr(rng, depth - 1),
            ),
            _ => random_expr(rng, depth - 1),
        }
    }

    fn random_point(rng: &mut ChaCha8Rng, symbols: &std::collections::BTreeSet<Symbol>) -> Bindings {
        let mut pt = Bindings::new();
        for s in symbols {
            let mag = rng.gen_range(0.1..2.0);
            let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
            pt.insert(s.clone(), Complex64::new(sign * mag, 1e-3));
        }
        pt
    }

    /// simplify is idempotent and value-preserving on random trees.
    pub fn simplify_idempotent_and_value_preserving(seed: u64, trees: u32) -> PropOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
        let mut checked_points = 0u32;
        for i in 0..trees {
            let e = random_expr(&mut rng, 3);
            let s = e.simplify();
            if s != s.simplify() {
                return PropOutcome {
                    name: "simplify-idempotent",
                    pass: false,
                    detail: format!("tree {i}: simplify not idempotent on {e}"),
                };
            }
            let symbols = e.symbols();
            for _ in 0..5 {
                let pt = random_point(&mut rng, &symbols);
                let (Ok((v1, m1)), Ok((v2, m2))) = (
                    crate::expr::eval::eval_tracked(&e, &pt),
                    crate::expr::eval::eval_tracked(&s, &pt),
                ) else {
                    continue;
                };
                checked_points += 1;
                // 1e-12 relative, scaled by the largest intermediate so
                // cancellation-heavy trees are judged fairly.
                let scale = 1.0 + m1.max(m2);
                if (v1 - v2).norm() > 1e-12 * scale {
                    return PropOutcome {
                        name: "simplify-idempotent",
                        pass: false,
                        detail: format!("tree {i}: value changed from {v1} to {v2} on {e}"),
                    };
                }
            }
        }
        PropOutcome {
            name: "simplify-idempotent",
            pass: true,
            detail: format!("{trees} random trees, {checked_points} evaluation points"),
        }
    }

    /// d(u*v) = u dv + v du under the zero-test.
    pub fn product_rule(seed: u64, cases: u32) -> PropOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9d);
        let policy = ZeroPolicy::with_seed(seed ^ 0x77);
        for i in 0..cases {
            let u = random_expr(&mut rng, 2);
            let v = random_expr(&mut rng, 2);
            for sym in [Symbol::X, Symbol::jet(1)] {
                let residual = mul(vec![u.clone(), v.clone()]).diff(&sym)
                    - mul(vec![u.clone(), v.diff(&sym)])
                    - mul(vec![v.clone(), u.diff(&sym)]);
                match is_zero(&residual, &policy) {
                    Ok(true) => {}
                    Ok(false) => {
                        return PropOutcome {
                            name: "product-rule",
                            pass: false,
                            detail: format!("case {i}: residual nonzero for u={u}, v={v}"),
                        }
                    }
                    Err(_) => continue,
                }
            }
            // Mixed partials commute across independent symbols.
            let e = random_expr(&mut rng, 2);
            if e.diff(&Symbol::X).diff(&Symbol::jet(2)) != e.diff(&Symbol::jet(2)).diff(&Symbol::X) {
                return PropOutcome {
                    name: "product-rule",
                    pass: false,
                    detail: format!("case {i}: mixed partials differ structurally on {e}"),
                };
            }
        }
        PropOutcome {
            name: "product-rule",
            pass: true,
            detail: format!("{cases} random pairs, linearity and commutation included"),
        }
    }

    fn random_poly(rng: &mut ChaCha8Rng, max_deg: i64) -> Expr {
        let mut terms = Vec::new();
        for dx in 0..=max_deg {
            for dy in 0..=(max_deg - dx) {
                if rng.gen_bool(0.5) {
                    continue;
                }
                let c = rng.gen_range(-3..4);
                if c == 0 {
                    continue;
                }
                terms.push(mul(vec![
                    Expr::int(c),
                    pow_i(Expr::x(), dx),
                    pow_i(Expr::y(), dy),
                ]));
            }
        }
        add(terms)
    }

    /// The recursion-built eta^1, eta^2 agree with the classical closed
    /// formulas, computed independently.
    pub fn prolongation_vs_direct(seed: u64, fields: u32) -> PropOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe7a);
        for i in 0..fields {
            let xi = random_poly(&mut rng, 2);
            let eta = random_poly(&mut rng, 2);
            let v = match VectorField::new(xi.clone(), eta.clone()) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let p = prolong(&v, 2);
            let yp = Expr::jet(1);
            let ypp = Expr::jet(2);
            let (xi_x, xi_y) = (xi.diff(&Symbol::X), xi.diff(&Symbol::Y));
            let (eta_x, eta_y) = (eta.diff(&Symbol::X), eta.diff(&Symbol::Y));
            // eta^1 = eta_x + (eta_y - xi_x) y' - xi_y y'^2
            let direct1 = eta_x.clone()
                + mul(vec![eta_y.clone() - xi_x.clone(), yp.clone()])
                - mul(vec![xi_y.clone(), pow_i(yp.clone(), 2)]);
            // eta^2 = eta_xx + (2 eta_xy - xi_xx) y' + (eta_yy - 2 xi_xy) y'^2
            //         - xi_yy y'^3 + (eta_y - 2 xi_x) y'' - 3 xi_y y' y''
            let direct2 = eta_x.diff(&Symbol::X)
                + mul(vec![
                    mul(vec![Expr::int(2), eta_x.diff(&Symbol::Y)]) - xi_x.diff(&Symbol::X),
                    yp.clone(),
                ])
                + mul(vec![
                    eta_y.diff(&Symbol::Y) - mul(vec![Expr::int(2), xi_x.diff(&Symbol::Y)]),
                    pow_i(yp.clone(), 2),
                ])
                - mul(vec![xi_y.diff(&Symbol::Y), pow_i(yp.clone(), 3)])
                + mul(vec![eta_y.clone() - mul(vec![Expr::int(2), xi_x.clone()]), ypp.clone()])
                - mul(vec![Expr::int(3), xi_y.clone(), yp.clone(), ypp.clone()]);
            if p.etas[0] != direct1 || p.etas[1] != direct2 {
                return PropOutcome {
                    name: "prolongation-vs-direct",
                    pass: false,
                    detail: format!("field {i}: xi={xi}, eta={eta}"),
                };
            }
        }
        PropOutcome {
            name: "prolongation-vs-direct",
            pass: true,
            detail: format!("{fields} random polynomial fields, orders 1 and 2"),
        }
    }

    /// Bracket antisymmetry and the Jacobi identity on the catalog entries.
    pub fn bracket_identities(catalog: &Catalog, cfg: &RunConfig) -> PropOutcome {
        let policy = ZeroPolicy::with_seed(cfg.seed ^ 0x3ac0b1);
        for spec in &catalog.entries {
            let Ok(entry) = first_instance(spec) else {
                return PropOutcome {
                    name: "bracket-identities",
                    pass: false,
                    detail: format!("entry {}: could not instantiate", spec.label),
                };
            };
            let policy = entry.realization.policy_with_params(&policy);
            let basis = &entry.realization.basis;
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    let anti_xi = lie_bracket(&basis[i], &basis[j]).xi
                        + lie_bracket(&basis[j], &basis[i]).xi;
                    let anti_eta = lie_bracket(&basis[i], &basis[j]).eta
                        + lie_bracket(&basis[j], &basis[i]).eta;
                    if !anti_xi.is_zero_const() || !anti_eta.is_zero_const() {
                        return PropOutcome {
                            name: "bracket-identities",
                            pass: false,
                            detail: format!("entry {}: antisymmetry fails at ({i},{j})", spec.label),
                        };
                    }
                    for k in 0..basis.len() {
                        let cyc = |a: usize, b: usize, c: usize| {
                            lie_bracket(&lie_bracket(&basis[a], &basis[b]), &basis[c])
                        };
                        let total_xi = cyc(i, j, k).xi + cyc(j, k, i).xi + cyc(k, i, j).xi;
                        let total_eta = cyc(i, j, k).eta + cyc(j, k, i).eta + cyc(k, i, j).eta;
                        match (is_zero(&total_xi, &policy), is_zero(&total_eta, &policy)) {
                            (Ok(true), Ok(true)) => {}
                            _ => {
                                return PropOutcome {
                                    name: "bracket-identities",
                                    pass: false,
                                    detail: format!(
                                        "entry {}: Jacobi residual nonzero at ({i},{j},{k})",
                                        spec.label
                                    ),
                                }
                            }
                        }
                    }
                }
            }
        }
        PropOutcome {
            name: "bracket-identities",
            pass: true,
            detail: format!("antisymmetry and Jacobi over {} entries", catalog.entries.len()),
        }
    }

    /// `[e^(inf), D_x] = -(D_x xi) D_x`, contracted against random functions:
    /// apply(p, D_x e) - D_x(apply(p, e)) + (D_x xi) D_x e vanishes.
    pub fn contraction_identity(catalog: &Catalog, cfg: &RunConfig) -> PropOutcome {
        let policy = ZeroPolicy::with_seed(cfg.seed ^ 0xd0);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xfeed);
        for spec in catalog.entries.iter() {
            let Ok(entry) = first_instance(spec) else {
                continue;
            };
            let policy = entry.realization.policy_with_params(&policy);
            for f in &entry.realization.basis {
                let e = {
                    let raw = random_expr(&mut rng, 2);
                    // Keep the test function within jet order 2.
                    if raw.jet_order() > 2 {
                        mul(vec![Expr::jet(2), Expr::y()]) + Expr::x()
                    } else {
                        raw
                    }
                };
                let ord = e.jet_order();
                let p = prolong(f, ord + 1);
                let dxe = total_derivative(&e, ord);
                let lhs = match apply(&p, &dxe) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let inner = match apply(&p, &e) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let mid = total_derivative(&inner, inner.jet_order());
                let corr = mul(vec![total_derivative(&f.xi, 0), dxe]);
                let residual = lhs - mid + corr;
                match is_zero(&residual, &policy) {
                    Ok(true) => {}
                    _ => {
                        return PropOutcome {
                            name: "contraction-identity",
                            pass: false,
                            detail: format!("entry {}: residual nonzero", spec.label),
                        }
                    }
                }
            }
        }
        PropOutcome {
            name: "contraction-identity",
            pass: true,
            detail: "commutator contraction on all catalog fields".into(),
        }
    }

    /// The invariant derivative of every catalog invariant is again an
    /// invariant (the defining property of the operator of invariant
    /// differentiation), and scaled multipliers behave as expected.
    pub fn iod_closure(catalog: &Catalog, cfg: &RunConfig) -> PropOutcome {
        let policy = ZeroPolicy::with_seed(cfg.seed ^ 0x10d);
        for spec in &catalog.entries {
            let Ok(entry) = first_instance(spec) else {
                continue;
            };
            let policy = entry.realization.policy_with_params(&policy);
            for inv in &entry.invariants {
                let extended = invariant_derivative(&entry.iod, inv);
                match verify_invariant(&entry.realization, &extended, &policy) {
                    Ok(true) => {}
                    _ => {
                        return PropOutcome {
                            name: "iod-closure",
                            pass: false,
                            detail: format!(
                                "entry {}: lambda*D_x of {} is not an invariant",
                                spec.label,
                                print_expr(inv)
                            ),
                        }
                    }
                }
            }
            // lambda times an invariant is again a multiplier; lambda times a
            // non-invariant is not.
            if let Some(inv) = entry.invariants.first() {
                let mu = mul(vec![entry.iod.clone(), inv.clone()]);
                match verify_iod(&entry.realization, &mu, &policy) {
                    Ok(true) => {}
                    _ => {
                        return PropOutcome {
                            name: "iod-closure",
                            pass: false,
                            detail: format!("entry {}: lambda*I fails the multiplier condition", spec.label),
                        }
                    }
                }
                if let Some(bad) = pick_non_invariant(&entry, &policy) {
                    let mu = mul(vec![entry.iod.clone(), bad.clone()]);
                    match verify_iod(&entry.realization, &mu, &policy) {
                        Ok(false) => {}
                        _ => {
                            return PropOutcome {
                                name: "iod-closure",
                                pass: false,
                                detail: format!(
                                    "entry {}: lambda*({}) unexpectedly passes",
                                    spec.label,
                                    print_expr(&bad)
                                ),
                            }
                        }
                    }
                }
            }
        }
        PropOutcome {
            name: "iod-closure",
            pass: true,
            detail: "invariant derivatives re-verified on every entry".into(),
        }
    }

    fn pick_non_invariant(entry: &CatalogEntry, policy: &ZeroPolicy) -> Option<Expr> {
        for cand in [Expr::x(), Expr::y(), Expr::jet(1), Expr::jet(2), Expr::jet(3)] {
            if let Ok(false) = verify_invariant(&entry.realization, &cand, policy) {
                return Some(cand);
            }
        }
        None
    }

    fn first_instance(spec: &crate::parse::EntrySpec) -> Result<CatalogEntry> {
        let group = spec.groups.first().ok_or_else(|| Error::Invalid("no groups".into()))?;
        let tuple = sample_tuples(group).into_iter().next().unwrap_or_default();
        instantiate(spec, &tuple, &BTreeMap::new(), None)
    }

    /// The full property suite in a fixed order.
    pub fn run_all(catalog: &Catalog, cfg: &RunConfig) -> Vec<PropOutcome> {
        vec![
            simplify_idempotent_and_value_preserving(cfg.seed, 1000),
            product_rule(cfg.seed, 60),
            prolongation_vs_direct(cfg.seed, 20),
            bracket_identities(catalog, cfg),
            contraction_identity(catalog, cfg),
            iod_closure(catalog, cfg),
        ]
    }
}

/// Renders reports as JSON lines or human-readable text.
pub fn render_reports(reports: &[EntryReport], json: bool) -> String {
    let mut out = String::new();
    for r in reports {
        if json {
            out.push_str(&r.to_json());
            out.push('\n');
        } else {
            out.push_str(&r.render_text());
        }
    }
    out
}

pub fn all_passed(reports: &[EntryReport]) -> bool {
    reports.iter().all(|r| r.passed())
}
