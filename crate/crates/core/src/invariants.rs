//! Differential-invariant machinery: Lie determinants, verification of
//! invariant bases and operators of invariant differentiation, and the
//! numeric flow cross-check.

use crate::error::{Error, Result};
use crate::expr::eval::Program;
use crate::expr::zero::{is_zero, ZeroPolicy};
use crate::expr::{mul, Expr, Symbol};
use crate::jet::{apply, prolong, total_derivative};
use crate::lie::{invariant_count, nu, Realization};
use crate::linalg;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// The r x (nu+2) matrix of prolonged coefficients
/// (xi_i, eta_i, eta_i^1, ..., eta_i^nu).
#[derive(Debug, Clone)]
pub struct LieMatrix {
    pub order: u32,
    pub rows: Vec<Vec<Expr>>,
}

impl LieMatrix {
    pub fn build(r: &Realization, order: u32) -> LieMatrix {
        let rows = r
            .basis
            .iter()
            .map(|f| prolong(f, order).coefficient_row())
            .collect();
        LieMatrix { order, rows }
    }
}

/// Symbolic determinant by dynamic programming over column subsets.
pub fn sym_det(rows: &[Vec<Expr>]) -> Expr {
    let n = rows.len();
    if n == 0 {
        return Expr::one();
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    // dp[mask] = det of the popcount(mask) x popcount(mask) submatrix formed
    // by the first popcount(mask) rows and the columns in mask.
    let mut dp: Vec<Option<Expr>> = vec![None; 1 << n];
    dp[0] = Some(Expr::one());
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        if mask == 0 {
            continue;
        }
        let k = mask.count_ones() as usize; // row index k-1
        let mut terms: Vec<Expr> = Vec::new();
        let mut idx = 0; // position of the column among set bits
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &rows[k - 1][col];
            if !entry.is_zero_const() {
                let sub = dp[(mask ^ (1 << col)) as usize]
                    .clone()
                    .expect("subset determinant computed");
                let sign = if (k - 1 + idx) % 2 == 0 { 1 } else { -1 };
                terms.push(mul(vec![Expr::int(sign), entry.clone(), sub]));
            }
            idx += 1;
        }
        dp[mask as usize] = Some(crate::expr::add(terms));
    }
    dp[(1 << n) - 1].clone().unwrap()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The first maximal minor of the order-nu Lie matrix that does not vanish
/// identically, scanning column subsets in lexicographic order.
pub fn lie_determinant(r: &Realization, policy: &ZeroPolicy) -> Result<Expr> {
    let order = nu(r, policy)?;
    let m = LieMatrix::build(r, order);
    let dim = r.dim();
    let cols = order as usize + 2;
    let policy = r.policy_with_params(policy);
    for subset in combinations(cols, dim) {
        let sub: Vec<Vec<Expr>> = m
            .rows
            .iter()
            .map(|row| subset.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let det = sym_det(&sub);
        if det.is_zero_const() {
            continue;
        }
        if !is_zero(&det, &policy)? {
            return Ok(det);
        }
    }
    Err(Error::AllMinorsVanish)
}

/// Infinitesimal invariance: every prolonged basis field annihilates I.
pub fn verify_invariant(r: &Realization, inv: &Expr, policy: &ZeroPolicy) -> Result<bool> {
    let n = inv.jet_order();
    let policy = r.policy_with_params(policy);
    for f in &r.basis {
        let p = prolong(f, n);
        let applied = apply(&p, inv)?;
        if !is_zero(&applied, &policy)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The multiplier condition for an operator of invariant differentiation
/// `lambda D_x`: for every basis field, `e^(m) lambda = lambda * D_x xi`.
/// This is the vanishing of the D_x coefficient in `[e^(inf), lambda D_x]`.
pub fn verify_iod(r: &Realization, lambda: &Expr, policy: &ZeroPolicy) -> Result<bool> {
    let m = lambda.jet_order();
    let policy = r.policy_with_params(policy);
    for f in &r.basis {
        let p = prolong(f, m);
        let lhs = apply(&p, lambda)?;
        let rhs = mul(vec![lambda.clone(), total_derivative(&f.xi, 0)]);
        if !is_zero(&(lhs - rhs), &policy)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `lambda * D_x I`: maps invariants to invariants once `lambda` passes
/// the multiplier condition.
pub fn invariant_derivative(lambda: &Expr, inv: &Expr) -> Expr {
    mul(vec![lambda.clone(), total_derivative(inv, inv.jet_order())])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisReport {
    pub members_invariant: bool,
    pub independent: bool,
    pub count_matches: bool,
    pub nu: u32,
    pub expected_count: usize,
    pub low_order_members: usize,
}

impl BasisReport {
    pub fn pass(&self) -> bool {
        self.members_invariant && self.independent && self.count_matches
    }
}

/// Checks (a) every member is an invariant, (b) the members are functionally
/// independent (numeric Jacobian rank), and (c) the number of members of
/// order <= nu+1 matches the count predicted by d_n = n + 2 - r_n.
pub fn verify_basis(r: &Realization, basis: &[Expr], policy: &ZeroPolicy) -> Result<BasisReport> {
    if basis.is_empty() {
        return Err(Error::Invalid("empty invariant basis".into()));
    }
    let mut members_invariant = true;
    for inv in basis {
        if !verify_invariant(r, inv, policy)? {
            members_invariant = false;
        }
    }
    let independent = functionally_independent(basis, r, policy)?;
    let order = nu(r, policy)?;
    let expected = invariant_count(r, order + 1, policy)?;
    let low_order = basis.iter().filter(|e| e.jet_order() <= order + 1).count();
    Ok(BasisReport {
        members_invariant,
        independent,
        count_matches: low_order == expected,
        nu: order,
        expected_count: expected,
        low_order_members: low_order,
    })
}

/// Numeric Jacobian rank of the basis with respect to (x, y, y', ..., y^(m))
/// at seeded generic points.
pub fn functionally_independent(basis: &[Expr], r: &Realization, policy: &ZeroPolicy) -> Result<bool> {
    let m = basis.iter().map(|e| e.jet_order()).max().unwrap_or(0);
    let mut vars: Vec<Symbol> = vec![Symbol::X, Symbol::Y];
    for k in 1..=m {
        vars.push(Symbol::jet(k));
    }
    let jac: Vec<Vec<Expr>> = basis
        .iter()
        .map(|e| vars.iter().map(|v| e.diff(v)).collect())
        .collect();
    let policy = r.policy_with_params(policy);
    let mut rng = policy.reseeded(0x1ac0).rng();
    let mut params: BTreeMap<Symbol, num_complex::Complex64> = BTreeMap::new();
    let mut symbols = std::collections::BTreeSet::new();
    for row in &jac {
        for e in row {
            e.collect_symbols(&mut symbols);
        }
    }
    let mut successes = 0;
    for _ in 0..12 {
        params.clear();
        let mut ok = true;
        for s in &symbols {
            let v = match s {
                Symbol::Param(name) => match policy.constraint_for(name).sample(&mut rng) {
                    Ok(r) => crate::scalar::rational_to_f64(&r),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                },
                // Positive band keeps fractional powers of jets real.
                _ => rng.gen_range(0.1..2.0),
            };
            params.insert(s.clone(), num_complex::Complex64::new(v, 0.0));
        }
        if !ok {
            continue;
        }
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(jac.len());
        for row in &jac {
            let mut vals = Vec::with_capacity(row.len());
            for e in row {
                match crate::expr::eval::eval(e, &params) {
                    Ok(v) => vals.push(v.re),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
            rows.push(vals);
        }
        if !ok {
            continue;
        }
        if linalg::f64_rank(&rows, 1e-8) == basis.len() {
            return Ok(true);
        }
        successes += 1;
        if successes >= 3 {
            break;
        }
    }
    if successes == 0 {
        return Err(Error::SingularSample(12));
    }
    Ok(false)
}

#[derive(Debug, Clone)]
pub struct FlowConfig {
    pub trials: u32,
    pub t_end: f64,
    pub step: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { trials: 5, t_end: 0.5, step: 1e-3, tol: 1e-6, seed: 42 }
    }
}

#[derive(Debug, Clone)]
pub struct FlowReport {
    pub pass: bool,
    pub max_rel_drift: f64,
    pub trajectories: usize,
}

/// Relative sensitivity of the compiled invariant to a relative coordinate
/// perturbation; the drift measurement is meaningless where this explodes
/// (the trajectory is skirting a pole of the invariant).
fn conditioning(prog: &Program, z: &[f64], value: f64, stack: &mut Vec<f64>) -> f64 {
    const EPS: f64 = 1e-7;
    let bumped: Vec<f64> = z.iter().map(|&v| v + EPS * (1.0 + v.abs())).collect();
    let shifted = prog.run(&bumped, stack);
    if !shifted.is_finite() {
        return f64::INFINITY;
    }
    (shifted - value).abs() / (EPS * (1.0 + value.abs()))
}

/// Finite-transformation cross-check of invariance: integrates the flow of
/// each prolonged basis field with classical RK4 and watches I along the
/// trajectory. Restarts from a fresh point when a trajectory leaves the
/// sampling box or hits a singularity of I.
pub fn numeric_flow_check(r: &Realization, inv: &Expr, cfg: &FlowConfig) -> Result<FlowReport> {
    let n = inv.jet_order();
    let dims = n as usize + 2;
    let mut slots: BTreeMap<Symbol, usize> = BTreeMap::new();
    slots.insert(Symbol::X, 0);
    slots.insert(Symbol::Y, 1);
    for k in 1..=n {
        slots.insert(Symbol::jet(k), k as usize + 1);
    }
    for s in inv.symbols() {
        if let Symbol::Param(name) = s {
            return Err(Error::Invalid(format!(
                "flow check requires instantiated parameters (found `{name}`)"
            )));
        }
    }
    let inv_prog = Program::compile(inv, &slots)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_rel_drift = 0.0f64;
    let mut pass = true;
    let mut trajectories = 0usize;
    let steps = (cfg.t_end / cfg.step).round() as usize;
    for (idx, f) in r.basis.iter().enumerate() {
        for s in f.xi.symbols().into_iter().chain(f.eta.symbols()) {
            if let Symbol::Param(name) = s {
                return Err(Error::Invalid(format!(
                    "flow check requires instantiated parameters (found `{name}`)"
                )));
            }
        }
        let p = prolong(f, n);
        let rhs: Vec<Program> = p
            .coefficient_row()
            .iter()
            .map(|e| Program::compile(e, &slots))
            .collect::<Result<Vec<_>>>()?;
        let mut stack = Vec::new();
        let mut done = 0u32;
        let mut restarts = 0u32;
        while done < cfg.trials {
            if restarts > 200 {
                return Err(Error::FlowSingular { index: idx + 1 });
            }
            // Starting point in the box, away from the axes; retries shrink
            // toward the tame part of the box so quadratic flows and
            // fractional-power invariants eventually find their domain.
            let shrink = 0.985f64.powi(restarts as i32);
            let hi = (2.0 * shrink).max(0.25);
            let mut z: Vec<f64> = (0..dims)
                .map(|_| {
                    let mag = rng.gen_range(0.1..hi);
                    if rng.gen_bool(0.5) {
                        -mag
                    } else {
                        mag
                    }
                })
                .collect();
            let i0 = inv_prog.run(&z, &mut stack);
            // A huge starting value means the point sits near a pole of the
            // invariant, where the drift measurement is ill-conditioned.
            if !i0.is_finite() || i0.abs() > 1e4 {
                restarts += 1;
                continue;
            }
            if conditioning(&inv_prog, &z, i0, &mut stack) > 2e4 {
                restarts += 1;
                continue;
            }
            let mut drift = 0.0f64;
            let mut ok = true;
            let mut step_count = 0usize;
            let mut k1 = vec![0.0; dims];
            let mut k2 = vec![0.0; dims];
            let mut k3 = vec![0.0; dims];
            let mut k4 = vec![0.0; dims];
            let mut tmp = vec![0.0; dims];
            for _ in 0..steps {
                let eval_rhs = |state: &[f64], out: &mut Vec<f64>, stack: &mut Vec<f64>| {
                    for (d, prog) in rhs.iter().enumerate() {
                        out[d] = prog.run(state, stack);
                    }
                };
                eval_rhs(&z, &mut k1, &mut stack);
                for d in 0..dims {
                    tmp[d] = z[d] + 0.5 * cfg.step * k1[d];
                }
                eval_rhs(&tmp, &mut k2, &mut stack);
                for d in 0..dims {
                    tmp[d] = z[d] + 0.5 * cfg.step * k2[d];
                }
                eval_rhs(&tmp, &mut k3, &mut stack);
                for d in 0..dims {
                    tmp[d] = z[d] + cfg.step * k3[d];
                }
                eval_rhs(&tmp, &mut k4, &mut stack);
                for d in 0..dims {
                    z[d] += cfg.step / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
                }
                // Linear-in-time flows legitimately leave the sampling box
                // while conserving the invariant exactly, so box exit alone
                // does not abort. Past |z| ~ 12 a quadratic flow starts to
                // outrun the fixed step and the accumulated error shows up as
                // spurious drift; treat that as running into the flow's
                // finite-time singularity and restart.
                let mut bad = false;
                for &v in &z {
                    if !v.is_finite() || v.abs() > 12.0 {
                        bad = true;
                    }
                }
                let it = inv_prog.run(&z, &mut stack);
                // |I| exploding two orders past its start means the
                // trajectory ran into a pole of the invariant; that is a
                // singularity, not a conservation failure.
                if bad || !it.is_finite() || it.abs() > 100.0 * (1.0 + i0.abs()) {
                    ok = false;
                    break;
                }
                step_count += 1;
                if step_count % 25 == 0 && conditioning(&inv_prog, &z, it, &mut stack) > 2e4 {
                    ok = false;
                    break;
                }
                let d = (it - i0).abs();
                if d > drift {
                    drift = d;
                }
            }
            if !ok {
                restarts += 1;
                continue;
            }
            done += 1;
            trajectories += 1;
            let rel = drift / (1.0 + i0.abs());
            if rel > max_rel_drift {
                max_rel_drift = rel;
            }
            if drift > cfg.tol * (1.0 + i0.abs()) {
                pass = false;
            }
        }
    }
    Ok(FlowReport { pass, max_rel_drift, trajectories })
}
