//! Lie-algebraic structure of realizations: brackets, closure and structure
//! constants, rank sequences, the stabilization order and invariant counts.

use crate::error::{Error, Result};
use crate::expr::eval::{eval, eval_exact};
use crate::expr::zero::{is_zero, Constraint, ZeroPolicy};
use crate::expr::{Expr, Symbol};
use crate::jet::{prolong, VectorField};
use crate::linalg;
use crate::scalar::{rationalize, Scalar};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// An ordered basis of planar vector fields with parameter constraints;
/// the concrete form of a finite-dimensional Lie algebra on the plane.
#[derive(Debug, Clone)]
pub struct Realization {
    pub basis: Vec<VectorField>,
    pub params: Vec<(Arc<str>, Constraint)>,
    pub label: Option<String>,
}

impl Realization {
    pub fn new(basis: Vec<VectorField>) -> Realization {
        Realization { basis, params: Vec::new(), label: None }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Folds the realization's declared parameter constraints into a policy so
    /// zero tests sample parameters inside their admissible ranges.
    pub fn policy_with_params(&self, base: &ZeroPolicy) -> ZeroPolicy {
        let mut p = base.clone();
        for (name, c) in &self.params {
            p.params.insert(name.clone(), c.clone());
        }
        p
    }

    /// Linear independence over constants: the r x 2P coefficient matrix at
    /// P = r generic points must have rank r; zero fields are rejected.
    pub fn check_independent(&self, policy: &ZeroPolicy) -> Result<()> {
        for (i, f) in self.basis.iter().enumerate() {
            if f.is_zero_field() {
                return Err(Error::Invalid(format!("basis element e{} is identically zero", i + 1)));
            }
        }
        let r = self.dim();
        let policy = self.policy_with_params(policy);
        let mut rng = policy.reseeded(0x11d).rng();
        for _attempt in 0..10 {
            let Some(rows) = self.coefficient_rows_at_points(r, &policy, &mut rng) else {
                continue;
            };
            let rank = linalg::complex_rank(&rows, 1e-8);
            if rank == r {
                return Ok(());
            }
        }
        Err(Error::Invalid(format!(
            "basis of {} is linearly dependent over constants",
            self.label.clone().unwrap_or_else(|| "realization".into())
        )))
    }

    /// Evaluates (xi_i, eta_i) at `npts` random plane points into an
    /// r x (2 npts) matrix; complex because basis changes over the Gaussian
    /// rationals produce complex coefficients.
    fn coefficient_rows_at_points(
        &self,
        npts: usize,
        policy: &ZeroPolicy,
        rng: &mut ChaCha8Rng,
    ) -> Option<Vec<Vec<Complex64>>> {
        let mut symbols = std::collections::BTreeSet::new();
        for f in &self.basis {
            f.xi.collect_symbols(&mut symbols);
            f.eta.collect_symbols(&mut symbols);
        }
        let mut rows = vec![Vec::with_capacity(2 * npts); self.dim()];
        for _ in 0..npts {
            let mut pt = crate::expr::eval::Bindings::new();
            for s in &symbols {
                let v = match s {
                    Symbol::Param(name) => {
                        let c = policy.constraint_for(name);
                        let r = c.sample(rng).ok()?;
                        Complex64::new(crate::scalar::rational_to_f64(&r), 0.0)
                    }
                    _ => Complex64::new(sample_band_f64(rng), 0.0),
                };
                pt.insert(s.clone(), v);
            }
            for (i, f) in self.basis.iter().enumerate() {
                let xi = eval(&f.xi, &pt).ok()?;
                let eta = eval(&f.eta, &pt).ok()?;
                rows[i].push(xi);
                rows[i].push(eta);
            }
        }
        Some(rows)
    }
}

fn sample_band_f64(rng: &mut ChaCha8Rng) -> f64 {
    let mag = rng.gen_range(0.1..2.0);
    if rng.gen_bool(0.5) {
        -mag
    } else {
        mag
    }
}

/// A random rational from +/-[0.1, 2] on a 1/64 grid.
pub fn sample_band_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.gen_range(7..129);
    let sign: i64 = if rng.gen_bool(0.5) { -1 } else { 1 };
    BigRational::new((sign * p).into(), 64.into())
}

/// The commutator `[v, w]` of planar fields.
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> VectorField {
    VectorField {
        xi: v.apply_planar(&w.xi) - w.apply_planar(&v.xi),
        eta: v.apply_planar(&w.eta) - w.apply_planar(&v.eta),
    }
}

/// Structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub dim: usize,
    pub c: Vec<Vec<Vec<Scalar>>>,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants { dim, c: vec![vec![vec![Scalar::zero(); dim]; dim]; dim] }
    }

    pub fn antisymmetry_ok(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    if self.c[i][j][k] != -&self.c[j][i][k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exact Jacobi identity over the scalar field.
    pub fn jacobi_ok(&self) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut sum = Scalar::zero();
                        for m in 0..n {
                            // [[i,j],k] + [[j,k],i] + [[k,i],j] coefficient of e_l
                            sum = &sum + &(&self.c[i][j][m] * &self.c[m][k][l]);
                            sum = &sum + &(&self.c[j][k][m] * &self.c[m][i][l]);
                            sum = &sum + &(&self.c[k][i][m] * &self.c[m][j][l]);
                        }
                        if !sum.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Structure constants after the basis change `e~_i = sum_j m[i][j] e_j`,
    /// by the conjugation law (exact).
    pub fn conjugate(&self, m: &[Vec<Scalar>]) -> Result<StructureConstants> {
        let n = self.dim;
        let minv = linalg::exact_inverse(m).ok_or(Error::SingularMatrix)?;
        let mut out = StructureConstants::zero(n);
        for i in 0..n {
            for j in 0..n {
                // [e~_i, e~_j] = sum_{a,b} m[i][a] m[j][b] c[a][b][l] e_l,
                // then convert e_l back through the inverse.
                let mut in_old = vec![Scalar::zero(); n];
                for a in 0..n {
                    if m[i][a].is_zero() {
                        continue;
                    }
                    for b in 0..n {
                        if m[j][b].is_zero() {
                            continue;
                        }
                        let f = &m[i][a] * &m[j][b];
                        for (l, target) in in_old.iter_mut().enumerate() {
                            if !self.c[a][b][l].is_zero() {
                                *target = &*target + &(&f * &self.c[a][b][l]);
                            }
                        }
                    }
                }
                for k in 0..n {
                    let mut v = Scalar::zero();
                    for (l, coeff) in in_old.iter().enumerate() {
                        if !coeff.is_zero() {
                            v = &v + &(coeff * &minv[l][k]);
                        }
                    }
                    out.c[i][j][k] = v;
                }
            }
        }
        Ok(out)
    }
}

/// Expands every bracket in the basis and confirms the residual vanishes
/// identically. Constants are recovered from evaluation at generic points
/// (exactly when the fields evaluate rationally, else numerically followed by
/// rationalization) and always confirmed symbolically.
///
/// Structure constants of parameterized rows live over the parameter field;
/// free parameters are therefore sampled once (inside their constraints) for
/// the whole check, consistent with how ranks and determinants are run.
pub fn closure_check(r: &Realization, policy: &ZeroPolicy) -> Result<StructureConstants> {
    if !r.params.is_empty() {
        let policy_params = r.policy_with_params(policy);
        let mut rng = policy_params.reseeded(0xc70).rng();
        let mut bindings = BTreeMap::new();
        for (name, constraint) in &r.params {
            let v = constraint.sample(&mut rng)?;
            bindings.insert(
                Symbol::Param(name.clone()),
                Expr::constant(Scalar::from_rational(v)),
            );
        }
        let basis = r
            .basis
            .iter()
            .map(|f| {
                crate::jet::VectorField::new(
                    f.xi.substitute(&bindings),
                    f.eta.substitute(&bindings),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let fixed = Realization { basis, params: Vec::new(), label: r.label.clone() };
        return closure_check(&fixed, policy);
    }
    r.check_independent(policy)?;
    let n = r.dim();
    let policy = r.policy_with_params(policy);
    let mut out = StructureConstants::zero(n);
    let exact_ok = r.basis.iter().all(|f| f.xi.is_rational_form() && f.eta.is_rational_form())
        && r.params.is_empty();
    for i in 0..n {
        for j in i + 1..n {
            let w = lie_bracket(&r.basis[i], &r.basis[j]);
            let coeffs = solve_in_span(r, &w, exact_ok, &policy)
                .ok_or(Error::NotClosed { i: i + 1, j: j + 1 })?;
            // Symbolic confirmation of the residual.
            let mut res_xi = w.xi.clone();
            let mut res_eta = w.eta.clone();
            for (k, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let ce = Expr::constant(c.clone());
                res_xi = res_xi - crate::expr::mul(vec![ce.clone(), r.basis[k].xi.clone()]);
                res_eta = res_eta - crate::expr::mul(vec![ce, r.basis[k].eta.clone()]);
            }
            if !is_zero(&res_xi, &policy)? || !is_zero(&res_eta, &policy)? {
                return Err(Error::NotClosed { i: i + 1, j: j + 1 });
            }
            for k in 0..n {
                out.c[i][j][k] = coeffs[k].clone();
                out.c[j][i][k] = -&coeffs[k];
            }
        }
    }
    Ok(out)
}

/// Express `w` in the basis span by sampling plane points. Returns `None` when
/// the system is inconsistent (bracket leaves the span).
fn solve_in_span(
    r: &Realization,
    w: &VectorField,
    exact_ok: bool,
    policy: &ZeroPolicy,
) -> Option<Vec<Scalar>> {
    let n = r.dim();
    let mut rng = policy.reseeded(0xc105).rng();
    'attempt: for _ in 0..10 {
        if exact_ok && w.xi.is_rational_form() && w.eta.is_rational_form() {
            let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(2 * n);
            let mut rhs: Vec<Scalar> = Vec::with_capacity(2 * n);
            for _ in 0..n {
                let mut pt = BTreeMap::new();
                pt.insert(Symbol::X, Scalar::from_rational(sample_band_rational(&mut rng)));
                pt.insert(Symbol::Y, Scalar::from_rational(sample_band_rational(&mut rng)));
                let mut row_xi = Vec::with_capacity(n);
                let mut row_eta = Vec::with_capacity(n);
                for f in &r.basis {
                    match (eval_exact(&f.xi, &pt), eval_exact(&f.eta, &pt)) {
                        (Ok(a), Ok(b)) => {
                            row_xi.push(a);
                            row_eta.push(b);
                        }
                        _ => continue 'attempt,
                    }
                }
                let (Ok(wxi), Ok(weta)) = (eval_exact(&w.xi, &pt), eval_exact(&w.eta, &pt)) else {
                    continue 'attempt;
                };
                rows.push(row_xi);
                rows.push(row_eta);
                rhs.push(wxi);
                rhs.push(weta);
            }
            match linalg::exact_solve(&rows, &rhs) {
                Some(sol) => return Some(sol),
                None => continue 'attempt,
            }
        } else {
            let mut symbols = std::collections::BTreeSet::new();
            for f in &r.basis {
                f.xi.collect_symbols(&mut symbols);
                f.eta.collect_symbols(&mut symbols);
            }
            w.xi.collect_symbols(&mut symbols);
            w.eta.collect_symbols(&mut symbols);
            let mut rows: Vec<Vec<f64>> = Vec::with_capacity(2 * n + 2);
            let mut rhs: Vec<f64> = Vec::with_capacity(2 * n + 2);
            for _ in 0..n + 1 {
                let mut pt = crate::expr::eval::Bindings::new();
                for s in &symbols {
                    let v = match s {
                        Symbol::Param(name) => {
                            let c = policy.constraint_for(name);
                            let rr = c.sample(&mut rng).ok()?;
                            Complex64::new(crate::scalar::rational_to_f64(&rr), 0.0)
                        }
                        _ => Complex64::new(sample_band_f64(&mut rng), 0.0),
                    };
                    pt.insert(s.clone(), v);
                }
                let mut row_xi = Vec::with_capacity(n);
                let mut row_eta = Vec::with_capacity(n);
                for f in &r.basis {
                    match (eval(&f.xi, &pt), eval(&f.eta, &pt)) {
                        (Ok(a), Ok(b)) => {
                            row_xi.push(a.re);
                            row_eta.push(b.re);
                        }
                        _ => continue 'attempt,
                    }
                }
                let (Ok(wxi), Ok(weta)) = (eval(&w.xi, &pt), eval(&w.eta, &pt)) else {
                    continue 'attempt;
                };
                rows.push(row_xi);
                rows.push(row_eta);
                rhs.push(wxi.re);
                rhs.push(weta.re);
            }
            let sol = linalg::f64_lstsq(&rows, &rhs)?;
            let mut exact = Vec::with_capacity(n);
            for v in sol {
                exact.push(Scalar::from_rational(rationalize(v, 100_000, 1e-5)?));
            }
            return Some(exact);
        }
    }
    None
}

/// The ranks r_k of the prolonged coefficient matrix, k = 0..n_max. Each rank
/// is the maximum over seeded random jet points of the numeric (or exact,
/// when every entry evaluates rationally) rank of the first k+2 columns.
pub fn rank_sequence(r: &Realization, n_max: u32, policy: &ZeroPolicy) -> Result<Vec<usize>> {
    let policy = r.policy_with_params(policy);
    let rows_expr: Vec<Vec<Expr>> = r
        .basis
        .iter()
        .map(|f| prolong(f, n_max).coefficient_row())
        .collect();
    let exact_ok = rows_expr.iter().flatten().all(|e| e.is_rational_form());
    let mut rng = policy.reseeded(0x4a7c).rng();
    let nsamples = 5;
    let mut best = vec![0usize; (n_max + 1) as usize];
    let mut successes = 0u32;
    let mut attempts = 0u32;
    while successes < nsamples && attempts < 40 {
        attempts += 1;
        let mut symbols = std::collections::BTreeSet::new();
        for row in &rows_expr {
            for e in row {
                e.collect_symbols(&mut symbols);
            }
        }
        if exact_ok {
            let mut pt: BTreeMap<Symbol, Scalar> = BTreeMap::new();
            let mut ok = true;
            for s in &symbols {
                let v = match s {
                    Symbol::Param(name) => match policy.constraint_for(name).sample(&mut rng) {
                        Ok(r) => Scalar::from_rational(r),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    },
                    _ => Scalar::from_rational(sample_band_rational(&mut rng)),
                };
                pt.insert(s.clone(), v);
            }
            if !ok {
                continue;
            }
            let mut mat: Vec<Vec<Scalar>> = Vec::with_capacity(rows_expr.len());
            for row in &rows_expr {
                let mut vals = Vec::with_capacity(row.len());
                for e in row {
                    match eval_exact(e, &pt) {
                        Ok(v) => vals.push(v),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
                mat.push(vals);
            }
            if !ok {
                continue;
            }
            let mut prev = 0usize;
            for k in 0..=n_max as usize {
                let cols = k + 2;
                let sub: Vec<Vec<Scalar>> = mat.iter().map(|row| row[..cols].to_vec()).collect();
                let rk = linalg::exact_rank(&sub).max(prev);
                prev = rk;
                if rk > best[k] {
                    best[k] = rk;
                }
            }
        } else {
            let mut pt = crate::expr::eval::Bindings::new();
            let mut ok = true;
            for s in &symbols {
                let v = match s {
                    Symbol::Param(name) => match policy.constraint_for(name).sample(&mut rng) {
                        Ok(r) => Complex64::new(crate::scalar::rational_to_f64(&r), 0.0),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    },
                    _ => Complex64::new(sample_band_f64(&mut rng), 0.0),
                };
                pt.insert(s.clone(), v);
            }
            if !ok {
                continue;
            }
            let mut mat: Vec<Vec<f64>> = Vec::with_capacity(rows_expr.len());
            for row in &rows_expr {
                let mut vals = Vec::with_capacity(row.len());
                for e in row {
                    match eval(e, &pt) {
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
                mat.push(vals);
            }
            if !ok {
                continue;
            }
            // The numeric rank of a column prefix can dip when a dominant new
            // column moves the threshold; the true prefix rank never does.
            let mut prev = 0usize;
            for k in 0..=n_max as usize {
                let cols = k + 2;
                let sub: Vec<Vec<f64>> = mat.iter().map(|row| row[..cols].to_vec()).collect();
                let rk = linalg::f64_rank(&sub, 1e-8).max(prev);
                prev = rk;
                if rk > best[k] {
                    best[k] = rk;
                }
            }
        }
        successes += 1;
    }
    if successes == 0 {
        return Err(Error::SingularSample(attempts));
    }
    debug_assert!(best.windows(2).all(|w| w[0] <= w[1]));
    Ok(best)
}

/// The stabilization order: the least k with r_k = dim. The search is bounded
/// by dim + 2, past the theoretical bound, so a degenerate basis surfaces as
/// an error rather than a loop.
pub fn nu(r: &Realization, policy: &ZeroPolicy) -> Result<u32> {
    let dim = r.dim();
    let n_max = dim as u32 + 2;
    let ranks = rank_sequence(r, n_max, policy)?;
    for (k, &rk) in ranks.iter().enumerate() {
        if rk == dim {
            let k = k as u32;
            debug_assert!(k as usize + 1 >= ranks.len() || ranks[k as usize + 1] == dim);
            return Ok(k);
        }
    }
    Err(Error::Stabilization { dim, order: n_max })
}

/// Number of functionally independent differential invariants of order <= n:
/// `d_n = n + 2 - r_n`, clamped at zero if sampling underestimates the rank.
pub fn invariant_count(r: &Realization, n: u32, policy: &ZeroPolicy) -> Result<usize> {
    let ranks = rank_sequence(r, n, policy)?;
    let rn = ranks[n as usize];
    Ok((n as usize + 2).saturating_sub(rn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{mul, pow_i};

    fn field(xi: Expr, eta: Expr) -> VectorField {
        VectorField::new(xi, eta).unwrap()
    }

    fn dx() -> VectorField {
        field(Expr::one(), Expr::zero())
    }

    fn dy() -> VectorField {
        field(Expr::zero(), Expr::one())
    }

    #[test]
    fn bracket_basics() {
        // [d/dx, x d/dx] = d/dx
        let v = field(Expr::x(), Expr::zero());
        assert_eq!(lie_bracket(&dx(), &v), dx());
        // [d/dy, y d/dx] = d/dx
        let w = field(Expr::y(), Expr::zero());
        assert_eq!(lie_bracket(&dy(), &w), dx());
    }

    #[test]
    fn bracket_on_catalog_17() {
        // [e1, e3] = (b-x) d/dy = b e1 - e2 for
        // e1 = d/dy, e3 = -(1+x^2) d/dx + (b-x) y d/dy.
        let b = Expr::param("b");
        let e3 = field(
            -(Expr::one() + pow_i(Expr::x(), 2)),
            mul(vec![b.clone() - Expr::x(), Expr::y()]),
        );
        let got = lie_bracket(&dy(), &e3);
        assert!(got.xi.is_zero_const());
        assert_eq!(got.eta, b - Expr::x());
    }

    #[test]
    fn closure_of_example_algebra() {
        // <d/dx, d/dy, y d/dx, (1+b) x d/dx + y d/dy> at b = 1/3:
        // [e2,e3] = e1, [e1,e4] = (1+b) e1, [e2,e4] = e2, [e3,e4] = b e3.
        let b = Scalar::from_ratio(1, 3);
        let one_plus_b = Expr::constant(&Scalar::one() + &b);
        let r = Realization::new(vec![
            dx(),
            dy(),
            field(Expr::y(), Expr::zero()),
            field(mul(vec![one_plus_b, Expr::x()]), Expr::y()),
        ]);
        let sc = closure_check(&r, &ZeroPolicy::default()).unwrap();
        assert!(sc.antisymmetry_ok());
        assert!(sc.jacobi_ok());
        let mut want = StructureConstants::zero(4);
        want.c[1][2][0] = Scalar::one(); // [e2,e3] = e1
        want.c[2][1][0] = Scalar::from_int(-1);
        want.c[0][3][0] = &Scalar::one() + &b; // [e1,e4] = (1+b) e1
        want.c[3][0][0] = -&(&Scalar::one() + &b);
        want.c[1][3][1] = Scalar::one(); // [e2,e4] = e2
        want.c[3][1][1] = Scalar::from_int(-1);
        want.c[2][3][2] = b.clone(); // [e3,e4] = b e3
        want.c[3][2][2] = -&b;
        assert_eq!(sc, want);
    }

    #[test]
    fn abelian_pair_has_zero_table() {
        let r = Realization::new(vec![dx(), field(Expr::y(), Expr::zero())]);
        let sc = closure_check(&r, &ZeroPolicy::default()).unwrap();
        assert_eq!(sc, StructureConstants::zero(2));
    }

    #[test]
    fn non_closed_pair_is_detected() {
        // [d/dx, x^2 d/dy] = 2x d/dy is outside the span.
        let r = Realization::new(vec![dx(), field(Expr::zero(), pow_i(Expr::x(), 2))]);
        let err = closure_check(&r, &ZeroPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::NotClosed { i: 1, j: 2 }));
    }

    #[test]
    fn rank_sequences_and_nu() {
        let policy = ZeroPolicy::default();
        // <d/dx>: r_0 = 1, nu = 0.
        let r1 = Realization::new(vec![dx()]);
        assert_eq!(rank_sequence(&r1, 0, &policy).unwrap(), vec![1]);
        assert_eq!(nu(&r1, &policy).unwrap(), 0);
        // N=9 <d/dy, d/dx, x d/dy>: ranks 2, 3.
        let r9 = Realization::new(vec![dy(), dx(), field(Expr::zero(), Expr::x())]);
        assert_eq!(rank_sequence(&r9, 1, &policy).unwrap(), vec![2, 3]);
        assert_eq!(nu(&r9, &policy).unwrap(), 1);
        // N=31 <d/dy, -x d/dy, x^2/2 d/dy, d/dx>: nu = 2.
        let r31 = Realization::new(vec![
            dy(),
            field(Expr::zero(), -Expr::x()),
            field(Expr::zero(), mul(vec![Expr::ratio(1, 2), pow_i(Expr::x(), 2)])),
            dx(),
        ]);
        assert_eq!(nu(&r31, &policy).unwrap(), 2);
    }

    #[test]
    fn invariant_counts_for_17() {
        // N=17 realization (worked example): d_1 = 0, d_2 = 1.
        let b = Expr::param("b");
        let r = Realization {
            basis: vec![
                dy(),
                field(Expr::zero(), Expr::x()),
                field(
                    -(Expr::one() + pow_i(Expr::x(), 2)),
                    mul(vec![b - Expr::x(), Expr::y()]),
                ),
            ],
            params: vec![(Arc::from("b"), crate::expr::zero::parse_constraint(">= 0").unwrap())],
            label: None,
        };
        let policy = ZeroPolicy::default();
        assert_eq!(rank_sequence(&r, 1, &policy).unwrap(), vec![2, 3]);
        assert_eq!(nu(&r, &policy).unwrap(), 1);
        assert_eq!(invariant_count(&r, 0, &policy).unwrap(), 0);
        assert_eq!(invariant_count(&r, 1, &policy).unwrap(), 0);
        assert_eq!(invariant_count(&r, 2, &policy).unwrap(), 1);
        // <d/dx>: d_0 = 1 (the invariant y).
        let r1 = Realization::new(vec![dx()]);
        assert_eq!(invariant_count(&r1, 0, &policy).unwrap(), 1);
    }
}
