//! Randomized zero-testing: the identity oracle behind every "vanishes
//! identically" claim in the engine.
//!
//! The structural fast path recognizes canonical constants. Everything else is
//! decided by evaluation at seeded random complex points, with the tolerance
//! scaled by the largest intermediate magnitude so catastrophic cancellation
//! loosens rather than breaks the test.

use super::eval::{eval_tracked, Bindings};
use super::node::{Expr, Node, Symbol};
use crate::error::{Error, Result};
use crate::scalar::{rationalize, Scalar};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::collections::BTreeMap;

/// A one-parameter constraint from the catalog's mini-grammar, e.g.
/// `>= 0`, `abs<=1 ne 1`, `in [-1,1)`. Conjunctions are lists of atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintAtom {
    Free,
    Ge(BigRational),
    Gt(BigRational),
    Le(BigRational),
    Lt(BigRational),
    Ne(BigRational),
    AbsLe(BigRational),
    AbsLt(BigRational),
    Interval {
        lo: BigRational,
        lo_open: bool,
        hi: BigRational,
        hi_open: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Constraint(pub Vec<ConstraintAtom>);

impl Constraint {
    pub fn free() -> Constraint {
        Constraint(vec![ConstraintAtom::Free])
    }

    pub fn satisfied(&self, v: &BigRational) -> bool {
        self.0.iter().all(|a| match a {
            ConstraintAtom::Free => true,
            ConstraintAtom::Ge(c) => v >= c,
            ConstraintAtom::Gt(c) => v > c,
            ConstraintAtom::Le(c) => v <= c,
            ConstraintAtom::Lt(c) => v < c,
            ConstraintAtom::Ne(c) => v != c,
            ConstraintAtom::AbsLe(c) => v.abs() <= *c,
            ConstraintAtom::AbsLt(c) => v.abs() < *c,
            ConstraintAtom::Interval { lo, lo_open, hi, hi_open } => {
                (if *lo_open { v > lo } else { v >= lo }) && (if *hi_open { v < hi } else { v <= hi })
            }
        })
    }

    /// Draws a rational satisfying the constraint, re-sampling on violation.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<BigRational> {
        // Base proposal band, possibly shifted to sit inside one-sided bounds.
        for _ in 0..500 {
            let mag = BigRational::new((rng.gen_range(5..120) as i64).into(), 64.into());
            let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut cand = &mag * BigRational::from_integer(sign.into());
            for a in &self.0 {
                match a {
                    ConstraintAtom::Ge(c) | ConstraintAtom::Gt(c) => {
                        if &cand < c {
                            cand = c + mag.clone();
                        }
                    }
                    ConstraintAtom::Le(c) | ConstraintAtom::Lt(c) => {
                        if &cand > c {
                            cand = c - mag.clone();
                        }
                    }
                    ConstraintAtom::Interval { lo, hi, .. } => {
                        if &cand < lo || &cand > hi {
                            let span = hi - lo;
                            let frac = BigRational::new((rng.gen_range(3..62) as i64).into(), 64.into());
                            cand = lo + span * frac;
                        }
                    }
                    ConstraintAtom::AbsLe(c) | ConstraintAtom::AbsLt(c) => {
                        if cand.abs() > *c {
                            let frac = BigRational::new((rng.gen_range(3..62) as i64).into(), 64.into());
                            cand = c * frac * BigRational::from_integer(sign.into());
                        }
                    }
                    _ => {}
                }
            }
            if self.satisfied(&cand) {
                return Ok(cand);
            }
        }
        Err(Error::Constraint(format!("could not sample a value for {self:?}")))
    }
}

/// Sampling and tolerance policy for the probabilistic zero-test.
#[derive(Debug, Clone)]
pub struct ZeroPolicy {
    pub trials: u32,
    pub tol: f64,
    pub seed: u64,
    /// Coordinates are drawn from +/-[band_lo, band_hi].
    pub band_lo: f64,
    pub band_hi: f64,
    /// Magnitude of the imaginary jitter added to coordinates to dodge branch
    /// points and poles on the real axis.
    pub jitter: f64,
    /// When false, coordinates are drawn from the positive band only (used by
    /// transformation round-trip checks whose inverses involve even roots).
    pub allow_negative: bool,
    /// Constraint sampler for free parameters encountered in expressions.
    pub params: BTreeMap<std::sync::Arc<str>, Constraint>,
}

impl Default for ZeroPolicy {
    fn default() -> Self {
        ZeroPolicy {
            trials: 20,
            tol: 1e-9,
            seed: 42,
            band_lo: 0.1,
            band_hi: 2.0,
            jitter: 1e-3,
            allow_negative: true,
            params: BTreeMap::new(),
        }
    }
}

impl ZeroPolicy {
    pub fn with_seed(seed: u64) -> Self {
        ZeroPolicy { seed, ..Default::default() }
    }

    pub fn positive_only(&self) -> Self {
        ZeroPolicy { allow_negative: false, ..self.clone() }
    }

    pub fn reseeded(&self, salt: u64) -> Self {
        ZeroPolicy { seed: self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt), ..self.clone() }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn constraint_for(&self, name: &str) -> Constraint {
        self.params.get(name).cloned().unwrap_or_else(Constraint::free)
    }

    fn sample_coordinate(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        let mag = rng.gen_range(self.band_lo..self.band_hi);
        let sign = if self.allow_negative && rng.gen_bool(0.5) { -1.0 } else { 1.0 };
        let jitter = self.jitter * rng.gen_range(0.5..1.5);
        Complex64::new(sign * mag, jitter)
    }

    /// Draws a full evaluation point for the symbols of an expression:
    /// coordinates from the band with imaginary jitter, parameters as exact
    /// rationals inside their declared constraints.
    pub fn sample_point(&self, symbols: &std::collections::BTreeSet<Symbol>, rng: &mut ChaCha8Rng) -> Result<Bindings> {
        let mut pt = Bindings::new();
        for s in symbols {
            let v = match s {
                Symbol::Param(name) => {
                    let c = self.constraint_for(name);
                    let r = c.sample(rng)?;
                    Complex64::new(crate::scalar::rational_to_f64(&r), 0.0)
                }
                _ => self.sample_coordinate(rng),
            };
            pt.insert(s.clone(), v);
        }
        Ok(pt)
    }
}

/// Probabilistic zero-test. Structural constants decide immediately; otherwise
/// the expression must vanish within tolerance at every sampled point.
/// Deterministic given the policy seed.
pub fn is_zero(e: &Expr, policy: &ZeroPolicy) -> Result<bool> {
    let s = e.simplify();
    if let Node::Const(c) = s.node() {
        return Ok(c.is_zero());
    }
    let symbols = s.symbols();
    let mut rng = policy.rng();
    let mut domain_failures = 0u32;
    let mut decided = 0u32;
    for _ in 0..policy.trials {
        let pt = match policy.sample_point(&symbols, &mut rng) {
            Ok(p) => p,
            Err(_) => {
                domain_failures += 1;
                continue;
            }
        };
        match eval_tracked(&s, &pt) {
            Ok((v, max_mag)) => {
                decided += 1;
                if v.norm() > policy.tol * (1.0 + max_mag) {
                    return Ok(false);
                }
            }
            Err(Error::Domain(_)) | Err(Error::SingularSample(_)) => domain_failures += 1,
            Err(other) => return Err(other),
        }
    }
    if domain_failures > policy.trials / 2 || decided == 0 {
        return Err(Error::Inconclusive { failed: domain_failures, trials: policy.trials });
    }
    Ok(true)
}

/// Looks for a constant `c` with `a = c*b` identically. The candidate is read
/// off the ratio at a generic point, rationalized, and then confirmed by the
/// zero-test; `None` when the ratio is not constant.
pub fn equal_up_to_constant(a: &Expr, b: &Expr, policy: &ZeroPolicy) -> Result<Option<Scalar>> {
    if is_zero(a, policy)? {
        return Ok(Some(Scalar::zero()));
    }
    let mut symbols = a.symbols();
    symbols.extend(b.symbols());
    let mut rng = policy.reseeded(0x7a71).rng();
    let mut estimates: Vec<Complex64> = Vec::new();
    for _ in 0..policy.trials.max(8) {
        let pt = match policy.sample_point(&symbols, &mut rng) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let (Ok((av, _)), Ok((bv, bmag))) = (eval_tracked(a, &pt), eval_tracked(b, &pt)) else {
            continue;
        };
        if bv.norm() <= 1e-8 * (1.0 + bmag) {
            continue;
        }
        estimates.push(av / bv);
        if estimates.len() >= 2 {
            break;
        }
    }
    let [first, second] = estimates.as_slice() else {
        return Err(Error::Inconclusive { failed: policy.trials, trials: policy.trials });
    };
    if (first - second).norm() > 1e-6 * (1.0 + first.norm()) {
        return Ok(None);
    }
    let Some(re) = rationalize(first.re, 1_000_000, 1e-5) else {
        return Ok(None);
    };
    let Some(im) = rationalize(first.im, 1_000_000, 1e-5) else {
        return Ok(None);
    };
    let c = Scalar::new(re, im);
    if c.is_zero() {
        return Ok(None);
    }
    let residual = a.clone() - crate::expr::build::mul(vec![Expr::constant(c.clone()), b.clone()]);
    if is_zero(&residual, policy)? {
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

/// Parses the constraint mini-grammar: whitespace-separated atoms,
/// each one of `free`, `>= r`, `> r`, `<= r`, `< r`, `ne r`, `abs<=r`,
/// `abs<r`, or an interval like `in (r1,r2]`.
pub fn parse_constraint(text: &str) -> Result<Constraint> {
    let mut atoms = Vec::new();
    let toks: Vec<&str> = text.split_whitespace().collect();
    let mut i = 0;
    let err = |msg: &str| Error::Invalid(format!("bad constraint `{text}`: {msg}"));
    while i < toks.len() {
        let t = toks[i];
        let need_value = |i: usize| -> Result<BigRational> {
            toks.get(i)
                .ok_or_else(|| err("missing bound"))
                .and_then(|s| parse_rational(s))
        };
        match t {
            "free" => {
                atoms.push(ConstraintAtom::Free);
                i += 1;
            }
            ">=" => {
                atoms.push(ConstraintAtom::Ge(need_value(i + 1)?));
                i += 2;
            }
            ">" => {
                atoms.push(ConstraintAtom::Gt(need_value(i + 1)?));
                i += 2;
            }
            "<=" => {
                atoms.push(ConstraintAtom::Le(need_value(i + 1)?));
                i += 2;
            }
            "<" => {
                atoms.push(ConstraintAtom::Lt(need_value(i + 1)?));
                i += 2;
            }
            "ne" => {
                atoms.push(ConstraintAtom::Ne(need_value(i + 1)?));
                i += 2;
            }
            "in" => {
                let spec = toks.get(i + 1).ok_or_else(|| err("missing interval"))?;
                atoms.push(parse_interval(spec).ok_or_else(|| err("bad interval"))?);
                i += 2;
            }
            other => {
                if let Some(rest) = other.strip_prefix("abs<=") {
                    atoms.push(ConstraintAtom::AbsLe(parse_rational(rest)?));
                } else if let Some(rest) = other.strip_prefix("abs<") {
                    atoms.push(ConstraintAtom::AbsLt(parse_rational(rest)?));
                } else {
                    return Err(err(&format!("unknown atom `{other}`")));
                }
                i += 1;
            }
        }
    }
    if atoms.is_empty() {
        atoms.push(ConstraintAtom::Free);
    }
    Ok(Constraint(atoms))
}

fn parse_interval(spec: &str) -> Option<ConstraintAtom> {
    let lo_open = spec.starts_with('(');
    let hi_open = spec.ends_with(')');
    if !(spec.starts_with('(') || spec.starts_with('[')) || !(spec.ends_with(')') || spec.ends_with(']')) {
        return None;
    }
    let inner = &spec[1..spec.len() - 1];
    let (lo, hi) = inner.split_once(',')?;
    Some(ConstraintAtom::Interval {
        lo: parse_rational(lo).ok()?,
        lo_open,
        hi: parse_rational(hi).ok()?,
        hi_open,
    })
}

/// Parses `p`, `-p`, `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("bad rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(BigRational::new(n.into(), d.into()))
    } else {
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build::{add, fun, mul, pow_i};
    use crate::expr::node::FunKind;

    #[test]
    fn pythagorean_identity_via_numeric_path() {
        // sin^2 x + cos^2 x - 1 has no structural simplification here.
        let e = add(vec![
            pow_i(fun(FunKind::Sin, Expr::x()), 2),
            pow_i(fun(FunKind::Cos, Expr::x()), 2),
            Expr::int(-1),
        ]);
        assert!(matches!(e.node(), Node::Sum(_)));
        assert!(is_zero(&e, &ZeroPolicy::default()).unwrap());
    }

    #[test]
    fn structural_zero_never_reports_nonzero() {
        let e = mul(vec![Expr::jet(2), Expr::x()]) - mul(vec![Expr::x(), Expr::jet(2)]);
        assert!(e.is_zero_const());
        assert!(is_zero(&e, &ZeroPolicy::default()).unwrap());
    }

    #[test]
    fn distinguishes_nonzero() {
        let e = Expr::jet(2) - Expr::jet(1);
        assert!(!is_zero(&e, &ZeroPolicy::default()).unwrap());
    }

    #[test]
    fn constant_factor_recovery() {
        let policy = ZeroPolicy::default();
        let base = Expr::one() + pow_i(Expr::x(), 2);
        // (2*(1+x^2), -(1+x^2)) -> -2
        let c = equal_up_to_constant(
            &mul(vec![Expr::int(2), base.clone()]),
            &-base.clone(),
            &policy,
        )
        .unwrap();
        assert_eq!(c, Some(Scalar::from_int(-2)));
        // (-exp(-2bx), exp(-2bx)) -> -1
        let arg = mul(vec![Expr::int(-2), Expr::param("b"), Expr::x()]);
        let c = equal_up_to_constant(&-fun(FunKind::Exp, arg.clone()), &fun(FunKind::Exp, arg), &policy).unwrap();
        assert_eq!(c, Some(Scalar::from_int(-1)));
        // (y'', x*y'') -> no constant
        let c = equal_up_to_constant(&Expr::jet(2), &mul(vec![Expr::x(), Expr::jet(2)]), &policy).unwrap();
        assert_eq!(c, None);
    }

    #[test]
    fn constraint_sampling_respects_bounds() {
        let c = parse_constraint("abs<=1 ne 1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let v = c.sample(&mut rng).unwrap();
            assert!(c.satisfied(&v), "sample {v} violates constraint");
        }
        let c = parse_constraint(">= 0").unwrap();
        for _ in 0..50 {
            let v = c.sample(&mut rng).unwrap();
            assert!(!v.is_negative());
        }
        let c = parse_constraint("in [-1,1) ne 0").unwrap();
        for _ in 0..50 {
            let v = c.sample(&mut rng).unwrap();
            assert!(c.satisfied(&v));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let e = pow_i(fun(FunKind::Sin, Expr::x()), 2) + pow_i(fun(FunKind::Cos, Expr::x()), 2) - Expr::one();
        let p = ZeroPolicy::with_seed(777);
        let a = is_zero(&e, &p).unwrap();
        let b = is_zero(&e, &p).unwrap();
        assert_eq!(a, b);
    }
}
