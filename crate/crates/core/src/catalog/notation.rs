//! Constructors for the catalog's notation block: the S, Q, B, P, R, U, V
//! polynomials, total-derivative Wronskians and constant-coefficient forms.

use crate::error::{Error, Result};
use crate::expr::zero::{is_zero, ZeroPolicy};
use crate::expr::{add, mul, pow_i, Expr, Symbol};
use crate::invariants::sym_det;
use crate::jet::total_derivative_n;
use crate::linalg;
use crate::scalar::{rationalize, Scalar};
use num_complex::Complex64;

fn jet(k: u32) -> Expr {
    Expr::jet(k)
}

fn int(n: i64) -> Expr {
    Expr::int(n)
}

/// k-th total derivative.
pub fn dd(f: &Expr, k: u32) -> Expr {
    total_derivative_n(f, k)
}

/// Logarithmic total derivative `D_x f / f`.
pub fn dlog(f: &Expr) -> Expr {
    mul(vec![dd(f, 1), pow_i(f.clone(), -1)])
}

/// `S_{k+3}` addressed by its subscript (`s(5)` is the k = 2 instance).
pub fn s(sub: u32) -> Result<Expr> {
    if sub < 3 {
        return Err(Error::Invalid(format!("S_{sub} is not defined")));
    }
    let k = sub - 3;
    let k1 = (k + 1) as i64;
    let k2 = (k + 2) as i64;
    let k3 = (k + 3) as i64;
    Ok(add(vec![
        mul(vec![int(k1 * k1), pow_i(jet(k), 2), jet(k + 3)]),
        mul(vec![int(-3 * k1 * k3), jet(k), jet(k + 1), jet(k + 2)]),
        mul(vec![int(2 * k2 * k3), pow_i(jet(k + 1), 3)]),
    ]))
}

/// `Q_{k+2}` addressed by its subscript (`q(3)` is the k = 1 instance).
pub fn q(sub: u32) -> Result<Expr> {
    if sub < 2 {
        return Err(Error::Invalid(format!("Q_{sub} is not defined")));
    }
    let k = sub - 2;
    let k1 = (k + 1) as i64;
    let k2 = (k + 2) as i64;
    Ok(add(vec![
        mul(vec![int(k1), jet(k), jet(k + 2)]),
        mul(vec![int(-k2), pow_i(jet(k + 1), 2)]),
    ]))
}

pub fn b0() -> Expr {
    add(vec![Expr::one(), pow_i(Expr::x(), 2), pow_i(Expr::y(), 2)])
}

pub fn b1() -> Expr {
    add(vec![Expr::one(), pow_i(jet(1), 2)])
}

/// `Qt3 = y''' B1 - 3 y' (y'')^2`.
pub fn qt3() -> Expr {
    mul(vec![jet(3), b1()]) - mul(vec![int(3), jet(1), pow_i(jet(2), 2)])
}

/// `P_{i,j}(f, g) = f^(i) g^(j) - f^(j) g^(i)` with total derivatives, so the
/// arguments may carry jet variables (`P(2,3; xi1, y)` and friends).
pub fn p(i: u32, j: u32, f: &Expr, g: &Expr) -> Expr {
    mul(vec![dd(f, i), dd(g, j)]) - mul(vec![dd(f, j), dd(g, i)])
}

/// `R4 = 3 y'' y^(4) - 5 (y''')^2`.
pub fn r4() -> Expr {
    mul(vec![int(3), jet(2), jet(4)]) - mul(vec![int(5), pow_i(jet(3), 2)])
}

/// Fifth-order invariant core of the projective pair:
/// `U5 = (y')^2 (Q3 Dx^2 Q3 - 5/4 (Dx Q3)^2) + y' y'' Q3 Dx Q3
///       - (2 y' y''' - (y'')^2) Q3^2`.
pub fn u5() -> Expr {
    let q3 = q(3).unwrap();
    let dq = dd(&q3, 1);
    let ddq = dd(&q3, 2);
    add(vec![
        mul(vec![
            pow_i(jet(1), 2),
            add(vec![
                mul(vec![q3.clone(), ddq]),
                mul(vec![Expr::ratio(-5, 4), pow_i(dq.clone(), 2)]),
            ]),
        ]),
        mul(vec![jet(1), jet(2), q3.clone(), dq]),
        mul(vec![
            int(-1),
            mul(vec![int(2), jet(1), jet(3)]) - pow_i(jet(2), 2),
            pow_i(q3, 2),
        ]),
    ])
}

/// The expanded fifth-order core of the conformal algebra.
pub fn ut5() -> Expr {
    let b1 = b1();
    add(vec![
        mul(vec![int(4), jet(5), pow_i(b1.clone(), 3), qt3()]),
        mul(vec![
            int(10),
            jet(4),
            jet(2),
            pow_i(b1.clone(), 3),
            add(vec![
                mul(vec![int(4), jet(3), jet(1)]),
                mul(vec![int(3), pow_i(jet(2), 2)]),
            ]),
        ]),
        mul(vec![int(-5), pow_i(jet(4), 2), pow_i(b1.clone(), 4)]),
        mul(vec![
            int(40),
            pow_i(jet(3), 2),
            pow_i(jet(2), 2),
            pow_i(jet(1), 2) - int(2),
            pow_i(b1.clone(), 2),
        ]),
        mul(vec![int(-40), pow_i(jet(3), 3), jet(1), pow_i(b1.clone(), 3)]),
        // This term carries B1 to the first power: the numerator was refit
        // against the invariance conditions and only that exponent closes the
        // identity.
        mul(vec![
            int(-180),
            jet(3),
            jet(1),
            pow_i(jet(2), 4),
            pow_i(jet(1), 2) - int(1),
            b1,
        ]),
        mul(vec![
            int(-1),
            pow_i(jet(2), 6),
            add(vec![
                mul(vec![int(45), mul(vec![int(6), pow_i(jet(1), 2)]) + int(1)]),
                mul(vec![int(-135), pow_i(jet(1), 4)]),
            ]),
        ]),
    ])
}

/// Seventh-order core of the full projective algebra:
/// `V7 = (y'')^2 (S5 Dx^2 S5 - 7/6 (Dx S5)^2) + y'' y''' S5 Dx S5
///       - 1/2 (9 y'' y^(4) - 7 (y''')^2) S5^2`.
pub fn v7() -> Expr {
    let s5 = s(5).unwrap();
    let ds = dd(&s5, 1);
    let dds = dd(&s5, 2);
    add(vec![
        mul(vec![
            pow_i(jet(2), 2),
            add(vec![
                mul(vec![s5.clone(), dds]),
                mul(vec![Expr::ratio(-7, 6), pow_i(ds.clone(), 2)]),
            ]),
        ]),
        mul(vec![jet(2), jet(3), s5.clone(), ds]),
        mul(vec![
            Expr::ratio(-1, 2),
            mul(vec![int(9), jet(2), jet(4)]) - mul(vec![int(7), pow_i(jet(3), 2)]),
            pow_i(s5, 2),
        ]),
    ])
}

/// Total-derivative Wronskian: row j holds the j-th total derivatives of the
/// arguments, which may be jet expressions (`W(y'', ...)`).
pub fn wronskian(fs: &[Expr]) -> Result<Expr> {
    if fs.is_empty() {
        return Err(Error::Invalid("W of no functions".into()));
    }
    let n = fs.len();
    let rows: Vec<Vec<Expr>> = (0..n)
        .map(|j| fs.iter().map(|f| dd(f, j as u32)).collect())
        .collect();
    Ok(sym_det(&rows))
}

/// Fixed internal policy for coefficient recovery; independent of the run
/// seed so catalog data is stable.
fn recovery_policy() -> ZeroPolicy {
    ZeroPolicy::with_seed(0x5eed_0001)
}

/// The constant-coefficient form `K_r = y^(r) + c_1 y^(r-1) + ... + c_r y`
/// whose coefficients annihilate every supplied eta. Coefficients are
/// recovered numerically from the span of the etas and confirmed by the
/// zero-test on each residual.
pub fn k_form(etas: &[Expr]) -> Result<(Expr, Vec<Scalar>)> {
    let r = etas.len();
    if r == 0 {
        return Err(Error::Invalid("K of no functions".into()));
    }
    for e in etas {
        if e.jet_order() > 0 || e.contains_symbol(&Symbol::Y) {
            return Err(Error::Invalid("K arguments must be functions of x".into()));
        }
    }
    let w = wronskian(etas)?;
    let policy = recovery_policy();
    if is_zero(&w, &policy)? {
        return Err(Error::Independence(
            "K arguments do not form a fundamental system".into(),
        ));
    }
    let derivs: Vec<Vec<Expr>> = etas
        .iter()
        .map(|e| (0..=r as u32).map(|k| dd(e, k)).collect())
        .collect();
    let mut rng = policy.rng();
    let mut coeffs: Option<Vec<Scalar>> = None;
    'attempt: for _ in 0..10 {
        let x0 = Complex64::new(rng.gen_range_band(), 0.0);
        let mut pt = crate::expr::eval::Bindings::new();
        pt.insert(Symbol::X, x0);
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(r);
        let mut rhs: Vec<f64> = Vec::with_capacity(r);
        for d in &derivs {
            let mut row = Vec::with_capacity(r);
            // columns are y^(r-1), ..., y^(0) coefficients c_1..c_r
            for k in (0..r).rev() {
                match crate::expr::eval::eval(&d[k], &pt) {
                    Ok(v) => row.push(v.re),
                    Err(_) => continue 'attempt,
                }
            }
            match crate::expr::eval::eval(&d[r], &pt) {
                Ok(v) => rhs.push(-v.re),
                Err(_) => continue 'attempt,
            }
            rows.push(row);
        }
        let Some(sol) = linalg::f64_lstsq(&rows, &rhs) else {
            continue;
        };
        let mut exact = Vec::with_capacity(r);
        for v in &sol {
            match rationalize(*v, 10_000, 1e-5) {
                Some(q) => exact.push(Scalar::from_rational(q)),
                None => continue 'attempt,
            }
        }
        coeffs = Some(exact);
        break;
    }
    let coeffs = coeffs.ok_or_else(|| Error::Independence("could not recover ODE coefficients".into()))?;
    // Confirm: each eta satisfies the recovered equation identically.
    for (i, d) in derivs.iter().enumerate() {
        let mut terms = vec![d[r].clone()];
        for (j, c) in coeffs.iter().enumerate() {
            terms.push(mul(vec![Expr::constant(c.clone()), d[r - 1 - j].clone()]));
        }
        if !is_zero(&add(terms), &policy)? {
            return Err(Error::Independence(format!(
                "eta_{} does not satisfy the recovered constant-coefficient equation",
                i + 1
            )));
        }
    }
    let mut terms = vec![jet(r as u32)];
    for (j, c) in coeffs.iter().enumerate() {
        terms.push(mul(vec![Expr::constant(c.clone()), jet((r - 1 - j) as u32)]));
    }
    Ok((add(terms), coeffs))
}

trait BandSample {
    fn gen_range_band(&mut self) -> f64;
}

impl BandSample for rand_chacha::ChaCha8Rng {
    fn gen_range_band(&mut self) -> f64 {
        use rand::Rng;
        let mag = self.gen_range(0.2..1.5);
        if self.gen_bool(0.5) {
            -mag
        } else {
            mag
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::fun;
    use crate::expr::FunKind;

    #[test]
    fn vandermonde_wronskian() {
        // W(1, x, x^2) = 2
        let w = wronskian(&[Expr::one(), Expr::x(), pow_i(Expr::x(), 2)]).unwrap();
        assert_eq!(w, Expr::int(2));
    }

    #[test]
    fn q2_matches_definition() {
        // Q_2 = y y'' - 2 (y')^2
        let want = mul(vec![Expr::y(), Expr::jet(2)]) - mul(vec![Expr::int(2), pow_i(Expr::jet(1), 2)]);
        assert_eq!(q(2).unwrap(), want);
    }

    #[test]
    fn s5_matches_definition() {
        // S_5 (k=2): 9 (y'')^2 y^(5) - 45 y'' y''' y^(4) + 40 (y''')^3
        let want = add(vec![
            mul(vec![Expr::int(9), pow_i(Expr::jet(2), 2), Expr::jet(5)]),
            mul(vec![Expr::int(-45), Expr::jet(2), Expr::jet(3), Expr::jet(4)]),
            mul(vec![Expr::int(40), pow_i(Expr::jet(3), 3)]),
        ]);
        assert_eq!(s(5).unwrap(), want);
        assert_eq!(s(5).unwrap().jet_order(), 5);
    }

    #[test]
    fn k_of_exponentials() {
        // K_2(e^x, e^-x): characteristic polynomial l^2 - 1, so y'' - y.
        let e1 = fun(FunKind::Exp, Expr::x());
        let e2 = fun(FunKind::Exp, -Expr::x());
        let (k, c) = k_form(&[e1, e2]).unwrap();
        assert_eq!(k, Expr::jet(2) - Expr::y());
        assert_eq!(c, vec![Scalar::zero(), Scalar::from_int(-1)]);
    }

    #[test]
    fn k_rejects_dependent_functions() {
        let e1 = fun(FunKind::Exp, Expr::x());
        let two = mul(vec![Expr::int(2), e1.clone()]);
        assert!(matches!(k_form(&[e1, two]), Err(Error::Independence(_))));
    }
}
