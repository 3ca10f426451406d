//! Point transformations and basis changes: pushforward of vector fields and
//! the catalog's real-to-complex reductions.

use crate::error::{Error, Result};
use crate::expr::zero::{is_zero, ZeroPolicy};
use crate::expr::{mul, Expr, Symbol};
use crate::jet::VectorField;
use crate::lie::{closure_check, Realization, StructureConstants};
use crate::linalg;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Tilde coordinates of the target chart, used inside stored inverses.
pub fn xt() -> Symbol {
    Symbol::param("xt")
}

pub fn yt() -> Symbol {
    Symbol::param("yt")
}

/// An invertible point transformation with a caller-supplied inverse.
/// `forward` is written in (x, y); `inverse` in the tilde coordinates
/// (xt, yt). The round trip is confirmed at construction.
#[derive(Debug, Clone)]
pub struct PointTransformation {
    pub forward: (Expr, Expr),
    pub inverse: (Expr, Expr),
}

impl PointTransformation {
    /// Verifies `inverse(forward(x, y)) = (x, y)` up to the zero-test.
    /// Sampling is restricted to the positive band because several catalog
    /// inverses involve even roots and are local inverses on y > 0.
    pub fn new(forward: (Expr, Expr), inverse: (Expr, Expr), policy: &ZeroPolicy) -> Result<Self> {
        let t = PointTransformation { forward, inverse };
        let positive = policy.positive_only();
        let mut sub = BTreeMap::new();
        sub.insert(xt(), t.forward.0.clone());
        sub.insert(yt(), t.forward.1.clone());
        let back_x = t.inverse.0.substitute(&sub) - Expr::x();
        let back_y = t.inverse.1.substitute(&sub) - Expr::y();
        if !is_zero(&back_x, &positive)? || !is_zero(&back_y, &positive)? {
            return Err(Error::Invalid("transformation round trip failed".into()));
        }
        Ok(t)
    }
}

/// Pushforward of a planar field: the new coefficients are the field applied
/// to the new coordinates, re-expressed through the stored inverse. The
/// result is written in (x, y) again, now meaning the tilde chart.
pub fn pushforward(v: &VectorField, t: &PointTransformation) -> Result<VectorField> {
    let mut back = BTreeMap::new();
    back.insert(Symbol::X, t.inverse.0.clone());
    back.insert(Symbol::Y, t.inverse.1.clone());
    let mut rename = BTreeMap::new();
    rename.insert(xt(), Expr::x());
    rename.insert(yt(), Expr::y());
    let component = |target: &Expr| -> Result<Expr> {
        let applied = v.apply_planar(target);
        Ok(applied.substitute(&back).substitute(&rename))
    };
    let xi = component(&t.forward.0)?;
    let eta = component(&t.forward.1)?;
    VectorField::new(xi, eta)
}

/// A constant invertible basis change over the Gaussian rationals.
#[derive(Debug, Clone)]
pub struct BasisChange {
    pub matrix: Vec<Vec<Scalar>>,
}

impl BasisChange {
    pub fn new(matrix: Vec<Vec<Scalar>>) -> Result<BasisChange> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("basis change matrix must be square".into()));
        }
        if linalg::exact_det(&matrix).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(BasisChange { matrix })
    }

    pub fn identity(n: usize) -> BasisChange {
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Scalar::one();
        }
        BasisChange { matrix: m }
    }
}

/// `e~_i = sum_j m[i][j] e_j`; parameters carry over unchanged.
pub fn change_basis(r: &Realization, m: &BasisChange) -> Result<Realization> {
    if m.matrix.len() != r.dim() {
        return Err(Error::Invalid(format!(
            "basis change of size {} applied to a {}-dimensional realization",
            m.matrix.len(),
            r.dim()
        )));
    }
    let basis = m
        .matrix
        .iter()
        .map(|row| {
            let mut xi_terms = Vec::new();
            let mut eta_terms = Vec::new();
            for (c, f) in row.iter().zip(r.basis.iter()) {
                if c.is_zero() {
                    continue;
                }
                let ce = Expr::constant(c.clone());
                xi_terms.push(mul(vec![ce.clone(), f.xi.clone()]));
                eta_terms.push(mul(vec![ce, f.eta.clone()]));
            }
            VectorField::new(crate::expr::add(xi_terms), crate::expr::add(eta_terms))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Realization { basis, params: r.params.clone(), label: r.label.clone() })
}

/// One stored real-to-complex reduction: a variable map with its inverse and
/// a basis-change matrix over the Gaussian rationals.
#[derive(Debug, Clone)]
pub struct Table2Row {
    pub n1: String,
    pub source_label: String,
    pub n2: String,
    pub map: (Expr, Expr),
    pub inverse: (Expr, Expr),
    pub matrix: Vec<Vec<Scalar>>,
}

#[derive(Debug)]
pub struct Table2Outcome {
    pub before: Realization,
    pub after: Realization,
    pub constants_before: StructureConstants,
    pub constants_after: StructureConstants,
    /// Componentwise bracket-preservation residuals all vanished.
    pub brackets_preserved: bool,
}

/// Applies a stored row to its source realization: pushforward through the
/// variable map, then the recorded basis change. Verifies that the structure
/// constants transform by the conjugation law and that pushforward commutes
/// with the bracket, componentwise, under the zero-test.
pub fn apply_table2(row: &Table2Row, source: &Realization, policy: &ZeroPolicy) -> Result<Table2Outcome> {
    let t = PointTransformation::new(row.map.clone(), row.inverse.clone(), policy)?;
    let pushed: Vec<VectorField> = source
        .basis
        .iter()
        .map(|f| pushforward(f, &t))
        .collect::<Result<Vec<_>>>()?;
    let pushed_r = Realization { basis: pushed.clone(), params: source.params.clone(), label: None };
    let bc = BasisChange::new(row.matrix.clone())?;
    let mut after = change_basis(&pushed_r, &bc)?;
    after.label = Some(format!("table2:{}", row.n1));

    // Brackets commute with pushforward, componentwise.
    let mut brackets_preserved = true;
    for i in 0..source.dim() {
        for j in i + 1..source.dim() {
            let lhs = pushforward(&crate::lie::lie_bracket(&source.basis[i], &source.basis[j]), &t)?;
            let rhs = crate::lie::lie_bracket(&pushed[i], &pushed[j]);
            if !is_zero(&(lhs.xi.clone() - rhs.xi.clone()), policy)?
                || !is_zero(&(lhs.eta.clone() - rhs.eta.clone()), policy)?
            {
                brackets_preserved = false;
            }
        }
    }

    let constants_before = closure_check(source, policy)?;
    let constants_after = closure_check(&after, policy)?;
    let expected = constants_before.conjugate(&row.matrix)?;
    if constants_after != expected {
        return Err(Error::Invalid(format!(
            "structure constants of table2 row {} do not transform by the conjugation law",
            row.n1
        )));
    }
    after.check_independent(policy)?;
    Ok(Table2Outcome { before: source.clone(), after, constants_before, constants_after, brackets_preserved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::pow_i;

    fn field(xi: Expr, eta: Expr) -> VectorField {
        VectorField::new(xi, eta).unwrap()
    }

    fn inversion_y() -> PointTransformation {
        // (x, y) -> (x, 1/y), an involution.
        PointTransformation::new(
            (Expr::x(), pow_i(Expr::y(), -1)),
            (Expr::x(), pow_i(Expr::sym(yt()), -1)),
            &ZeroPolicy::default(),
        )
        .unwrap()
    }

    #[test]
    fn pushforward_chain_rule() {
        let t = inversion_y();
        // d/dx is untouched.
        let v = pushforward(&field(Expr::one(), Expr::zero()), &t).unwrap();
        assert_eq!(v.xi, Expr::one());
        assert!(v.eta.is_zero_const());
        // d/dy -> -yt^2 d/dyt.
        let v = pushforward(&field(Expr::zero(), Expr::one()), &t).unwrap();
        assert!(v.xi.is_zero_const());
        assert_eq!(v.eta, -pow_i(Expr::y(), 2));
        // y d/dy -> -yt d/dyt.
        let v = pushforward(&field(Expr::zero(), Expr::y()), &t).unwrap();
        assert_eq!(v.eta, -Expr::y());
    }

    #[test]
    fn roundtrip_guard_rejects_wrong_inverse() {
        let bad = PointTransformation::new(
            (Expr::x(), pow_i(Expr::y(), -1)),
            (Expr::x(), Expr::sym(yt())),
            &ZeroPolicy::default(),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn basis_change_identity_and_swap() {
        let r = Realization::new(vec![
            field(Expr::one(), Expr::zero()),
            field(Expr::zero(), Expr::one()),
        ]);
        let id = change_basis(&r, &BasisChange::identity(2)).unwrap();
        assert_eq!(id.basis[0], r.basis[0]);
        assert_eq!(id.basis[1], r.basis[1]);
        let swap = BasisChange::new(vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::one(), Scalar::zero()],
        ])
        .unwrap();
        let sw = change_basis(&r, &swap).unwrap();
        assert_eq!(sw.basis[0], r.basis[1]);
        assert_eq!(sw.basis[1], r.basis[0]);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = vec![
            vec![Scalar::one(), Scalar::one()],
            vec![Scalar::one(), Scalar::one()],
        ];
        assert!(matches!(BasisChange::new(m), Err(Error::SingularMatrix)));
    }

    #[test]
    fn pushforward_respects_brackets_randomized() {
        // Random rational maps (xt = a x + b, yt = c y + f(x)) with polynomial f.
        let policy = ZeroPolicy::default();
        use rand::Rng;
        let mut rng = policy.reseeded(0xb00).rng();
        for _ in 0..20 {
            let a = Scalar::from_ratio(rng.gen_range(1..5), rng.gen_range(1..4));
            let b = Scalar::from_ratio(rng.gen_range(-3..4), 2);
            let c = Scalar::from_ratio(rng.gen_range(1..5), rng.gen_range(1..3));
            let deg = rng.gen_range(0..3);
            let mut f = Expr::zero();
            for k in 0..=deg {
                let coef = Scalar::from_ratio(rng.gen_range(-2..3), 3);
                f = f + mul(vec![Expr::constant(coef), pow_i(Expr::x(), k)]);
            }
            let ainv = a.inv().unwrap();
            let cinv = c.inv().unwrap();
            // x = (xt - b)/a, y = (yt - f((xt-b)/a))/c
            let x_back = mul(vec![
                Expr::constant(ainv.clone()),
                Expr::sym(xt()) - Expr::constant(b.clone()),
            ]);
            let f_back = f.subst_one(&Symbol::X, &x_back);
            let y_back = mul(vec![Expr::constant(cinv), Expr::sym(yt()) - f_back]);
            let t = PointTransformation::new(
                (
                    mul(vec![Expr::constant(a.clone()), Expr::x()]) + Expr::constant(b.clone()),
                    mul(vec![Expr::constant(c.clone()), Expr::y()]) + f.clone(),
                ),
                (x_back, y_back),
                &policy,
            )
            .unwrap();
            let v = field(Expr::x(), mul(vec![Expr::x(), Expr::y()]));
            let w = field(Expr::y(), pow_i(Expr::x(), 2));
            let lhs = pushforward(&crate::lie::lie_bracket(&v, &w), &t).unwrap();
            let pv = pushforward(&v, &t).unwrap();
            let pw = pushforward(&w, &t).unwrap();
            let rhs = crate::lie::lie_bracket(&pv, &pw);
            assert!(is_zero(&(lhs.xi - rhs.xi), &policy).unwrap());
            assert!(is_zero(&(lhs.eta - rhs.eta), &policy).unwrap());
        }
    }
}
