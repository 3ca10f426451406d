//! Jet-space machinery: total derivative, prolongation of planar vector
//! fields, and application of prolonged operators.

use crate::error::{Error, Result};
use crate::expr::{add, mul, Expr, Symbol};
use crate::scalar::Scalar;

/// A planar vector field `xi(x,y) d/dx + eta(x,y) d/dy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    pub xi: Expr,
    pub eta: Expr,
}

impl VectorField {
    /// Coefficients may reference only x, y and parameters.
    pub fn new(xi: Expr, eta: Expr) -> Result<VectorField> {
        for (name, c) in [("xi", &xi), ("eta", &eta)] {
            if c.has_jet_or_lambda() {
                return Err(Error::Arity(format!("{name} = {c} references jet variables")));
            }
        }
        Ok(VectorField { xi, eta })
    }

    pub fn is_zero_field(&self) -> bool {
        self.xi.is_zero_const() && self.eta.is_zero_const()
    }

    /// Applies the field as a first-order operator to a function of x and y.
    pub fn apply_planar(&self, f: &Expr) -> Expr {
        add(vec![
            mul(vec![self.xi.clone(), f.diff(&Symbol::X)]),
            mul(vec![self.eta.clone(), f.diff(&Symbol::Y)]),
        ])
    }

    pub fn scale(&self, c: &Scalar) -> VectorField {
        VectorField {
            xi: mul(vec![Expr::constant(c.clone()), self.xi.clone()]),
            eta: mul(vec![Expr::constant(c.clone()), self.eta.clone()]),
        }
    }

    pub fn add_field(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: self.xi.clone() + other.xi.clone(),
            eta: self.eta.clone() + other.eta.clone(),
        }
    }
}

impl std::fmt::Display for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})*D[x] + ({})*D[y]", self.xi, self.eta)
    }
}

/// Total differentiation along x, truncated at `max_order`:
/// `D_x e = de/dx + sum_{k=0..max_order} y^(k+1) * de/dy^(k)`.
pub fn total_derivative(e: &Expr, max_order: u32) -> Expr {
    let mut terms = vec![e.diff(&Symbol::X)];
    for k in 0..=max_order {
        let d = e.diff(&Symbol::jet(k));
        if !d.is_zero_const() {
            terms.push(mul(vec![Expr::jet(k + 1), d]));
        }
    }
    add(terms)
}

/// Repeated total derivative; each application raises the jet order by one.
pub fn total_derivative_n(e: &Expr, n: u32) -> Expr {
    let mut acc = e.clone();
    for _ in 0..n {
        let ord = acc.jet_order();
        acc = total_derivative(&acc, ord);
    }
    acc
}

/// A vector field lifted to the order-n jet space. `etas[k-1]` is the
/// coefficient of d/dy^(k), generated by the prolongation recursion
/// `eta^k = D_x eta^(k-1) - y^(k) D_x xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub order: u32,
    pub etas: Vec<Expr>,
}

impl ProlongedField {
    /// Coefficient of d/dy^(k); k = 0 is the base eta.
    pub fn eta_k(&self, k: u32) -> &Expr {
        if k == 0 {
            &self.base.eta
        } else {
            &self.etas[(k - 1) as usize]
        }
    }

    /// All coefficients as the row (xi, eta, eta^1, ..., eta^n).
    pub fn coefficient_row(&self) -> Vec<Expr> {
        let mut row = Vec::with_capacity(self.etas.len() + 2);
        row.push(self.base.xi.clone());
        row.push(self.base.eta.clone());
        row.extend(self.etas.iter().cloned());
        row
    }
}

/// Order-n prolongation by the recursion; no closed formula is used.
pub fn prolong(v: &VectorField, n: u32) -> ProlongedField {
    let dxi = total_derivative(&v.xi, 0);
    let mut etas = Vec::with_capacity(n as usize);
    let mut prev = v.eta.clone();
    for k in 1..=n {
        let next = total_derivative(&prev, k - 1) - mul(vec![Expr::jet(k), dxi.clone()]);
        etas.push(next.clone());
        prev = next;
    }
    ProlongedField { base: v.clone(), order: n, etas }
}

/// Applies a prolonged operator to a jet-space function.
pub fn apply(p: &ProlongedField, e: &Expr) -> Result<Expr> {
    let ord = e.jet_order();
    if ord > p.order {
        return Err(Error::Order { order: p.order, found: ord });
    }
    let mut terms = vec![
        mul(vec![p.base.xi.clone(), e.diff(&Symbol::X)]),
        mul(vec![p.base.eta.clone(), e.diff(&Symbol::Y)]),
    ];
    for k in 1..=ord {
        terms.push(mul(vec![p.eta_k(k).clone(), e.diff(&Symbol::jet(k))]));
    }
    Ok(add(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{pow_i, FunKind};

    fn field(xi: Expr, eta: Expr) -> VectorField {
        VectorField::new(xi, eta).unwrap()
    }

    #[test]
    fn total_derivative_basics() {
        // D_x y = y'
        assert_eq!(total_derivative(&Expr::y(), 0), Expr::jet(1));
        // D_x (x*y') = y' + x*y''
        let e = mul(vec![Expr::x(), Expr::jet(1)]);
        let want = Expr::jet(1) + mul(vec![Expr::x(), Expr::jet(2)]);
        assert_eq!(total_derivative(&e, 1), want);
        // D_x ((b-x)*y) = -y + (b-x)*y', the product-rule step inside the
        // worked prolongation example.
        let e = mul(vec![Expr::param("b") - Expr::x(), Expr::y()]);
        let want = -Expr::y() + mul(vec![Expr::param("b") - Expr::x(), Expr::jet(1)]);
        assert_eq!(total_derivative(&e, 0), want);
    }

    #[test]
    fn prolong_translation_is_trivial() {
        let p = prolong(&field(Expr::one(), Expr::zero()), 3);
        assert!(p.etas.iter().all(|e| e.is_zero_const()));
    }

    #[test]
    fn prolong_x_dy() {
        // x d/dy prolongs with eta^1 = 1, eta^2 = 0.
        let p = prolong(&field(Expr::zero(), Expr::x()), 2);
        assert_eq!(p.etas[0], Expr::one());
        assert!(p.etas[1].is_zero_const());
    }

    #[test]
    fn prolong_catalog_field_17() {
        // e3 = -(1+x^2) d/dx + (b-x) y d/dy:
        //   eta^1 = -(y - (b+x) y'),  eta^2 = (b+3x) y''.
        let b = Expr::param("b");
        let v = field(
            -(Expr::one() + pow_i(Expr::x(), 2)),
            mul(vec![b.clone() - Expr::x(), Expr::y()]),
        );
        let p = prolong(&v, 2);
        let eta1 = -(Expr::y() - mul(vec![b.clone() + Expr::x(), Expr::jet(1)]));
        let eta2 = mul(vec![b + mul(vec![Expr::int(3), Expr::x()]), Expr::jet(2)]);
        assert_eq!(p.etas[0], eta1);
        assert_eq!(p.etas[1], eta2);
    }

    #[test]
    fn apply_reads_off_coefficients() {
        let p = prolong(&field(Expr::zero(), Expr::x()), 2);
        assert_eq!(apply(&p, &Expr::jet(1)).unwrap(), Expr::one());
        let p = prolong(&field(Expr::zero(), Expr::one()), 2);
        assert!(apply(&p, &Expr::jet(2)).unwrap().is_zero_const());
    }

    #[test]
    fn apply_rejects_excess_order() {
        let p = prolong(&field(Expr::one(), Expr::zero()), 1);
        let err = apply(&p, &Expr::jet(2)).unwrap_err();
        assert!(matches!(err, Error::Order { order: 1, found: 2 }));
    }

    #[test]
    fn arity_guard() {
        assert!(VectorField::new(Expr::jet(1), Expr::zero()).is_err());
        assert!(VectorField::new(Expr::zero(), fun(Expr::x())).is_ok());
        fn fun(x: Expr) -> Expr {
            crate::expr::fun(FunKind::Exp, x)
        }
    }
}
