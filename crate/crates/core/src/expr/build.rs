//! Smart constructors enforcing the canonical form.
//!
//! Canonical invariants:
//! - sums and products are flattened, sorted and carry at most one constant;
//! - like terms merge in sums, like bases merge by exponent addition in products;
//! - products distribute over sums and small positive integer powers of sums
//!   expand, so polynomial identities reduce structurally to zero;
//! - fractional powers never distribute over products or collapse through
//!   nested powers (principal-branch safety).

use super::node::{Expr, FunKind, Node, Symbol};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Positive integer powers of sums expand up to this exponent; larger ones
/// stay atomic. The catalog never needs more than B1^4 and S5^2.
const SUM_EXPAND_LIMIT: i64 = 10;

impl Expr {
    pub fn constant(c: Scalar) -> Expr {
        Expr::raw(Node::Const(c))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(Scalar::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::constant(Scalar::from_ratio(num, den))
    }

    pub fn imaginary() -> Expr {
        Expr::constant(Scalar::i())
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(s: Symbol) -> Expr {
        Expr::raw(Node::Sym(s))
    }

    pub fn x() -> Expr {
        Expr::sym(Symbol::X)
    }

    pub fn y() -> Expr {
        Expr::sym(Symbol::Y)
    }

    pub fn jet(k: u32) -> Expr {
        Expr::sym(Symbol::jet(k))
    }

    pub fn param(name: &str) -> Expr {
        Expr::sym(Symbol::param(name))
    }

    pub fn as_const(&self) -> Option<&Scalar> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self.node(), Node::Const(c) if c.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(self.node(), Node::Const(c) if c.is_one())
    }

    /// Re-canonicalizes bottom-up. Expressions built through the constructors
    /// are already canonical, so this is idempotent and mostly useful as a
    /// checked entry point for foreign trees and in tests.
    pub fn simplify(&self) -> Expr {
        match self.node() {
            Node::Const(_) | Node::Sym(_) => self.clone(),
            Node::Sum(ts) => add(ts.iter().map(|t| t.simplify()).collect()),
            Node::Prod(fs) => mul(fs.iter().map(|f| f.simplify()).collect()),
            Node::Pow(b, e) => pow(b.simplify(), e.clone()),
            Node::Fun(k, a) => fun(*k, a.simplify()),
        }
    }
}

/// Splits a canonical term into (coefficient, non-constant core).
/// The core is `None` for pure constants.
fn coeff_core(t: &Expr) -> (Scalar, Option<Expr>) {
    match t.node() {
        Node::Const(c) => (c.clone(), None),
        Node::Prod(fs) => {
            if let Node::Const(c) = fs[0].node() {
                let rest: Vec<Expr> = fs[1..].to_vec();
                let core = if rest.len() == 1 {
                    rest.into_iter().next().unwrap()
                } else {
                    Expr::raw(Node::Prod(rest))
                };
                (c.clone(), Some(core))
            } else {
                (Scalar::one(), Some(t.clone()))
            }
        }
        _ => (Scalar::one(), Some(t.clone())),
    }
}

fn term_from(coeff: Scalar, core: Expr) -> Expr {
    if coeff.is_zero() {
        return Expr::zero();
    }
    if coeff.is_one() {
        return core;
    }
    match core.node() {
        Node::Prod(fs) => {
            let mut v = Vec::with_capacity(fs.len() + 1);
            v.push(Expr::constant(coeff));
            v.extend(fs.iter().cloned());
            Expr::raw(Node::Prod(v))
        }
        _ => Expr::raw(Node::Prod(vec![Expr::constant(coeff), core])),
    }
}

/// Canonical n-ary sum.
pub fn add(terms: Vec<Expr>) -> Expr {
    let mut acc = Scalar::zero();
    let mut cores: BTreeMap<Expr, Scalar> = BTreeMap::new();
    let mut stack: Vec<Expr> = terms;
    stack.reverse();
    while let Some(t) = stack.pop() {
        match t.node() {
            Node::Sum(ts) => stack.extend(ts.iter().rev().cloned()),
            _ => {
                let (c, core) = coeff_core(&t);
                match core {
                    None => acc = &acc + &c,
                    Some(core) => {
                        let entry = cores.entry(core).or_insert_with(Scalar::zero);
                        *entry = &*entry + &c;
                    }
                }
            }
        }
    }
    let mut out: Vec<Expr> = Vec::with_capacity(cores.len() + 1);
    if !acc.is_zero() {
        out.push(Expr::constant(acc));
    }
    for (core, coeff) in cores {
        if !coeff.is_zero() {
            out.push(term_from(coeff, core));
        }
    }
    out.sort();
    match out.len() {
        0 => Expr::zero(),
        1 => out.into_iter().next().unwrap(),
        _ => Expr::raw(Node::Sum(out)),
    }
}

/// Canonical n-ary product. Like bases merge by exponent addition first
/// (so a bare sum meeting a fractional power of the same sum folds into one
/// power); any sums that survive with integer exponents then distribute.
pub fn mul(factors: Vec<Expr>) -> Expr {
    let mut coeff = Scalar::one();
    let mut bases: BTreeMap<Expr, BigRational> = BTreeMap::new();
    let mut stack: Vec<Expr> = factors;
    while let Some(f) = stack.pop() {
        match f.node() {
            Node::Prod(fs) => stack.extend(fs.iter().cloned()),
            Node::Const(c) => {
                if c.is_zero() {
                    return Expr::zero();
                }
                coeff = &coeff * c;
            }
            Node::Pow(b, e) => {
                let entry = bases.entry(b.clone()).or_insert_with(BigRational::zero);
                *entry += e;
            }
            _ => {
                let entry = bases.entry(f).or_insert_with(BigRational::zero);
                *entry += BigRational::one();
            }
        }
    }
    let mut atoms: Vec<Expr> = Vec::new();
    let mut sums: Vec<Expr> = Vec::new();
    let mut reprocess: Vec<Expr> = Vec::new();
    for (base, exp) in bases {
        if exp.is_zero() {
            continue;
        }
        let rebuilt = pow(base, exp);
        match rebuilt.node() {
            Node::Const(c) => {
                if c.is_zero() {
                    return Expr::zero();
                }
                coeff = &coeff * c;
            }
            Node::Sum(_) => sums.push(rebuilt),
            // A power over a product base may re-expose factors; rare, so a
            // recursive pass folds them back in.
            Node::Prod(_) => reprocess.push(rebuilt),
            _ => atoms.push(rebuilt),
        }
    }
    if !reprocess.is_empty() {
        reprocess.push(Expr::constant(coeff));
        reprocess.extend(atoms);
        reprocess.extend(sums);
        return mul(reprocess);
    }
    if !sums.is_empty() {
        // Distribute: sum terms are never sums themselves, so one cartesian
        // pass expands fully.
        let mut terms: Vec<Vec<Expr>> = vec![atoms];
        for s in &sums {
            let Node::Sum(ts) = s.node() else { unreachable!() };
            let mut next = Vec::with_capacity(terms.len() * ts.len());
            for base in &terms {
                for t in ts {
                    let mut row = base.clone();
                    row.push(t.clone());
                    next.push(row);
                }
            }
            terms = next;
        }
        let coeff_expr = Expr::constant(coeff);
        return add(
            terms
                .into_iter()
                .map(|mut row| {
                    row.push(coeff_expr.clone());
                    mul(row)
                })
                .collect(),
        );
    }
    atoms.sort();
    if atoms.is_empty() {
        return Expr::constant(coeff);
    }
    if coeff.is_one() {
        if atoms.len() == 1 {
            return atoms.into_iter().next().unwrap();
        }
        return Expr::raw(Node::Prod(atoms));
    }
    let mut v = Vec::with_capacity(atoms.len() + 1);
    v.push(Expr::constant(coeff));
    v.extend(atoms);
    Expr::raw(Node::Prod(v))
}


fn exact_nth_root(n: &BigInt, q: u64) -> Option<BigInt> {
    if q == 1 {
        return Some(n.clone());
    }
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(q as u32);
    if num_traits::pow::Pow::pow(&r, q) == *n {
        Some(r)
    } else {
        None
    }
}

/// Canonical power with a rational exponent.
pub fn pow(base: Expr, exp: BigRational) -> Expr {
    if exp.is_zero() {
        return Expr::one();
    }
    if exp.is_one() {
        return base;
    }
    match base.node() {
        Node::Const(c) => {
            if exp.is_integer() {
                if let Some(e) = exp.to_integer().to_i64() {
                    if let Some(v) = c.pow_i64(e) {
                        return Expr::constant(v);
                    }
                }
            } else if let Some(r) = c.as_rational() {
                if r.is_zero() && exp.is_positive() {
                    return Expr::zero();
                }
                // Fold only exact roots of non-negative rationals; negative
                // bases stay symbolic because the principal branch is complex.
                if !r.is_negative() {
                    if let (Some(p), Some(q)) = (exp.numer().to_i64(), exp.denom().to_u64()) {
                        if let (Some(rn), Some(rd)) =
                            (exact_nth_root(r.numer(), q), exact_nth_root(r.denom(), q))
                        {
                            let root = Scalar::from_rational(BigRational::new(rn, rd));
                            if let Some(v) = root.pow_i64(p) {
                                return Expr::constant(v);
                            }
                        }
                    }
                }
            }
            Expr::raw(Node::Pow(base, exp))
        }
        Node::Pow(b2, e2) => {
            if exp.is_integer() {
                pow(b2.clone(), e2 * &exp)
            } else {
                Expr::raw(Node::Pow(base, exp))
            }
        }
        Node::Prod(fs) => {
            if exp.is_integer() {
                mul(fs.iter().map(|f| pow(f.clone(), exp.clone())).collect())
            } else {
                Expr::raw(Node::Pow(base, exp))
            }
        }
        Node::Sum(ts) => {
            if exp.is_integer() {
                if let Some(k) = exp.to_integer().to_i64() {
                    if k > 1 && k <= SUM_EXPAND_LIMIT {
                        // Direct distribution over the terms; going through
                        // `mul` would merge the like bases straight back into
                        // this power.
                        let mut acc: Vec<Expr> = ts.clone();
                        for _ in 1..k {
                            let mut next = Vec::with_capacity(acc.len() * ts.len());
                            for a in &acc {
                                for t in ts {
                                    next.push(mul(vec![a.clone(), t.clone()]));
                                }
                            }
                            next = vec![add(next)];
                            if let Node::Sum(terms) = next[0].node() {
                                acc = terms.clone();
                            } else {
                                acc = next;
                            }
                        }
                        return add(acc);
                    }
                }
            }
            Expr::raw(Node::Pow(base, exp))
        }
        _ => Expr::raw(Node::Pow(base, exp)),
    }
}

pub fn pow_i(base: Expr, exp: i64) -> Expr {
    pow(base, BigRational::from_integer(BigInt::from(exp)))
}

/// Canonical function application; folds the handful of exact anchor values.
pub fn fun(kind: FunKind, arg: Expr) -> Expr {
    if let Node::Const(c) = arg.node() {
        if c.is_zero() {
            return match kind {
                FunKind::Exp | FunKind::Cos => Expr::one(),
                FunKind::Sin | FunKind::Arctan => Expr::zero(),
                FunKind::Ln => Expr::raw(Node::Fun(kind, arg)),
            };
        }
        if c.is_one() && kind == FunKind::Ln {
            return Expr::zero();
        }
    }
    Expr::raw(Node::Fun(kind, arg))
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        add(vec![self, rhs])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        add(vec![self, mul(vec![Expr::int(-1), rhs])])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        mul(vec![self, rhs])
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        mul(vec![Expr::int(-1), self])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn like_terms_merge() {
        // x + x -> 2*x
        let e = Expr::x() + Expr::x();
        assert_eq!(e, mul(vec![Expr::int(2), Expr::x()]));
    }

    #[test]
    fn exponents_add_on_like_bases() {
        // (1+x^2)*(1+x^2)^(1/2) -> (1+x^2)^(3/2)
        let b = Expr::one() + pow_i(Expr::x(), 2);
        let e = mul(vec![b.clone(), pow(b.clone(), BigRational::new(1.into(), 2.into()))]);
        assert_eq!(e, pow(b, BigRational::new(3.into(), 2.into())));
    }

    #[test]
    fn annihilation_to_zero() {
        // y' - y' + 0*y'' -> 0
        let e = add(vec![
            Expr::jet(1),
            -Expr::jet(1),
            mul(vec![Expr::zero(), Expr::jet(2)]),
        ]);
        assert!(e.is_zero_const());
    }

    #[test]
    fn products_of_sums_expand() {
        // (b+x)*y'' + 2*x*y'' -> b*y'' + 3*x*y''
        let lhs = mul(vec![Expr::param("b") + Expr::x(), Expr::jet(2)])
            + mul(vec![Expr::int(2), Expr::x(), Expr::jet(2)]);
        let rhs = mul(vec![
            add(vec![Expr::param("b"), mul(vec![Expr::int(3), Expr::x()])]),
            Expr::jet(2),
        ]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_folding_is_exact() {
        let e = pow(Expr::ratio(4, 9), BigRational::new(1.into(), 2.into()));
        assert_eq!(e, Expr::ratio(2, 3));
        let i2 = mul(vec![Expr::imaginary(), Expr::imaginary()]);
        assert_eq!(i2, Expr::int(-1));
        // (-8)^(1/3) stays symbolic: the principal branch is complex.
        let neg_root = pow(Expr::int(-8), BigRational::new(1.into(), 3.into()));
        assert!(neg_root.as_const().is_none());
    }

    #[test]
    fn simplify_is_idempotent_on_construction() {
        let e = mul(vec![
            Expr::param("b") + Expr::x(),
            pow_i(Expr::jet(1), -2),
            fun(FunKind::Exp, Expr::x()),
        ]);
        assert_eq!(e.simplify(), e);
        assert_eq!(e.simplify().simplify(), e);
    }
}
