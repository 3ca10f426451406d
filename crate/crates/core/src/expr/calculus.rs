//! Partial differentiation and substitution.

use super::build::{add, fun, mul, pow, pow_i};
use super::node::{Expr, FunKind, Node, Symbol};
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::collections::BTreeSet;

impl Expr {
    /// Partial derivative with respect to a single symbol. All other symbols,
    /// including jet coordinates of every order, are treated as independent
    /// constants. `ln` differentiates as `arg'/arg` with no sign tracking.
    pub fn diff(&self, s: &Symbol) -> Expr {
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Sym(t) => {
                if t == s {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Sum(ts) => add(ts.iter().map(|t| t.diff(s)).collect()),
            Node::Prod(fs) => {
                let mut terms = Vec::with_capacity(fs.len());
                for (i, f) in fs.iter().enumerate() {
                    let df = f.diff(s);
                    if df.is_zero_const() {
                        continue;
                    }
                    let mut rest: Vec<Expr> = Vec::with_capacity(fs.len());
                    rest.push(df);
                    for (j, g) in fs.iter().enumerate() {
                        if j != i {
                            rest.push(g.clone());
                        }
                    }
                    terms.push(mul(rest));
                }
                add(terms)
            }
            Node::Pow(b, e) => {
                let db = b.diff(s);
                if db.is_zero_const() {
                    return Expr::zero();
                }
                let coeff = Expr::constant(crate::scalar::Scalar::from_rational(e.clone()));
                mul(vec![coeff, pow(b.clone(), e - BigRational::one()), db])
            }
            Node::Fun(k, a) => {
                let da = a.diff(s);
                if da.is_zero_const() {
                    return Expr::zero();
                }
                let outer = match k {
                    FunKind::Exp => fun(FunKind::Exp, a.clone()),
                    FunKind::Ln => pow_i(a.clone(), -1),
                    FunKind::Sin => fun(FunKind::Cos, a.clone()),
                    FunKind::Cos => -fun(FunKind::Sin, a.clone()),
                    FunKind::Arctan => pow_i(Expr::one() + pow_i(a.clone(), 2), -1),
                };
                mul(vec![outer, da])
            }
        }
    }

    /// Simultaneous substitution followed by canonicalization.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Expr>) -> Expr {
        if bindings.is_empty() {
            return self.clone();
        }
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Sym(t) => bindings.get(t).cloned().unwrap_or_else(|| self.clone()),
            Node::Sum(ts) => add(ts.iter().map(|t| t.substitute(bindings)).collect()),
            Node::Prod(fs) => mul(fs.iter().map(|f| f.substitute(bindings)).collect()),
            Node::Pow(b, e) => pow(b.substitute(bindings), e.clone()),
            Node::Fun(k, a) => fun(*k, a.substitute(bindings)),
        }
    }

    pub fn subst_one(&self, s: &Symbol, to: &Expr) -> Expr {
        let mut m = BTreeMap::new();
        m.insert(s.clone(), to.clone());
        self.substitute(&m)
    }

    /// Highest k with `y^(k)` occurring; 0 when only x, y and parameters appear.
    pub fn jet_order(&self) -> u32 {
        match self.node() {
            Node::Const(_) => 0,
            Node::Sym(Symbol::Jet(k)) => *k,
            Node::Sym(_) => 0,
            Node::Sum(ts) | Node::Prod(ts) => ts.iter().map(|t| t.jet_order()).max().unwrap_or(0),
            Node::Pow(b, _) => b.jet_order(),
            Node::Fun(_, a) => a.jet_order(),
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self.node() {
            Node::Const(_) => {}
            Node::Sym(s) => {
                out.insert(s.clone());
            }
            Node::Sum(ts) | Node::Prod(ts) => ts.iter().for_each(|t| t.collect_symbols(out)),
            Node::Pow(b, _) => b.collect_symbols(out),
            Node::Fun(_, a) => a.collect_symbols(out),
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = BTreeSet::new();
        self.collect_symbols(&mut s);
        s
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Sym(t) => t == s,
            Node::Sum(ts) | Node::Prod(ts) => ts.iter().any(|t| t.contains_symbol(s)),
            Node::Pow(b, _) => b.contains_symbol(s),
            Node::Fun(_, a) => a.contains_symbol(s),
        }
    }

    /// True when the expression references a jet coordinate or `lambda`;
    /// planar vector field coefficients must not.
    pub fn has_jet_or_lambda(&self) -> bool {
        self.symbols()
            .iter()
            .any(|s| matches!(s, Symbol::Jet(_) | Symbol::Lambda))
    }

    /// True when the expression contains a transcendental function node or a
    /// non-integer power, i.e. when exact rational evaluation cannot apply.
    pub fn is_rational_form(&self) -> bool {
        match self.node() {
            Node::Const(_) | Node::Sym(_) => true,
            Node::Sum(ts) | Node::Prod(ts) => ts.iter().all(|t| t.is_rational_form()),
            Node::Pow(b, e) => e.is_integer() && b.is_rational_form(),
            Node::Fun(..) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build::pow_i;

    fn b() -> Expr {
        Expr::param("b")
    }

    #[test]
    fn polynomial_rules() {
        // d/dx x^2 = 2x
        assert_eq!(pow_i(Expr::x(), 2).diff(&Symbol::X), mul(vec![Expr::int(2), Expr::x()]));
        // d/dx sin x = cos x
        assert_eq!(
            fun(FunKind::Sin, Expr::x()).diff(&Symbol::X),
            fun(FunKind::Cos, Expr::x())
        );
    }

    #[test]
    fn chain_rule_on_catalog_invariant() {
        // d/dx [ y''*(1+x^2)^(3/2)*exp(b*arctan x) ]
        //   = y''*(1+x^2)^(1/2)*exp(b*arctan x)*(3x+b)
        // (hand chain-rule check)
        let base = Expr::one() + pow_i(Expr::x(), 2);
        let i2 = mul(vec![
            Expr::jet(2),
            pow(base.clone(), BigRational::new(3.into(), 2.into())),
            fun(FunKind::Exp, mul(vec![b(), fun(FunKind::Arctan, Expr::x())])),
        ]);
        let got = i2.diff(&Symbol::X);
        let expected = mul(vec![
            Expr::jet(2),
            pow(base, BigRational::new(1.into(), 2.into())),
            fun(FunKind::Exp, mul(vec![b(), fun(FunKind::Arctan, Expr::x())])),
            add(vec![mul(vec![Expr::int(3), Expr::x()]), b()]),
        ]);
        assert_eq!(got, expected);
    }

    #[test]
    fn jets_are_mutually_independent() {
        let e = mul(vec![Expr::jet(2), Expr::jet(1)]);
        assert_eq!(e.diff(&Symbol::jet(2)), Expr::jet(1));
        assert_eq!(e.diff(&Symbol::jet(3)), Expr::zero());
    }

    #[test]
    fn substitution_is_simultaneous() {
        // x*y with {x -> y} -> y^2
        let e = mul(vec![Expr::x(), Expr::y()]);
        assert_eq!(e.subst_one(&Symbol::X, &Expr::y()), pow_i(Expr::y(), 2));
        // swap x and y in x^2*y simultaneously
        let mut m = BTreeMap::new();
        m.insert(Symbol::X, Expr::y());
        m.insert(Symbol::Y, Expr::x());
        let e = mul(vec![pow_i(Expr::x(), 2), Expr::y()]);
        assert_eq!(e.substitute(&m), mul(vec![pow_i(Expr::y(), 2), Expr::x()]));
        // y -> 1/yt
        let inv = pow_i(Expr::param("yt"), -1);
        assert_eq!(Expr::y().subst_one(&Symbol::Y, &inv), inv);
        // (b-x)*y with {b -> 1/2} -> (1/2-x)*y
        let e = mul(vec![b() - Expr::x(), Expr::y()]);
        let got = e.subst_one(&Symbol::param("b"), &Expr::ratio(1, 2));
        let want = mul(vec![Expr::ratio(1, 2) - Expr::x(), Expr::y()]);
        assert_eq!(got, want);
    }

    #[test]
    fn jet_order_reads_highest_jet() {
        assert_eq!(mul(vec![Expr::jet(2), Expr::x()]).jet_order(), 2);
        assert_eq!((Expr::x() + b()).jet_order(), 0);
    }
}
