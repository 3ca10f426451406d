//! Numeric evaluation: IEEE double-pair with principal branches, exact
//! Gaussian-rational evaluation where possible, and a compiled real-valued
//! form for the flow integrator's inner loop.

use super::node::{Expr, FunKind, Node, Symbol};
use crate::error::Error;
use crate::scalar::{rational_to_f64, Scalar};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;

pub type Bindings = BTreeMap<Symbol, Complex64>;

/// Evaluation that also reports the largest intermediate magnitude, which the
/// zero-test uses to scale its tolerance against cancellation.
pub fn eval_tracked(e: &Expr, point: &Bindings) -> Result<(Complex64, f64), Error> {
    let mut max_mag = 0.0f64;
    let v = eval_rec(e, point, &mut max_mag)?;
    Ok((v, max_mag))
}

/// IEEE double-pair evaluation at a fully bound point.
pub fn eval(e: &Expr, point: &Bindings) -> Result<Complex64, Error> {
    eval_tracked(e, point).map(|(v, _)| v)
}

fn check(v: Complex64, max_mag: &mut f64) -> Result<Complex64, Error> {
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Domain("non-finite intermediate value".into()));
    }
    let m = v.norm();
    if m > *max_mag {
        *max_mag = m;
    }
    Ok(v)
}

fn eval_rec(e: &Expr, point: &Bindings, max_mag: &mut f64) -> Result<Complex64, Error> {
    let v = match e.node() {
        Node::Const(c) => {
            let (re, im) = c.to_f64_pair();
            Complex64::new(re, im)
        }
        Node::Sym(s) => *point
            .get(s)
            .ok_or_else(|| Error::Domain(format!("unbound symbol {}", s.name())))?,
        Node::Sum(ts) => {
            let mut acc = Complex64::zero();
            for t in ts {
                acc += eval_rec(t, point, max_mag)?;
            }
            acc
        }
        Node::Prod(fs) => {
            let mut acc = Complex64::new(1.0, 0.0);
            for f in fs {
                acc *= eval_rec(f, point, max_mag)?;
            }
            acc
        }
        Node::Pow(b, exp) => {
            let bv = eval_rec(b, point, max_mag)?;
            if exp.is_integer() {
                let k = exp.to_integer().to_i32().ok_or_else(|| {
                    Error::Domain("integer exponent out of range".into())
                })?;
                if bv.norm() == 0.0 {
                    if k > 0 {
                        Complex64::zero()
                    } else {
                        return Err(Error::Domain("zero raised to a non-positive power".into()));
                    }
                } else {
                    bv.powi(k)
                }
            } else {
                let r = rational_to_f64(exp);
                if bv.norm() == 0.0 {
                    if r > 0.0 {
                        Complex64::zero()
                    } else {
                        return Err(Error::Domain("zero raised to a non-positive power".into()));
                    }
                } else {
                    // Principal complex branch.
                    bv.powf(r)
                }
            }
        }
        Node::Fun(k, a) => {
            let av = eval_rec(a, point, max_mag)?;
            match k {
                FunKind::Exp => av.exp(),
                FunKind::Ln => {
                    if av.norm() == 0.0 {
                        return Err(Error::Domain("ln of zero".into()));
                    }
                    // ln means ln|.| on the real axis: real negative arguments
                    // evaluate through the absolute value rather than picking
                    // up the principal i*pi.
                    if av.im == 0.0 && av.re < 0.0 {
                        Complex64::new((-av.re).ln(), 0.0)
                    } else {
                        av.ln()
                    }
                }
                FunKind::Sin => av.sin(),
                FunKind::Cos => av.cos(),
                FunKind::Arctan => av.atan(),
            }
        }
    };
    check(v, max_mag)
}

/// Exact evaluation over Gaussian rationals. Fails on transcendental nodes and
/// non-integer powers; division by zero reports a singular sample so callers
/// can redraw the point.
pub fn eval_exact(e: &Expr, point: &BTreeMap<Symbol, Scalar>) -> Result<Scalar, Error> {
    match e.node() {
        Node::Const(c) => Ok(c.clone()),
        Node::Sym(s) => point
            .get(s)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("unbound symbol {}", s.name()))),
        Node::Sum(ts) => {
            let mut acc = Scalar::zero();
            for t in ts {
                acc = &acc + &eval_exact(t, point)?;
            }
            Ok(acc)
        }
        Node::Prod(fs) => {
            let mut acc = Scalar::one();
            for f in fs {
                acc = &acc * &eval_exact(f, point)?;
            }
            Ok(acc)
        }
        Node::Pow(b, exp) => {
            if !exp.is_integer() {
                return Err(Error::Domain("non-integer exponent in exact evaluation".into()));
            }
            let bv = eval_exact(b, point)?;
            let k = exp
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Domain("exponent out of range".into()))?;
            if bv.is_zero() && k <= 0 {
                return Err(Error::SingularSample(1));
            }
            bv.pow_i64(k)
                .ok_or_else(|| Error::Domain("exact power failed".into()))
        }
        Node::Fun(..) => Err(Error::Domain("transcendental node in exact evaluation".into())),
    }
}

/// A flat, real-valued compiled form of an expression. The flow integrator
/// evaluates prolonged coefficients hundreds of thousands of times; walking
/// the tree each step is the dominant cost without this.
pub struct Program {
    instrs: Vec<Instr>,
}

enum Instr {
    Const(f64),
    Load(usize),
    Add(usize),
    Mul(usize),
    PowI(i32),
    PowF(f64),
    Fun(FunKind),
}

impl Program {
    /// Compiles against a slot table mapping each symbol to an index into the
    /// evaluation state vector.
    pub fn compile(e: &Expr, slots: &BTreeMap<Symbol, usize>) -> Result<Program, Error> {
        let mut instrs = Vec::new();
        compile_rec(e, slots, &mut instrs)?;
        Ok(Program { instrs })
    }

    /// Real-valued evaluation; returns NaN on domain violations (negative base
    /// to a fractional power, log of a non-positive value, division by zero).
    pub fn run(&self, state: &[f64], stack: &mut Vec<f64>) -> f64 {
        stack.clear();
        for ins in &self.instrs {
            match ins {
                Instr::Const(c) => stack.push(*c),
                Instr::Load(i) => stack.push(state[*i]),
                Instr::Add(n) => {
                    let mut acc = 0.0;
                    for _ in 0..*n {
                        acc += stack.pop().unwrap();
                    }
                    stack.push(acc);
                }
                Instr::Mul(n) => {
                    let mut acc = 1.0;
                    for _ in 0..*n {
                        acc *= stack.pop().unwrap();
                    }
                    stack.push(acc);
                }
                Instr::PowI(k) => {
                    let b = stack.pop().unwrap();
                    if b == 0.0 && *k <= 0 {
                        stack.push(f64::NAN);
                    } else {
                        stack.push(b.powi(*k));
                    }
                }
                Instr::PowF(r) => {
                    let b = stack.pop().unwrap();
                    // Real-only: negative bases under fractional powers are a
                    // domain violation here, signalled as NaN.
                    stack.push(b.powf(*r));
                }
                Instr::Fun(k) => {
                    let a = stack.pop().unwrap();
                    let v = match k {
                        FunKind::Exp => a.exp(),
                        FunKind::Ln => {
                            if a == 0.0 {
                                f64::NAN
                            } else {
                                a.abs().ln()
                            }
                        }
                        FunKind::Sin => a.sin(),
                        FunKind::Cos => a.cos(),
                        FunKind::Arctan => a.atan(),
                    };
                    stack.push(v);
                }
            }
        }
        stack.pop().unwrap_or(f64::NAN)
    }
}

fn compile_rec(e: &Expr, slots: &BTreeMap<Symbol, usize>, out: &mut Vec<Instr>) -> Result<(), Error> {
    match e.node() {
        Node::Const(c) => {
            if !c.is_real() {
                return Err(Error::Domain("complex constant in real program".into()));
            }
            out.push(Instr::Const(rational_to_f64(&c.re)));
        }
        Node::Sym(s) => {
            let slot = slots
                .get(s)
                .ok_or_else(|| Error::Domain(format!("unbound symbol {}", s.name())))?;
            out.push(Instr::Load(*slot));
        }
        Node::Sum(ts) => {
            for t in ts {
                compile_rec(t, slots, out)?;
            }
            out.push(Instr::Add(ts.len()));
        }
        Node::Prod(fs) => {
            for f in fs {
                compile_rec(f, slots, out)?;
            }
            out.push(Instr::Mul(fs.len()));
        }
        Node::Pow(b, exp) => {
            compile_rec(b, slots, out)?;
            if exp.is_integer() {
                let k = exp
                    .to_integer()
                    .to_i32()
                    .ok_or_else(|| Error::Domain("exponent out of range".into()))?;
                out.push(Instr::PowI(k));
            } else {
                out.push(Instr::PowF(rational_to_f64(exp)));
            }
        }
        Node::Fun(k, a) => {
            compile_rec(a, slots, out)?;
            out.push(Instr::Fun(*k));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build::{fun, mul, pow_i};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn spot_values() {
        // 1 + x^2 at x = 2 -> 5
        let e = Expr::one() + pow_i(Expr::x(), 2);
        let mut pt = Bindings::new();
        pt.insert(Symbol::X, c(2.0));
        assert_eq!(eval(&e, &pt).unwrap(), c(5.0));

        // exp(b*arctan x) at b = 0, x = 3 -> 1
        let e = fun(
            FunKind::Exp,
            mul(vec![Expr::param("b"), fun(FunKind::Arctan, Expr::x())]),
        );
        let mut pt = Bindings::new();
        pt.insert(Symbol::X, c(3.0));
        pt.insert(Symbol::param("b"), c(0.0));
        assert_eq!(eval(&e, &pt).unwrap(), c(1.0));

        // y*y'' - 2*(y')^2 at (y, y', y'') = (1, 1, 3) -> 1
        let e = mul(vec![Expr::y(), Expr::jet(2)]) - mul(vec![Expr::int(2), pow_i(Expr::jet(1), 2)]);
        let mut pt = Bindings::new();
        pt.insert(Symbol::Y, c(1.0));
        pt.insert(Symbol::jet(1), c(1.0));
        pt.insert(Symbol::jet(2), c(3.0));
        assert_eq!(eval(&e, &pt).unwrap(), c(1.0));
    }

    #[test]
    fn ln_takes_absolute_value_on_negative_reals() {
        let e = fun(FunKind::Ln, Expr::x());
        let mut pt = Bindings::new();
        pt.insert(Symbol::X, c(-2.0));
        let v = eval(&e, &pt).unwrap();
        assert!((v.re - 2.0f64.ln()).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn domain_errors() {
        let e = pow_i(Expr::x(), -1);
        let mut pt = Bindings::new();
        pt.insert(Symbol::X, c(0.0));
        assert!(matches!(eval(&e, &pt), Err(Error::Domain(_))));

        let e = fun(FunKind::Ln, Expr::x());
        assert!(matches!(eval(&e, &pt), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_evaluation_matches() {
        let e = mul(vec![Expr::ratio(1, 3), pow_i(Expr::x(), 3)]) + Expr::param("b");
        let mut pt = BTreeMap::new();
        pt.insert(Symbol::X, Scalar::from_ratio(3, 2));
        pt.insert(Symbol::param("b"), Scalar::from_ratio(-1, 8));
        // (1/3)*(27/8) - 1/8 = 9/8 - 1/8 = 1
        assert_eq!(eval_exact(&e, &pt).unwrap(), Scalar::one());
    }

    #[test]
    fn compiled_program_agrees_with_tree_walk() {
        let e = mul(vec![
            Expr::jet(2),
            fun(FunKind::Exp, mul(vec![Expr::ratio(1, 2), Expr::x()])),
        ]) + pow_i(Expr::jet(1), 3);
        let mut slots = BTreeMap::new();
        slots.insert(Symbol::X, 0usize);
        slots.insert(Symbol::jet(1), 1usize);
        slots.insert(Symbol::jet(2), 2usize);
        let prog = Program::compile(&e, &slots).unwrap();
        let state = [0.7, -1.3, 0.4];
        let mut stack = Vec::new();
        let got = prog.run(&state, &mut stack);
        let mut pt = Bindings::new();
        pt.insert(Symbol::X, c(0.7));
        pt.insert(Symbol::jet(1), c(-1.3));
        pt.insert(Symbol::jet(2), c(0.4));
        let want = eval(&e, &pt).unwrap().re;
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}
