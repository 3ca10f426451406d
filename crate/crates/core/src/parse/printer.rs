//! Canonical printer. `parse(print(e)) == e` on canonical expressions, so
//! reports and golden tests are textually stable.

use crate::expr::{Expr, Node};
use crate::scalar::Scalar;
use num_traits::{One, Signed, Zero};
use std::fmt;

fn rational_str(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn const_str(c: &Scalar) -> String {
    c.to_string()
}

/// True when the constant prints as a single juxtaposable token in a product
/// (`3`, `1/2`, `i`, `2*i` are fine; `1+i` needs parentheses).
fn const_is_simple_factor(c: &Scalar) -> bool {
    c.is_real() || c.re.is_zero()
}

fn print_pow_base(b: &Expr, out: &mut String) {
    let needs_parens = match b.node() {
        Node::Sym(_) | Node::Fun(..) => false,
        Node::Const(c) => !(c.is_real() && !c.re.is_negative() && c.re.is_integer()),
        _ => true,
    };
    if needs_parens {
        out.push('(');
        print_expr_into(b, out);
        out.push(')');
    } else {
        print_expr_into(b, out);
    }
}

fn print_factor(f: &Expr, out: &mut String) {
    match f.node() {
        Node::Sum(_) => {
            out.push('(');
            print_expr_into(f, out);
            out.push(')');
        }
        _ => print_expr_into(f, out),
    }
}

/// Splits off a leading real negative coefficient for sum printing.
fn negated_view(t: &Expr) -> Option<Expr> {
    match t.node() {
        Node::Const(c) if c.is_real() && c.re.is_negative() => Some(Expr::constant(-c)),
        Node::Prod(fs) => {
            if let Node::Const(c) = fs[0].node() {
                if c.is_real() && c.re.is_negative() {
                    let mut v = vec![Expr::constant(-c)];
                    v.extend(fs[1..].iter().cloned());
                    return Some(crate::expr::mul(v));
                }
            }
            None
        }
        _ => None,
    }
}

fn print_expr_into(e: &Expr, out: &mut String) {
    match e.node() {
        Node::Const(c) => out.push_str(&const_str(c)),
        Node::Sym(s) => out.push_str(&s.name()),
        Node::Sum(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i == 0 {
                    print_expr_into(t, out);
                } else if let Some(pos) = negated_view(t) {
                    out.push_str(" - ");
                    print_expr_into(&pos, out);
                } else {
                    out.push_str(" + ");
                    print_expr_into(t, out);
                }
            }
        }
        Node::Prod(fs) => {
            let mut rest: &[Expr] = fs;
            if let Node::Const(c) = fs[0].node() {
                rest = &fs[1..];
                if c.is_real() && c.re == -num_rational::BigRational::one() {
                    out.push('-');
                } else if const_is_simple_factor(c) {
                    out.push_str(&const_str(c));
                    out.push('*');
                } else {
                    out.push('(');
                    out.push_str(&const_str(c));
                    out.push_str(")*");
                }
            }
            for (i, f) in rest.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                print_factor(f, out);
            }
        }
        Node::Pow(b, exp) => {
            print_pow_base(b, out);
            out.push('^');
            if exp.is_integer() && exp.is_positive() {
                out.push_str(&rational_str(exp));
            } else {
                out.push('(');
                out.push_str(&rational_str(exp));
                out.push(')');
            }
        }
        Node::Fun(k, a) => {
            out.push_str(k.name());
            out.push('(');
            print_expr_into(a, out);
            out.push(')');
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    print_expr_into(e, &mut s);
    s
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn round_trip(text: &str) {
        let e = parse_expr(text).unwrap();
        let printed = print_expr(&e);
        let back = parse_expr(&printed).unwrap_or_else(|err| panic!("reparse `{printed}` failed: {err}"));
        assert_eq!(back, e, "round trip changed `{text}` -> `{printed}`");
    }

    #[test]
    fn print_parse_round_trips() {
        for text in [
            "y''*(1+x^2)^(3/2)*exp(b*arctan(x))",
            "y'' + 2*b*y' + (b^2+1)*y",
            "-(1+x^2)",
            "2*y'*y''' - 3*(y'')^2",
            "(y')^(-1/2)*(x-y)",
            "1/2 - x",
            "y^(4)*(y''')^(-2)",
            "x + i*y",
            "(1+i)/2*x",
            "-exp(-2*b*x)",
            "ln(y'' + y')",
            "sin(x)^2 + cos(x)^2 - 1",
            "y^3*y''",
        ] {
            round_trip(text);
        }
    }

    #[test]
    fn jet_versus_power_printing() {
        // Pow(y, 4) prints without parens so it reparses as a power,
        // while the fourth jet keeps its parenthesized form.
        let p = parse_expr("y^4").unwrap();
        assert_eq!(print_expr(&p), "y^4");
        let j = parse_expr("y^(4)").unwrap();
        assert_eq!(print_expr(&j), "y^(4)");
    }
}
