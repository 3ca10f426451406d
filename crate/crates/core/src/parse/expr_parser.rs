//! Pratt parser for the expression grammar.
//!
//! Implicit multiplication is rejected. `^` is right-associative; rational
//! exponents are written `^(p/q)`. `y^(k)` with a literal positive integer is
//! the jet coordinate of order k, never a power. `D[x]`/`D[y]` parse only when
//! field atoms are enabled (vector-field position).

use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};
use crate::expr::{fun, mul, pow, pow_i, Expr, FunKind, Symbol};
use std::collections::BTreeMap;

/// Hook for the catalog's notation macros (`W`, `K`, `S`, ...). `args` is
/// empty for bare-identifier macros like `B1`.
pub trait MacroResolver {
    fn is_macro(&self, name: &str) -> bool;
    fn resolve(&self, name: &str, args: Vec<Expr>) -> Result<Expr>;
}

pub struct NoMacros;

impl MacroResolver for NoMacros {
    fn is_macro(&self, _: &str) -> bool {
        false
    }
    fn resolve(&self, name: &str, _: Vec<Expr>) -> Result<Expr> {
        Err(Error::Invalid(format!("no macro `{name}` in this context")))
    }
}

pub struct ParseOptions<'a> {
    /// Allow `D[x]` / `D[y]` atoms.
    pub field_atoms: bool,
    pub resolver: &'a dyn MacroResolver,
    /// Bindings substituted at atom level; required for parameter-dependent
    /// exponents like `(y'')^(1/(a-1))`.
    pub env: Option<&'a BTreeMap<Symbol, Expr>>,
}

impl Default for ParseOptions<'_> {
    fn default() -> Self {
        ParseOptions { field_atoms: false, resolver: &NoMacros, env: None }
    }
}

/// Internal marker atoms for `D[x]` / `D[y]` during field parsing.
pub const DX_MARK: &str = "@Dx";
pub const DY_MARK: &str = "@Dy";

pub struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    opts: ParseOptions<'a>,
}

const BP_ADD: (u8, u8) = (10, 11);
const BP_MUL: (u8, u8) = (20, 21);
const BP_NEG: u8 = 15;
const BP_POW: (u8, u8) = (31, 30); // right-associative

impl<'a> Parser<'a> {
    pub fn new(text: &str, opts: ParseOptions<'a>) -> Result<Parser<'a>> {
        Ok(Parser { toks: tokenize(text)?, pos: 0, opts })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(Error::parse(t.span, format!("found {}", t.tok.describe()), &[what]))
        }
    }

    pub fn parse_complete(&mut self) -> Result<Expr> {
        let e = self.parse_bp(0)?;
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            return Err(Error::parse(
                t.span,
                format!("found {} (implicit multiplication is not allowed)", t.tok.describe()),
                &["operator", "end of input"],
            ));
        }
        Ok(e)
    }

    fn parse_bp(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (lbp, rbp, op) = match self.peek().tok {
                Tok::Plus => (BP_ADD.0, BP_ADD.1, '+'),
                Tok::Minus => (BP_ADD.0, BP_ADD.1, '-'),
                Tok::Star => (BP_MUL.0, BP_MUL.1, '*'),
                Tok::Slash => (BP_MUL.0, BP_MUL.1, '/'),
                Tok::Caret => (BP_POW.0, BP_POW.1, '^'),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.next();
            if op == '^' {
                lhs = self.parse_power(lhs)?;
                continue;
            }
            let rhs = self.parse_bp(rbp)?;
            lhs = match op {
                '+' => lhs + rhs,
                '-' => lhs - rhs,
                '*' => lhs * rhs,
                '/' => mul(vec![lhs, pow_i(rhs, -1)]),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    /// Exponent position: either a bare integer literal, or a parenthesized
    /// expression that must fold to a rational constant. `y^(k)` with a bare
    /// positive integer k is the jet coordinate. Chained `^` resolves
    /// right-associatively through the constant exponents.
    fn parse_power(&mut self, lhs: Expr) -> Result<Expr> {
        let t = self.peek().clone();
        // Jet shorthand: exactly `y ^ ( INT )`.
        if t.tok == Tok::LParen && lhs == Expr::y() && self.pos + 2 < self.toks.len() {
            let digits = match (&self.toks[self.pos + 1].tok, &self.toks[self.pos + 2].tok) {
                (Tok::Int(d), Tok::RParen) => Some(d.clone()),
                _ => None,
            };
            if let Some(d) = digits {
                let k: u32 = d.parse().map_err(|_| {
                    Error::parse(self.toks[self.pos + 1].span, "jet order out of range", &["integer"])
                })?;
                if k >= 1 {
                    self.next();
                    self.next();
                    self.next();
                    return Ok(Expr::jet(k));
                }
            }
        }
        let exp = self.parse_exponent()?;
        let exp = exp.as_const().and_then(|c| c.as_rational().cloned()).ok_or_else(|| {
            Error::parse(t.span, "exponent must evaluate to a rational constant", &["rational exponent"])
        })?;
        Ok(pow(lhs, exp))
    }

    /// `exponent := (INT | '(' expr ')') ('^' exponent)?`, folded to a
    /// constant right-associatively.
    fn parse_exponent(&mut self) -> Result<Expr> {
        let t = self.next();
        let atom = match t.tok {
            Tok::Int(ref digits) => {
                let k: i64 = digits
                    .parse()
                    .map_err(|_| Error::parse(t.span, "exponent out of range", &["integer"]))?;
                Expr::int(k)
            }
            Tok::LParen => {
                let inner = self.parse_bp(0)?;
                self.expect(Tok::RParen, "`)`")?;
                inner.simplify()
            }
            other => {
                return Err(Error::parse(t.span, format!("found {}", other.describe()), &["integer", "`(`"]))
            }
        };
        if self.peek().tok == Tok::Caret {
            self.next();
            let rhs = self.parse_exponent()?;
            let r = rhs.as_const().and_then(|c| c.as_rational().cloned()).ok_or_else(|| {
                Error::parse(t.span, "exponent must evaluate to a rational constant", &["rational exponent"])
            })?;
            return Ok(pow(atom, r));
        }
        Ok(atom)
    }

    fn parse_prefix(&mut self) -> Result<Expr> {
        let t = self.next();
        match t.tok {
            Tok::Int(digits) => {
                let n: i64 = digits
                    .parse()
                    .map_err(|_| Error::parse(t.span, "integer literal out of range", &["integer"]))?;
                Ok(Expr::int(n))
            }
            Tok::Minus => {
                let rhs = self.parse_bp(BP_NEG)?;
                Ok(-rhs)
            }
            Tok::LParen => {
                let inner = self.parse_bp(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.parse_ident(&name, t.span),
            other => Err(Error::parse(
                t.span,
                format!("found {}", other.describe()),
                &["number", "identifier", "`(`", "`-`"],
            )),
        }
    }

    fn parse_ident(&mut self, name: &str, span: crate::error::SourceSpan) -> Result<Expr> {
        match name {
            "x" => Ok(Expr::x()),
            "y" => {
                if let Tok::Primes(n) = self.peek().tok {
                    self.next();
                    return Ok(Expr::jet(n));
                }
                Ok(Expr::y())
            }
            "i" => Ok(Expr::imaginary()),
            "lambda" => Ok(Expr::sym(Symbol::Lambda)),
            "D" if self.opts.field_atoms => {
                self.expect(Tok::LBracket, "`[`")?;
                let axis = self.next();
                let atom = match &axis.tok {
                    Tok::Ident(a) if a == "x" => Expr::param(DX_MARK),
                    Tok::Ident(a) if a == "y" => Expr::param(DY_MARK),
                    other => {
                        return Err(Error::parse(axis.span, format!("found {}", other.describe()), &["`x`", "`y`"]))
                    }
                };
                self.expect(Tok::RBracket, "`]`")?;
                Ok(atom)
            }
            _ => {
                if let Some(kind) = FunKind::from_name(name) {
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.parse_bp(0)?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(fun(kind, arg));
                }
                if self.opts.resolver.is_macro(name) {
                    let mut args = Vec::new();
                    if self.peek().tok == Tok::LParen {
                        self.next();
                        if self.peek().tok != Tok::RParen {
                            loop {
                                args.push(self.parse_bp(0)?);
                                if self.peek().tok == Tok::Comma {
                                    self.next();
                                } else {
                                    break;
                                }
                            }
                        }
                        self.expect(Tok::RParen, "`)`")?;
                    }
                    return self.opts.resolver.resolve(name, args);
                }
                if self.peek().tok == Tok::LParen {
                    return Err(Error::parse(
                        span,
                        format!("unknown function `{name}`"),
                        &["exp", "ln", "sin", "cos", "arctan"],
                    ));
                }
                let primes = if let Tok::Primes(n) = self.peek().tok { Some(n) } else { None };
                if let Some(n) = primes {
                    // Prime marks on parameters appear only in catalog
                    // notation contexts (derivatives of slot functions).
                    let next_span = self.peek().span;
                    if self.opts.resolver.is_macro("dd") {
                        self.next();
                        let base = self.lookup_or_param(name);
                        return self.opts.resolver.resolve("dd", vec![base, Expr::int(n as i64)]);
                    }
                    return Err(Error::parse(next_span, "prime marks apply only to y", &["operator"]));
                }
                Ok(self.lookup_or_param(name))
            }
        }
    }

    fn lookup_or_param(&self, name: &str) -> Expr {
        let sym = Symbol::param(name);
        if let Some(env) = self.opts.env {
            if let Some(bound) = env.get(&sym) {
                return bound.clone();
            }
        }
        Expr::sym(sym)
    }
}

/// Parses an expression in the plain grammar (no field atoms, no macros).
pub fn parse_expr(text: &str) -> Result<Expr> {
    Parser::new(text, ParseOptions::default())?.parse_complete()
}

/// Parses an expression with options (field atoms, notation macros, bindings).
pub fn parse_expr_with(text: &str, opts: ParseOptions<'_>) -> Result<Expr> {
    Parser::new(text, opts)?.parse_complete()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::pow as mk_pow;
    use num_rational::BigRational;

    #[test]
    fn parses_catalog_invariant() {
        // Second-order invariant from the catalog, exercising powers,
        // functions and jets together.
        let e = parse_expr("y''*(1+x^2)^(3/2)*exp(b*arctan(x))").unwrap();
        let want = mul(vec![
            Expr::jet(2),
            mk_pow(Expr::one() + pow_i(Expr::x(), 2), BigRational::new(3.into(), 2.into())),
            fun(FunKind::Exp, mul(vec![Expr::param("b"), fun(FunKind::Arctan, Expr::x())])),
        ]);
        assert_eq!(e, want);
    }

    #[test]
    fn jet_marks() {
        assert_eq!(parse_expr("y^(4)").unwrap(), Expr::jet(4));
        assert_eq!(parse_expr("y'''").unwrap(), Expr::jet(3));
        // A parenthesized rational exponent on y is a power, not a jet.
        assert_eq!(
            parse_expr("y^(1/2)").unwrap(),
            mk_pow(Expr::y(), BigRational::new(1.into(), 2.into()))
        );
        // y^4 without parens is a power.
        assert_eq!(parse_expr("y^4").unwrap(), pow_i(Expr::y(), 4));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let err = parse_expr("x 2").unwrap_err();
        match err {
            Error::Parse { span, .. } => {
                assert_eq!(span.begin, 2);
                assert_eq!(span.end, 3);
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn unary_minus_precedence() {
        // Unary minus binds looser than ^.
        assert_eq!(parse_expr("-x^2").unwrap(), -pow_i(Expr::x(), 2));
        // And tighter than +.
        assert_eq!(parse_expr("-x+y").unwrap(), -Expr::x() + Expr::y());
    }

    #[test]
    fn power_is_right_associative() {
        // 2^3^2 = 2^(3^2) = 512
        assert_eq!(parse_expr("2^3^2").unwrap(), Expr::int(512));
    }

    #[test]
    fn division_builds_rationals() {
        assert_eq!(parse_expr("1/2").unwrap(), Expr::ratio(1, 2));
        assert_eq!(parse_expr("3/4*x").unwrap(), mul(vec![Expr::ratio(3, 4), Expr::x()]));
    }

    #[test]
    fn gaussian_unit() {
        assert_eq!(parse_expr("i^2").unwrap(), Expr::int(-1));
        let e = parse_expr("(1+i)/2").unwrap();
        assert!(e.as_const().is_some());
    }

    #[test]
    fn field_atoms_only_in_field_mode() {
        assert!(parse_expr("D[x]").is_err());
        let opts = ParseOptions { field_atoms: true, ..Default::default() };
        let e = parse_expr_with("-(1+x^2)*D[x] + (b-x)*y*D[y]", opts).unwrap();
        assert!(e.contains_symbol(&Symbol::param(DX_MARK)));
    }

    #[test]
    fn parameter_exponents_fold_through_env() {
        let mut env = BTreeMap::new();
        env.insert(Symbol::param("a"), Expr::ratio(-1, 1));
        let opts = ParseOptions { env: Some(&env), ..Default::default() };
        // (2-a)/(a-1) at a = -1 is -3/2
        let e = parse_expr_with("y''*(y')^((2-a)/(a-1))", opts).unwrap();
        let want = mul(vec![
            Expr::jet(2),
            mk_pow(Expr::jet(1), BigRational::new((-3).into(), 2.into())),
        ]);
        assert_eq!(e, want);
        // Without bindings the same text is rejected.
        assert!(parse_expr("y''*(y')^((2-a)/(a-1))").is_err());
    }
}
