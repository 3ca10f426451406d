//! Expression tree representation and the total order used for canonical forms.

use crate::scalar::Scalar;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::sync::Arc;

/// A variable-like symbol: the independent variable `x`, the dependent
/// variable `y`, a jet coordinate `y^(k)`, a named parameter, or the
/// invariant-differentiation multiplier `lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    X,
    Y,
    /// `Jet(k)` is the k-th derivative coordinate; `jet(0)` is identified with `Y`.
    Jet(u32),
    Param(Arc<str>),
    Lambda,
}

impl Symbol {
    pub fn jet(k: u32) -> Symbol {
        if k == 0 {
            Symbol::Y
        } else {
            Symbol::Jet(k)
        }
    }

    pub fn param(name: &str) -> Symbol {
        Symbol::Param(Arc::from(name))
    }

    pub fn name(&self) -> String {
        match self {
            Symbol::X => "x".into(),
            Symbol::Y => "y".into(),
            Symbol::Jet(k) => match k {
                1 => "y'".into(),
                2 => "y''".into(),
                3 => "y'''".into(),
                k => format!("y^({k})"),
            },
            Symbol::Param(p) => p.to_string(),
            Symbol::Lambda => "lambda".into(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Symbol::X => 0,
            Symbol::Y => 1,
            Symbol::Jet(_) => 2,
            Symbol::Lambda => 3,
            Symbol::Param(_) => 4,
        }
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Symbol::Jet(a), Symbol::Jet(b)) => a.cmp(b),
            (Symbol::Param(a), Symbol::Param(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

/// Functions admitted by the kernel. No automatic rewriting relates them;
/// identities such as sin^2 + cos^2 = 1 are discharged by the numeric
/// zero-test, not by the simplifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunKind {
    Exp,
    Ln,
    Sin,
    Cos,
    Arctan,
}

impl FunKind {
    pub fn name(self) -> &'static str {
        match self {
            FunKind::Exp => "exp",
            FunKind::Ln => "ln",
            FunKind::Sin => "sin",
            FunKind::Cos => "cos",
            FunKind::Arctan => "arctan",
        }
    }

    pub fn from_name(name: &str) -> Option<FunKind> {
        Some(match name {
            "exp" => FunKind::Exp,
            "ln" => FunKind::Ln,
            "sin" => FunKind::Sin,
            "cos" => FunKind::Cos,
            "arctan" => FunKind::Arctan,
            _ => return None,
        })
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Const(Scalar),
    Sym(Symbol),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Pow(Expr, BigRational),
    Fun(FunKind, Expr),
}

/// An immutable symbolic expression in canonical form.
///
/// All construction goes through the smart constructors in this module, which
/// enforce the canonical-form invariants (flattened and sorted sums/products,
/// merged like terms and like bases, folded constants). Cloning is cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expr(pub(crate) Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn raw(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    fn rank(&self) -> u8 {
        match self.node() {
            Node::Const(_) => 0,
            Node::Sym(_) => 1,
            Node::Fun(..) => 2,
            Node::Pow(..) => 3,
            Node::Prod(_) => 4,
            Node::Sum(_) => 5,
        }
    }
}

/// Fixed total order on expressions: variant rank first, then recursive
/// lexicographic comparison of children, constants compared by value.
impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.rank().cmp(&other.rank()).then_with(|| match (self.node(), other.node()) {
            (Node::Const(a), Node::Const(b)) => a.cmp(b),
            (Node::Sym(a), Node::Sym(b)) => a.cmp(b),
            (Node::Fun(ka, aa), Node::Fun(kb, ab)) => ka.cmp(kb).then_with(|| aa.cmp(ab)),
            (Node::Pow(ba, ea), Node::Pow(bb, eb)) => ba.cmp(bb).then_with(|| ea.cmp(eb)),
            (Node::Prod(a), Node::Prod(b)) | (Node::Sum(a), Node::Sum(b)) => {
                for (l, r) in a.iter().zip(b.iter()) {
                    let c = l.cmp(r);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                a.len().cmp(&b.len())
            }
            _ => unreachable!("rank already distinguished variants"),
        })
    }
}
