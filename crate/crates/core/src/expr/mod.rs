//! Symbolic scalar expressions over named variables.
//!
//! Every field on a chart (metric entries, structure tensors, curve
//! components) is an [`Expr`]. Spatial derivatives are taken symbolically
//! with [`Expr::diff`]; derivatives along a curve parameter are carried by
//! truncated Taylor [`Jet`]s during evaluation.

mod diff;
mod eval;
mod jet;
mod parse;
mod print;
mod random;

use std::fmt;
use std::ops;
use std::sync::Arc;

pub use eval::{EvalContext, EvalError};
pub use jet::{Jet, JetError, MAX_ORDER};
pub use parse::{parse_expr, ParseError, ParseErrorKind};
pub use print::print_expr;
pub use random::random_expr;

/// Unary operators and elementary functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
}

impl UnaryOp {
    /// Function name as written in source, `None` for negation.
    pub fn name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Neg => None,
            UnaryOp::Exp => Some("exp"),
            UnaryOp::Ln => Some("ln"),
            UnaryOp::Sqrt => Some("sqrt"),
            UnaryOp::Sin => Some("sin"),
            UnaryOp::Cos => Some("cos"),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => UnaryOp::Exp,
            "ln" => UnaryOp::Ln,
            "sqrt" => UnaryOp::Sqrt,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            _ => return None,
        })
    }

    fn apply_f64(self, v: f64) -> f64 {
        match self {
            UnaryOp::Neg => -v,
            UnaryOp::Exp => v.exp(),
            UnaryOp::Ln => v.ln(),
            UnaryOp::Sqrt => v.sqrt(),
            UnaryOp::Sin => v.sin(),
            UnaryOp::Cos => v.cos(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

/// Expression tree. Children are shared, so cloning is cheap and values
/// can be handed across threads freely.
///
/// Powers only take constant exponents; `a^b` with symbolic `b` has to be
/// written as `exp(b * ln(a))`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Arc<str>),
    Unary(UnaryOp, Arc<Expr>),
    Binary(BinaryOp, Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, f64),
}

impl Expr {
    pub fn constant(v: f64) -> Self {
        Expr::Const(v)
    }

    pub fn var(name: &str) -> Self {
        Expr::Var(Arc::from(name))
    }

    pub fn zero() -> Self {
        Expr::Const(0.0)
    }

    pub fn one() -> Self {
        Expr::Const(1.0)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    // Raw constructors: no folding. The parser uses these so that the
    // tree mirrors the source text.

    pub fn raw_unary(op: UnaryOp, a: Expr) -> Self {
        Expr::Unary(op, Arc::new(a))
    }

    pub fn raw_binary(op: BinaryOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Arc::new(a), Arc::new(b))
    }

    pub fn raw_pow(a: Expr, exponent: f64) -> Self {
        Expr::Pow(Arc::new(a), exponent)
    }

    // Folding constructors.

    pub fn unary(op: UnaryOp, a: Expr) -> Self {
        if let Some(c) = a.as_const() {
            let v = op.apply_f64(c);
            if v.is_finite() {
                return Expr::Const(v);
            }
        }
        if op == UnaryOp::Neg {
            if let Expr::Unary(UnaryOp::Neg, inner) = &a {
                return (**inner).clone();
            }
        }
        Expr::raw_unary(op, a)
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Self {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            let v = match op {
                BinaryOp::Add => x + y,
                BinaryOp::Sub => x - y,
                BinaryOp::Mul => x * y,
                BinaryOp::Div => x / y,
            };
            if v.is_finite() {
                return Expr::Const(v);
            }
        }
        match op {
            BinaryOp::Add if a.is_zero() => b,
            BinaryOp::Add if b.is_zero() => a,
            BinaryOp::Sub if b.is_zero() => a,
            BinaryOp::Sub if a.is_zero() => Expr::unary(UnaryOp::Neg, b),
            BinaryOp::Mul if a.is_zero() || b.is_zero() => Expr::zero(),
            BinaryOp::Mul if a.is_one() => b,
            BinaryOp::Mul if b.is_one() => a,
            BinaryOp::Div if a.is_zero() => Expr::zero(),
            BinaryOp::Div if b.is_one() => a,
            _ => Expr::raw_binary(op, a, b),
        }
    }

    pub fn pow(a: Expr, exponent: f64) -> Self {
        if exponent == 0.0 {
            return Expr::one();
        }
        if exponent == 1.0 {
            return a;
        }
        if let Some(c) = a.as_const() {
            let v = pow_f64(c, exponent);
            if v.is_finite() {
                return Expr::Const(v);
            }
        }
        Expr::raw_pow(a, exponent)
    }

    pub fn exp(self) -> Self {
        Expr::unary(UnaryOp::Exp, self)
    }

    pub fn ln(self) -> Self {
        Expr::unary(UnaryOp::Ln, self)
    }

    pub fn sqrt(self) -> Self {
        Expr::unary(UnaryOp::Sqrt, self)
    }

    pub fn sin(self) -> Self {
        Expr::unary(UnaryOp::Sin, self)
    }

    pub fn cos(self) -> Self {
        Expr::unary(UnaryOp::Cos, self)
    }

    pub fn powf(self, exponent: f64) -> Self {
        Expr::pow(self, exponent)
    }

    /// Bottom-up constant folding with the trivial identities
    /// (`x + 0`, `x * 1`, `x * 0`, `x ^ 1`, `--x`, ...).
    pub fn fold(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Unary(op, a) => Expr::unary(*op, a.fold()),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.fold(), b.fold()),
            Expr::Pow(a, r) => Expr::pow(a.fold(), *r),
        }
    }

    /// Names of free variables, sorted and deduplicated.
    pub fn free_vars(&self) -> Vec<Arc<str>> {
        fn walk(e: &Expr, out: &mut Vec<Arc<str>>) {
            match e {
                Expr::Const(_) => {}
                Expr::Var(v) => out.push(v.clone()),
                Expr::Unary(_, a) | Expr::Pow(a, _) => walk(a, out),
                Expr::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.node_count(),
            Expr::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Replace every occurrence of variable `name` by `with`.
    pub fn substitute(&self, name: &str, with: &Expr) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) if &**v == name => with.clone(),
            Expr::Var(_) => self.clone(),
            Expr::Unary(op, a) => Expr::unary(*op, a.substitute(name, with)),
            Expr::Binary(op, a, b) => {
                Expr::binary(*op, a.substitute(name, with), b.substitute(name, with))
            }
            Expr::Pow(a, r) => Expr::pow(a.substitute(name, with), *r),
        }
    }
}

/// Real power with the same integer/non-integer split as jet evaluation.
pub(crate) fn pow_f64(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::Const(v)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print_expr(self))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self, rhs)
            }
        }
        impl ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, self.clone(), rhs.clone())
            }
        }
        impl ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, self, rhs.clone())
            }
        }
        impl ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self.clone(), rhs)
            }
        }
        impl ops::$trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::binary($op, self, Expr::Const(rhs))
            }
        }
        impl ops::$trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, Expr::Const(self), rhs)
            }
        }
    };
}

impl_binop!(Add, add, BinaryOp::Add);
impl_binop!(Sub, sub, BinaryOp::Sub);
impl_binop!(Mul, mul, BinaryOp::Mul);
impl_binop!(Div, div, BinaryOp::Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::unary(UnaryOp::Neg, self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::unary(UnaryOp::Neg, self.clone())
    }
}

/// Sum of an iterator of expressions, folding zeros.
pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
    terms.into_iter().fold(Expr::zero(), |acc, t| acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_identities() {
        let x = Expr::var("x");
        assert_eq!(x.clone() + 0.0, x);
        assert_eq!(0.0 * x.clone(), Expr::zero());
        assert_eq!(Expr::one() * x.clone(), x);
        assert_eq!(x.clone().powf(1.0), x);
        assert_eq!(-(-x.clone()), x);
        assert_eq!(Expr::Const(2.0) * Expr::Const(3.0), Expr::Const(6.0));
        assert_eq!(Expr::zero() - x.clone(), -x.clone());
    }

    #[test]
    fn non_finite_constants_are_not_folded() {
        let e = Expr::Const(-1.0).ln();
        assert!(matches!(e, Expr::Unary(UnaryOp::Ln, _)));
        let d = Expr::Const(1.0) / Expr::Const(0.0);
        assert!(matches!(d, Expr::Binary(BinaryOp::Div, _, _)));
    }

    #[test]
    fn substitute_and_free_vars() {
        let e = parse_expr("z - y*x", &["x", "y", "z"]).unwrap();
        let vars: Vec<String> = e.free_vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(vars, ["x", "y", "z"]);
        let s = e.substitute("y", &Expr::Const(0.0));
        assert_eq!(s, Expr::var("z"));
    }
}
