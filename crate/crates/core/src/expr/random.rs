use rand::seq::IndexedRandom;
use rand::Rng;

use super::{BinaryOp, Expr, UnaryOp};

const UNARY: [UnaryOp; 6] = [
    UnaryOp::Neg,
    UnaryOp::Exp,
    UnaryOp::Ln,
    UnaryOp::Sqrt,
    UnaryOp::Sin,
    UnaryOp::Cos,
];
const BINARY: [BinaryOp; 4] = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div];
const EXPONENTS: [f64; 7] = [2.0, 3.0, -1.0, 0.5, -2.0, 1.5, 0.25];

/// Unfolded random tree of depth at most `depth` over `vars`. Constants
/// are short decimals of either sign, so every tree prints in the
/// grammar.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, depth: usize, vars: &[&str]) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return if vars.is_empty() || rng.random_bool(0.4) {
            let v = rng.random_range(-500i32..=500) as f64 / 100.0;
            Expr::Const(v)
        } else {
            Expr::var(vars.choose(rng).expect("non-empty"))
        };
    }
    match rng.random_range(0..10) {
        0..=2 => Expr::raw_unary(
            *UNARY.choose(rng).expect("non-empty"),
            random_expr(rng, depth - 1, vars),
        ),
        3 => Expr::raw_pow(
            random_expr(rng, depth - 1, vars),
            *EXPONENTS.choose(rng).expect("non-empty"),
        ),
        _ => Expr::raw_binary(
            *BINARY.choose(rng).expect("non-empty"),
            random_expr(rng, depth - 1, vars),
            random_expr(rng, depth - 1, vars),
        ),
    }
}
