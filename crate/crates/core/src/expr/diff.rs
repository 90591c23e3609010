use super::{BinaryOp, Expr, UnaryOp};

impl Expr {
    /// Symbolic partial derivative with respect to `var`.
    ///
    /// Built with the folding constructors, so structural zeros and ones
    /// disappear as they are produced.
    pub fn diff(&self, var: &str) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(v) => {
                if &**v == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Unary(op, a) => {
                let da = a.diff(var);
                if da.is_zero() {
                    return Expr::zero();
                }
                let a = (**a).clone();
                match op {
                    UnaryOp::Neg => -da,
                    UnaryOp::Exp => da * a.exp(),
                    UnaryOp::Ln => da / a,
                    UnaryOp::Sqrt => da / (2.0 * a.sqrt()),
                    UnaryOp::Sin => da * a.cos(),
                    UnaryOp::Cos => -(da * a.sin()),
                }
            }
            Expr::Binary(op, a, b) => {
                let da = a.diff(var);
                let db = b.diff(var);
                match op {
                    BinaryOp::Add => da + db,
                    BinaryOp::Sub => da - db,
                    BinaryOp::Mul => da * &**b + &**a * db,
                    BinaryOp::Div => {
                        if db.is_zero() {
                            da / &**b
                        } else {
                            (da * &**b - &**a * db) / Expr::pow((**b).clone(), 2.0)
                        }
                    }
                }
            }
            Expr::Pow(a, r) => {
                let da = a.diff(var);
                if da.is_zero() {
                    return Expr::zero();
                }
                *r * Expr::pow((**a).clone(), r - 1.0) * da
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse_expr, EvalContext, Expr};

    const XYZ: &[&str] = &["x", "y", "z"];

    #[test]
    fn exp_is_its_own_derivative() {
        let e = parse_expr("exp(z)", XYZ).unwrap();
        assert_eq!(e.diff("z"), e);
    }

    #[test]
    fn eta_component() {
        let e = parse_expr("z - y*x", XYZ).unwrap();
        assert_eq!(e.diff("y"), -Expr::var("x"));
        assert_eq!(e.diff("z"), Expr::one());
    }

    #[test]
    fn quotient_and_power() {
        let e = parse_expr("x^3 / y + sqrt(z)", XYZ).unwrap();
        let ctx = EvalContext::at_point(XYZ, &[2.0, 4.0, 9.0]);
        let dx = e.diff("x").eval_f64(&ctx).unwrap();
        let dy = e.diff("y").eval_f64(&ctx).unwrap();
        let dz = e.diff("z").eval_f64(&ctx).unwrap();
        assert!((dx - 3.0).abs() < 1e-15);
        assert!((dy + 0.5).abs() < 1e-15);
        assert!((dz - 1.0 / 6.0).abs() < 1e-15);
    }
}
