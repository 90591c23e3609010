use super::{BinaryOp, Expr, UnaryOp};

// Binding strength of each printed form. A child is parenthesized when
// it binds looser than its slot requires.
const ADD: u8 = 1;
const MUL: u8 = 2;
const FACTOR: u8 = 3;
const POWER: u8 = 4;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) if c.is_sign_negative() => FACTOR,
        Expr::Const(_) | Expr::Var(_) => POWER + 1,
        Expr::Unary(UnaryOp::Neg, _) => FACTOR,
        Expr::Unary(..) => POWER + 1,
        Expr::Pow(..) => POWER,
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => ADD,
        Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => MUL,
    }
}

fn write_child(out: &mut String, e: &Expr, min_level: u8) {
    if level(e) < min_level {
        out.push('(');
        write(out, e);
        out.push(')');
    } else {
        write(out, e);
    }
}

fn write(out: &mut String, e: &Expr) {
    match e {
        // Display for f64 is the shortest string that round-trips.
        Expr::Const(c) => out.push_str(&c.to_string()),
        Expr::Var(v) => out.push_str(v),
        Expr::Unary(UnaryOp::Neg, a) => {
            out.push('-');
            write_child(out, a, POWER);
        }
        Expr::Unary(op, a) => {
            out.push_str(op.name().unwrap_or_default());
            out.push('(');
            write(out, a);
            out.push(')');
        }
        Expr::Pow(a, r) => {
            // The base of a power must be an atom.
            write_child(out, a, POWER + 1);
            out.push('^');
            out.push_str(&r.to_string());
        }
        Expr::Binary(op, a, b) => {
            let (lhs, rhs) = match op {
                BinaryOp::Add | BinaryOp::Sub => (ADD, MUL),
                BinaryOp::Mul | BinaryOp::Div => (MUL, FACTOR),
            };
            write_child(out, a, lhs);
            out.push(' ');
            out.push(op.symbol());
            out.push(' ');
            write_child(out, b, rhs);
        }
    }
}

/// Render in the parser's grammar with minimal parentheses.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write(&mut out, e);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn simple_forms() {
        assert_eq!(Expr::var("z").exp().to_string(), "exp(z)");
        let e = parse_expr("z - y*x", &["x", "y", "z"]).unwrap();
        assert_eq!(e.to_string(), "z - y * x");
    }

    #[test]
    fn parentheses_where_needed() {
        let v = &["a", "b", "c"];
        for (src, printed) in [
            ("a - (b - c)", "a - (b - c)"),
            ("(a - b) - c", "a - b - c"),
            ("a / (b * c)", "a / (b * c)"),
            ("(a + b) * c", "(a + b) * c"),
            ("-(a + b)", "-(a + b)"),
            ("(-a)^2", "(-a)^2"),
            ("(a^2)^3", "(a^2)^3"),
            ("a * -b", "a * -b"),
            ("-(-a)", "-(-a)"),
            ("a^-0.5", "a^-0.5"),
        ] {
            let e = parse_expr(src, v).unwrap();
            assert_eq!(e.to_string(), printed, "{src}");
            assert_eq!(parse_expr(printed, v).unwrap(), e);
        }
    }

    #[test]
    fn negative_constants() {
        let e = Expr::raw_pow(Expr::Const(-2.0), 2.0);
        assert_eq!(e.to_string(), "(-2)^2");
        let e = Expr::raw_binary(BinaryOp::Sub, Expr::var("x"), Expr::Const(-3.0));
        assert_eq!(e.to_string(), "x - -3");
        assert_eq!(parse_expr("x - -3", &["x"]).unwrap().fold(), e);
    }
}
