use acm_core::expr::{parse_expr, print_expr, BinaryOp, EvalContext, Expr, Jet, UnaryOp};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-300i32..=300).prop_map(|k| Expr::Const(k as f64 / 100.0)),
        prop::sample::select(VARS.to_vec()).prop_map(Expr::var),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let unary = prop::sample::select(vec![
        UnaryOp::Neg,
        UnaryOp::Exp,
        UnaryOp::Ln,
        UnaryOp::Sqrt,
        UnaryOp::Sin,
        UnaryOp::Cos,
    ]);
    let binary = prop::sample::select(vec![
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
    ]);
    let exponent = prop::sample::select(vec![2.0, 3.0, -1.0, 0.5, -2.0]);
    leaf().prop_recursive(4, 32, 2, move |inner| {
        prop_oneof![
            (unary.clone(), inner.clone()).prop_map(|(op, a)| Expr::raw_unary(op, a)),
            (inner.clone(), exponent.clone()).prop_map(|(a, k)| Expr::raw_pow(a, k)),
            (binary.clone(), inner.clone(), inner)
                .prop_map(|(op, a, b)| Expr::raw_binary(op, a, b)),
        ]
    })
}

/// x carries the jet parameter; y, z are fixed.
fn ctx(x: Jet, y: f64, z: f64) -> EvalContext {
    let mut c = EvalContext::new();
    c.bind("x", x).bind_real("y", y).bind_real("z", z);
    c
}

/// Jet of order 3 in x, if defined and of moderate size.
fn tame_jet(e: &Expr, x: f64, y: f64, z: f64) -> Option<Jet> {
    let j = e.eval_jet(&ctx(Jet::variable(x, 3), y, z), 3).ok()?;
    j.coefficients()
        .iter()
        .all(|c| c.is_finite() && c.abs() < 1e4)
        .then_some(j)
}

fn value(e: &Expr, x: f64, y: f64, z: f64) -> f64 {
    e.eval_f64(&ctx(Jet::constant(x, 0), y, z))
        .unwrap_or(f64::NAN)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_round_trip(e in expr()) {
        let printed = print_expr(&e);
        let back = parse_expr(&printed, &VARS).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(back.fold(), e.fold(), "{}", printed);
    }

    #[test]
    fn jet_derivative_matches_finite_difference(
        e in expr(), x in 0.5f64..2.0, y in 0.5f64..2.0, z in 0.5f64..2.0,
    ) {
        let j = tame_jet(&e, x, y, z);
        prop_assume!(j.is_some());
        let j = j.unwrap();
        let h = 1e-5 * x.abs().max(1.0);
        let fd = (value(&e, x + h, y, z) - value(&e, x - h, y, z)) / (2.0 * h);
        prop_assume!(fd.is_finite());
        prop_assert!(close(j.derivative(1), fd, 1e-6), "{} at {x}: {} vs {fd}", print_expr(&e), j.derivative(1));
    }

    #[test]
    fn symbolic_derivatives_match_jets(
        e in expr(), x in 0.5f64..2.0, y in 0.5f64..2.0, z in 0.5f64..2.0,
    ) {
        let j = tame_jet(&e, x, y, z);
        prop_assume!(j.is_some());
        let j = j.unwrap();
        let d1 = e.diff("x");
        let d2 = d1.diff("x");
        prop_assert!(close(value(&d1, x, y, z), j.derivative(1), 1e-9));
        prop_assert!(close(value(&d2, x, y, z), j.derivative(2), 1e-8));
        // the y direction, through a jet in y
        let mut cy = EvalContext::new();
        cy.bind("y", Jet::variable(y, 1)).bind_real("x", x).bind_real("z", z);
        let jy = e.eval_jet(&cy, 1).unwrap();
        prop_assert!(close(value(&e.diff("y"), x, y, z), jy.derivative(1), 1e-9));
    }

    #[test]
    fn diff_is_linear(
        a in expr(), b in expr(), k in -3.0f64..3.0, x in 0.5f64..2.0, y in 0.5f64..2.0, z in 0.5f64..2.0,
    ) {
        prop_assume!(tame_jet(&a, x, y, z).is_some() && tame_jet(&b, x, y, z).is_some());
        let combined = (Expr::Const(k) * a.clone() + b.clone()).diff("x");
        let separate = Expr::Const(k) * a.diff("x") + b.diff("x");
        prop_assert!(close(value(&combined, x, y, z), value(&separate, x, y, z), 1e-9));
    }

    #[test]
    fn diff_of_unused_variable_is_zero(e in expr()) {
        prop_assume!(!e.free_vars().iter().any(|v| &**v == "z"));
        prop_assert!(e.diff("z").fold().is_zero());
    }
}
