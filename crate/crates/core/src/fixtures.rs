//! Built-in manifold and curve files, embedded so the reproduction suite
//! runs with no setup. The same files ship under `fixtures/`.

pub const EXP_WARPED: &str = include_str!("../fixtures/exp_warped.json");
pub const LIN_WARPED: &str = include_str!("../fixtures/lin_warped.json");
pub const COSYMPLECTIC_FLAT: &str = include_str!("../fixtures/cosymplectic_flat.json");
pub const CONTACT_METRIC_HALF: &str = include_str!("../fixtures/contact_metric_half.json");
pub const NOT_ACM: &str = include_str!("../fixtures/not_acm.json");

pub const EXP_LINE: &str = include_str!("../fixtures/exp_line.json");
pub const EXP_LOG: &str = include_str!("../fixtures/exp_log.json");
pub const LIN_LINE: &str = include_str!("../fixtures/lin_line.json");
pub const LIN_SQRT: &str = include_str!("../fixtures/lin_sqrt.json");
pub const XI_CURVE: &str = include_str!("../fixtures/xi_curve.json");
pub const NON_LEGENDRE_EXP: &str = include_str!("../fixtures/non_legendre_exp.json");
pub const FAST_LINE: &str = include_str!("../fixtures/fast_line.json");
pub const FLAT_LINE: &str = include_str!("../fixtures/flat_line.json");
pub const FLAT_CIRCLE: &str = include_str!("../fixtures/flat_circle.json");

/// `[{"expr": ..., "offset": ...}]`: malformed expressions and the byte
/// offset the parser must report for each.
pub const GRAMMAR_ERRORS: &str = include_str!("../fixtures/grammar_errors.json");

/// Stems accepted by [`builtin`].
pub const NAMES: [&str; 14] = [
    "exp_warped",
    "lin_warped",
    "cosymplectic_flat",
    "contact_metric_half",
    "not_acm",
    "exp_line",
    "exp_log",
    "lin_line",
    "lin_sqrt",
    "xi_curve",
    "non_legendre_exp",
    "fast_line",
    "flat_line",
    "flat_circle",
];

/// Look up a built-in file by its stem, e.g. `"exp_warped"` or `"lin_sqrt"`.
pub fn builtin(name: &str) -> Option<&'static str> {
    Some(match name {
        "exp_warped" => EXP_WARPED,
        "lin_warped" => LIN_WARPED,
        "cosymplectic_flat" => COSYMPLECTIC_FLAT,
        "contact_metric_half" => CONTACT_METRIC_HALF,
        "not_acm" => NOT_ACM,
        "exp_line" => EXP_LINE,
        "exp_log" => EXP_LOG,
        "lin_line" => LIN_LINE,
        "lin_sqrt" => LIN_SQRT,
        "xi_curve" => XI_CURVE,
        "non_legendre_exp" => NON_LEGENDRE_EXP,
        "fast_line" => FAST_LINE,
        "flat_line" => FLAT_LINE,
        "flat_circle" => FLAT_CIRCLE,
        _ => return None,
    })
}
