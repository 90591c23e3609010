use acm_core::reproduce::{format_table, Criterion, Suite, DEFAULT_SEED};

fn verdicts(cs: &[Criterion]) -> Vec<bool> {
    cs.iter().map(Criterion::pass).collect()
}

#[test]
fn builtin_verdicts() {
    let cs = Suite::builtin(DEFAULT_SEED).run();
    assert_eq!(
        verdicts(&cs),
        [true, true, true, false, false, false, true, true, true]
    );
    let ids: Vec<&str> = cs.iter().map(|c| c.id).collect();
    assert_eq!(ids, ["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"]);
}

#[test]
fn failing_checks_are_the_expected_ones() {
    let s = Suite::builtin(DEFAULT_SEED);
    let failing = |c: Criterion| -> Vec<String> {
        c.checks
            .into_iter()
            .filter(|k| !k.pass)
            .map(|k| k.name)
            .collect()
    };
    assert_eq!(
        failing(s.claimed_frenet()),
        [
            "exp_line.kappa",
            "exp_line.tau",
            "lin_line.kappa",
            "lin_line.tau",
            "lin_sqrt.kappa"
        ]
    );
    assert_eq!(failing(s.proposition()), ["lin_line.kappa", "lin_line.tau"]);
    assert_eq!(
        failing(s.theorem()),
        ["lin_line.decomposition", "lin_line.tau"]
    );
}

#[test]
fn corrupted_metric_fails_only_where_it_should() {
    let mut s = Suite::builtin(DEFAULT_SEED);
    // g(ξ, ξ) = 2 breaks η = g(·, ξ) and the φ-compatibility
    s.exp_warped = s
        .exp_warped
        .replacen(r#"["-y", "0", "1"]"#, r#"["-y", "0", "2"]"#, 1);
    assert_ne!(s.exp_warped, Suite::builtin(DEFAULT_SEED).exp_warped);
    let c1 = s.axioms();
    assert!(!c1.pass());
    let bad: Vec<&str> = c1
        .checks
        .iter()
        .filter(|k| !k.pass)
        .map(|k| k.name.as_str())
        .collect();
    assert!(bad.contains(&"exp_warped.axioms"));
    assert!(bad.iter().all(|n| n.starts_with("exp_warped.")));
    assert!(s.sigma_ode().pass());
    assert!(s.round_trip().pass());
    assert!(s.christoffel().pass());
}

#[test]
fn unparseable_curve_becomes_a_failed_check() {
    let mut s = Suite::builtin(DEFAULT_SEED);
    s.curves[1].source = s.curves[1].source.replacen("ln(t)", "ln(t", 1);
    let c3 = s.legendre();
    let k = c3
        .checks
        .iter()
        .find(|k| k.name == "exp_log.max_eta")
        .unwrap();
    assert!(!k.pass && k.residual.is_none());
    assert!(k.note.as_deref().unwrap().contains("components[0]"));
}

#[test]
fn bad_grammar_fixture_is_caught() {
    let mut s = Suite::builtin(DEFAULT_SEED);
    s.grammar_errors = r#"[{"expr": "x + w", "offset": 3}]"#.into();
    let c9 = s.round_trip();
    assert!(!c9.pass());
}

#[test]
fn suite_is_deterministic() {
    let a = format_table(&Suite::builtin(DEFAULT_SEED).run());
    let b = format_table(&Suite::builtin(DEFAULT_SEED).run());
    assert_eq!(a, b);
    assert_eq!(a.lines().filter(|l| !l.starts_with(' ')).count(), 9);
    // another seed moves the sample points but not the verdicts
    assert_eq!(
        verdicts(&Suite::builtin(7).run()),
        verdicts(&Suite::builtin(DEFAULT_SEED).run())
    );
}
