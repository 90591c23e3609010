use acm_core::theorem_lab::{
    convergence_study, first_integral, integrate_sigma, mu_squared, rigidity_probe, rigidity_scan,
    scaled_constant, LabError, OdeConfig, SigmaState, StopReason,
};
use proptest::prelude::*;

#[test]
fn small_amplitude_is_harmonic() {
    // σ″ + p²σ = O(σ³), so σ ≈ ε cos(ps)
    let eps = 1e-6;
    let cfg = OdeConfig::new(2.0, 1e-3, 1000).unwrap();
    let tr = integrate_sigma(SigmaState::new(eps, 0.0), &cfg).unwrap();
    let end = tr.last();
    assert!((end.s - 1.0).abs() < 1e-12);
    assert!((end.sigma - eps * 2f64.cos()).abs() < 1e-16);
    assert!((end.mu + eps * 2f64.sin()).abs() < 1e-16);
}

#[test]
fn flow_is_reversible() {
    let cfg = OdeConfig::new(1.3, 1e-3, 2000).unwrap();
    let start = SigmaState::new(0.4, -0.2);
    let there = *integrate_sigma(start, &cfg).unwrap().last();
    let back = *integrate_sigma(SigmaState::new(there.sigma, -there.mu), &cfg)
        .unwrap()
        .last();
    assert!((back.sigma - start.sigma).abs() < 1e-11);
    assert!((back.mu + start.mu).abs() < 1e-11);
}

#[test]
fn constants_agree_only_for_unit_p() {
    let st = SigmaState::new(0.5, 0.3);
    let u: f64 = 0.75;
    let c = first_integral(&st);
    assert!((c - (0.09 / (u * u) + 1.0 / u)).abs() < 1e-15);
    let unit = OdeConfig::new(-1.0, 1e-3, 1).unwrap();
    assert!((scaled_constant(&st, &unit) - c).abs() < 1e-15);
    let two = OdeConfig::new(2.0, 1e-3, 1).unwrap();
    assert!((scaled_constant(&st, &two) - (0.09 / (4.0 * u) + 1.0) / u).abs() < 1e-15);
    assert!((mu_squared(c, st.sigma) - 0.09).abs() < 1e-15);
}

#[test]
fn rigidity() {
    let scan = rigidity_scan();
    assert!(scan.holds());
    assert_eq!(scan.sigmas.len(), 199);
    let cfg = OdeConfig::new(1.0, 1e-3, 1000).unwrap();
    let probe = rigidity_probe(&cfg, &[1e-2, 1e-4, 1e-3, 1e-1]).unwrap();
    assert!(probe.monotone);
    assert_eq!(probe.rows[0].eps, 1e-4);
    for r in &probe.rows {
        // C − 1 = ε²/(1 − ε²) for a start at rest
        assert!((r.gap - r.eps * r.eps / (1.0 - r.eps * r.eps)).abs() < 1e-15);
        assert_eq!(r.stop, StopReason::MaxSteps);
    }
}

#[test]
fn fourth_order_convergence() {
    let study =
        convergence_study(SigmaState::new(0.3, 0.4), 1.0, 10.0, &[0.1, 0.05, 0.025]).unwrap();
    for o in &study.orders {
        assert!((o - 4.0).abs() < 0.3, "{study:?}");
    }
}

#[test]
fn singular_and_bad_configurations() {
    assert!(matches!(
        OdeConfig::new(0.0, 1e-3, 10),
        Err(LabError::ZeroP(_))
    ));
    assert!(OdeConfig::new(1.0, 0.0, 10).is_err());
    let cfg = OdeConfig::new(1.0, 1e-3, 10).unwrap();
    assert!(integrate_sigma(SigmaState::new(1.0, 0.0), &cfg).is_err());
}

#[test]
fn amplitude_is_bounded_by_the_first_integral() {
    // C ≥ 1/(1 − σ²), so even a fast start never reaches |σ| = 1
    let cfg = OdeConfig::new(1.0, 1e-4, 100_000).unwrap();
    let start = SigmaState::new(0.0, 5.0);
    let tr = integrate_sigma(start, &cfg).unwrap();
    assert_eq!(tr.stop, StopReason::MaxSteps);
    let bound = (1.0 - 1.0 / first_integral(&start)).sqrt();
    assert!(tr.max_abs_sigma() <= bound + 1e-9);
    assert!(tr.max_abs_sigma() > bound - 1e-4);
}

proptest! {
    #[test]
    fn first_integral_is_conserved(sigma in -0.8f64..0.8, mu in -1.0f64..1.0, p in 0.2f64..3.0) {
        let cfg = OdeConfig::new(p, 1e-3, 500).unwrap();
        let tr = integrate_sigma(SigmaState::new(sigma, mu), &cfg).unwrap();
        let c0 = first_integral(&tr.states[0]);
        prop_assert!(tr.drift() < 1e-9 * c0);
    }
}
