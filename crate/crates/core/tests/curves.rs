use acm_core::curves::{check_unit_speed, CurveError, CurveSpec, LEGENDRE_TOL};
use acm_core::fixtures;
use acm_core::geometry::{AcmStructure, Manifold};
use proptest::prelude::*;

fn manifold(src: &str) -> Manifold {
    Manifold::new(AcmStructure::from_json(src).unwrap()).unwrap()
}

fn curve(src: &str) -> CurveSpec {
    CurveSpec::from_json(src).unwrap()
}

fn exp_warped() -> Manifold {
    manifold(fixtures::EXP_WARPED)
}

fn lin_warped() -> Manifold {
    manifold(fixtures::LIN_WARPED)
}

#[test]
fn unit_speed_of_shipped_curves() {
    assert_eq!(
        check_unit_speed(&exp_warped(), &curve(fixtures::EXP_LINE)).unwrap(),
        0.0
    );
    assert!(check_unit_speed(&exp_warped(), &curve(fixtures::EXP_LOG)).unwrap() < 1e-10);
    assert!(check_unit_speed(&lin_warped(), &curve(fixtures::LIN_SQRT)).unwrap() < 1e-10);
    assert!(check_unit_speed(&exp_warped(), &curve(fixtures::NON_LEGENDRE_EXP)).unwrap() < 1e-10);
}

#[test]
fn fast_line_is_rejected() {
    let flat = manifold(fixtures::COSYMPLECTIC_FLAT);
    let c = curve(fixtures::FAST_LINE);
    assert_eq!(check_unit_speed(&flat, &c).unwrap(), 3.0);
    let err = flat.frenet_apparatus(&c, 0.5).unwrap_err();
    assert!(matches!(err, CurveError::NotUnitSpeed { residual, .. } if residual == 3.0));
    assert!(!err.is_input_error());
}

#[test]
fn shipped_curves_are_legendre() {
    for (m, c) in [
        (exp_warped(), fixtures::EXP_LINE),
        (exp_warped(), fixtures::EXP_LOG),
        (lin_warped(), fixtures::LIN_LINE),
        (lin_warped(), fixtures::LIN_SQRT),
    ] {
        let r = m.is_almost_contact(&curve(c), 1e-12).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.samples, 50);
    }
}

#[test]
fn lin_line_sits_outside_its_manifold() {
    let m = lin_warped();
    let c = curve(fixtures::LIN_LINE);
    let r = m.is_almost_contact(&c, 1e-12).unwrap();
    assert!(r.holds && !r.in_domain && !r.preconditions_hold());
    assert_eq!(r.unit_speed_residual, 1.0);
    assert!(matches!(
        m.frenet_apparatus(&c, 1.0),
        Err(CurveError::OutsideDomain { .. })
    ));
}

#[test]
fn xi_curve_is_not_legendre() {
    let r = exp_warped()
        .is_almost_contact(&curve(fixtures::XI_CURVE), 1e-12)
        .unwrap();
    assert!(!r.holds);
    assert!((r.max_eta - 1.0).abs() < 1e-15);
}

#[test]
fn collinear_tangent_is_a_precondition_error() {
    let err = exp_warped()
        .decompose_acceleration(&curve(fixtures::XI_CURVE), 0.5)
        .unwrap_err();
    assert!(matches!(err, CurveError::CollinearWithXi { .. }));
}

#[test]
fn frenet_of_exp_log() {
    let m = exp_warped();
    let c = curve(fixtures::EXP_LOG);
    for f in m.frenet_samples(&c).unwrap() {
        assert!((f.kappa - 0.5).abs() < 1e-12);
        assert!((f.tau - 1.0 / (2.0 * f.t * f.t)).abs() < 1e-10);
        assert!(f.n_defined() && f.b_defined());
        assert!(f.orthonormality < 1e-8);
    }
}

#[test]
fn frenet_of_exp_line_measured() {
    // κ = √(1 + t²)/2 and τ = |1 − t²| / (2(1 + t²)), from an independent
    // symbolic computation; κ = τ = ½ only at t = 0.
    let m = exp_warped();
    let c = curve(fixtures::EXP_LINE);
    for f in m.frenet_samples(&c).unwrap() {
        let t = f.t;
        assert!((f.kappa - (1.0 + t * t).sqrt() / 2.0).abs() < 1e-12);
        if (t - 1.0).abs() > 1e-6 {
            assert!((f.tau - (1.0 - t * t).abs() / (2.0 * (1.0 + t * t))).abs() < 1e-10);
        }
    }
    let f = m.frenet_apparatus(&c, 1.0).unwrap();
    assert!(f.tau < 1e-12 && !f.b_defined());
}

#[test]
fn frenet_of_lin_sqrt_measured() {
    let m = lin_warped();
    let c = curve(fixtures::LIN_SQRT);
    for f in m.frenet_samples(&c).unwrap() {
        let t = f.t;
        assert!((f.tau - 1.0 / (2.0 * t)).abs() < 1e-10);
        assert!((f.kappa - 2f64.sqrt() / (2.0 * t)).abs() < 1e-10);
    }
}

#[test]
fn flat_line_is_a_geodesic() {
    let flat = manifold(fixtures::COSYMPLECTIC_FLAT);
    let c = curve(fixtures::FLAT_LINE);
    let f = flat.frenet_apparatus(&c, 0.3).unwrap();
    assert_eq!(f.kappa, 0.0);
    assert!(!f.n_defined() && !f.b_defined());
    let d = flat.decompose_acceleration(&c, 0.3).unwrap();
    assert_eq!((d.p, d.q), (0.0, 0.0));
    assert!(matches!(
        flat.proposition(&c, 0.3),
        Err(CurveError::Geodesic { .. })
    ));
}

#[test]
fn flat_circle_has_unit_curvature() {
    let flat = manifold(fixtures::COSYMPLECTIC_FLAT);
    let c = curve(fixtures::FLAT_CIRCLE);
    for f in flat.frenet_samples(&c).unwrap() {
        assert!((f.kappa - 1.0).abs() < 1e-12);
        assert!(f.tau < 1e-12);
    }
    // cosymplectic with constant ϑ and β = 0: τ = |α| = 0
    let p = flat.proposition(&c, 1.0).unwrap();
    assert!(p.tau_formula < 1e-12 && (p.kappa_formula - 1.0).abs() < 1e-12);
}

#[test]
fn frenet_closure() {
    for (m, c) in [
        (exp_warped(), fixtures::EXP_LINE),
        (exp_warped(), fixtures::EXP_LOG),
        (lin_warped(), fixtures::LIN_SQRT),
        (exp_warped(), fixtures::NON_LEGENDRE_EXP),
    ] {
        let c = curve(c);
        for t in c.sample_params() {
            if let Some(r) = m.frenet_closure_residual(&c, t, 1e-4).unwrap() {
                assert!(r < 1e-6, "{:?} t = {t}: {r}", c.name);
            }
        }
    }
}

#[test]
fn legendre_decomposition() {
    let m = exp_warped();
    let c = curve(fixtures::EXP_LINE);
    for t in c.sample_params() {
        let d = m.decompose_acceleration(&c, t).unwrap();
        assert_eq!(d.sigma, 0.0);
        assert!((d.q + d.beta).abs() < 1e-12);
        assert_eq!(d.theta, Some(d.p));
        assert!((d.p - t / 2.0).abs() < 1e-12);
        assert!(d.residual < 1e-8);
    }
}

#[test]
fn proposition_matches_frenet() {
    for (m, c) in [
        (exp_warped(), fixtures::EXP_LINE),
        (exp_warped(), fixtures::EXP_LOG),
        (lin_warped(), fixtures::LIN_SQRT),
    ] {
        let c = curve(c);
        for t in c.sample_params() {
            let p = m.proposition(&c, t).unwrap();
            assert!((p.kappa_frenet - p.kappa_formula).abs() < 1e-8);
            assert!((p.tau_frenet - p.tau_formula).abs() < 1e-7, "{p:?}");
            let prop = p.prop_p.hypot(p.prop_q);
            assert!((prop - p.tau_frenet).abs() < 1e-7, "{p:?}");
        }
    }
}

#[test]
fn sigma_prime_identity_off_the_distribution() {
    let m = exp_warped();
    let c = curve(fixtures::NON_LEGENDRE_EXP);
    for t in c.sample_params() {
        let d = m.decompose_acceleration(&c, t).unwrap();
        let sigma = 2.0 * t / (1.0 + t * t);
        assert!((d.sigma - sigma).abs() < 1e-12);
        assert!(d.theta.is_none());
        assert!(d.residual < 1e-8);
        assert!(m.verify_sigma_prime(&c, t).unwrap() < 1e-7);
    }
    assert!(matches!(
        m.proposition(&c, 0.4),
        Err(CurveError::NotLegendre { .. })
    ));
}

#[test]
fn theorem_torsion_reduces_on_legendre_curves() {
    for (m, c) in [
        (exp_warped(), fixtures::EXP_LINE),
        (exp_warped(), fixtures::EXP_LOG),
        (lin_warped(), fixtures::LIN_SQRT),
    ] {
        let c = curve(c);
        for t in c.sample_params() {
            let th = m.theorem_torsion(&c, t).unwrap();
            let pr = m.proposition(&c, t).unwrap();
            assert!((th.tau_formula - pr.tau_formula).abs() < 1e-7);
            assert!((th.tau_formula - th.tau_frenet).abs() < 1e-7);
        }
    }
}

#[test]
fn theorem_torsion_normalization_off_the_distribution() {
    let m = exp_warped();
    let c = curve(fixtures::NON_LEGENDRE_EXP);
    for t in c.sample_params() {
        let th = m.theorem_torsion(&c, t).unwrap();
        let s = (1.0 - th.sigma * th.sigma).sqrt();
        assert!((th.tau_normalized - th.tau_frenet).abs() < 1e-8, "{th:?}");
        assert!((th.tau_formula * s - th.tau_frenet).abs() < 1e-8);
    }
}

#[test]
fn theorem_coefficients_on_legendre_curves() {
    let m = lin_warped();
    let c = curve(fixtures::LIN_SQRT);
    for t in c.sample_params() {
        let k = m.theorem_coefficients(&c, t).unwrap();
        assert!((k.l1 - 1.0).abs() < 1e-15);
        assert!(k.l2.abs() < 1e-12);
        // β/p = (1/2t)/(1/2t) is constant
        assert!(k.l3.abs() < 1e-12);
    }
    let c = curve(fixtures::EXP_LOG);
    assert!(matches!(
        exp_warped().theorem_coefficients(&c, 1.0),
        Err(CurveError::PVanishes { .. })
    ));
}

#[test]
fn bad_curve_files() {
    let bad = r#"{"domain": [1, 0], "samples": 5, "components": ["t", "0", "0"]}"#;
    assert!(matches!(
        CurveSpec::from_json(bad),
        Err(CurveError::Invalid(_))
    ));
    let bad = r#"{"domain": [0, 1], "samples": 2, "components": ["t", "0", "0"]}"#;
    assert!(matches!(
        CurveSpec::from_json(bad),
        Err(CurveError::Invalid(_))
    ));
    let bad = r#"{"domain": [0, 1], "samples": 5, "components": ["t", "s", "0"]}"#;
    let e = CurveSpec::from_json(bad).unwrap_err();
    assert!(e.is_input_error());
    assert_eq!(e.expr_offset(), Some(0));
    assert!(e.to_string().contains("components[1]"));
}

#[test]
fn curve_file_round_trip() {
    let c = curve(fixtures::LIN_SQRT);
    let back = CurveSpec::from_file(&c.to_file()).unwrap();
    assert_eq!(back.components, c.components);
    assert_eq!(back.domain, c.domain);
}

proptest! {
    // On both shipped manifolds η = dz − y dx, so η(γ′) = ż − y ẋ.
    #[test]
    fn legendre_condition_in_coordinates(
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
    ) {
        let src = format!(
            r#"{{"domain": [0.5, 1.5], "samples": 7,
                "components": ["{a}*t^2", "{b}*t + {c}", "1 + {d}*t^3"]}}"#
        );
        let cv = curve(&src);
        let r = exp_warped().is_almost_contact(&cv, LEGENDRE_TOL).unwrap();
        let direct = cv
            .sample_params()
            .into_iter()
            .map(|t| (3.0 * d * t * t - (b * t + c) * 2.0 * a * t).abs())
            .fold(0.0, f64::max);
        prop_assert!((r.max_eta - direct).abs() <= 1e-12 * (1.0 + direct));
    }
}
