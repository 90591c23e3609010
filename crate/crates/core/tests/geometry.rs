#![allow(clippy::needless_range_loop)]

use acm_core::expr::{parse_expr, EvalContext, Expr};
use acm_core::fixtures;
use acm_core::geometry::connection::{apply, directional, inner};
use acm_core::geometry::{
    cov_deriv_vec, lie_bracket, AcmStructure, Manifold, Point, Subtype, Vector,
};
use acm_core::reproduce;

const SEED: u64 = 0xAC3;

fn manifold(src: &str) -> Manifold {
    Manifold::new(AcmStructure::from_json(src).unwrap()).unwrap()
}

fn at(m: &Manifold, e: &Expr, p: &Point) -> f64 {
    e.eval_f64(&EvalContext::at_point(&m.chart().names(), p))
        .unwrap()
}

fn christoffel_fd(m: &Manifold, p: &Point) -> [[[f64; 3]; 3]; 3] {
    reproduce::christoffel_fd(m, p).unwrap()
}

#[test]
fn christoffel_matches_finite_differences() {
    for src in [fixtures::EXP_WARPED, fixtures::LIN_WARPED] {
        let m = manifold(src);
        for p in m.chart().random_points(20, SEED) {
            let fd = christoffel_fd(&m, &p);
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        let sym = at(&m, &m.christoffel.gamma[k][i][j], &p);
                        let err = (sym - fd[k][i][j]).abs() / sym.abs().max(1.0);
                        assert!(
                            err < 1e-6,
                            "Γ[{k}][{i}][{j}] at {p:?}: {sym} vs {}",
                            fd[k][i][j]
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn christoffel_at_origin_of_exp_warped() {
    let m = manifold(fixtures::EXP_WARPED);
    let p = [0.0, 0.0, 0.0];
    let fd = christoffel_fd(&m, &p);
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let sym = at(&m, &m.christoffel.gamma[k][i][j], &p);
                assert!((sym - fd[k][i][j]).abs() < 1e-6);
            }
        }
    }
}

fn poly_field(seed: f64) -> Vector {
    let src = [
        format!("{seed}*x*y + z"),
        format!("y^2 - {seed}*z*x"),
        format!("x + {seed}*y*z^2"),
    ];
    src.map(|s| parse_expr(&s, &["x", "y", "z"]).unwrap())
}

#[test]
fn connection_is_metric_and_torsion_free() {
    for src in [fixtures::EXP_WARPED, fixtures::LIN_WARPED] {
        let m = manifold(src);
        let names = m.chart().names();
        let g = &m.structure.g;
        let (x, y, z) = (poly_field(0.3), poly_field(-1.1), poly_field(2.0));
        let metricity = directional(&x, &inner(g, &y, &z), &names)
            - inner(g, &cov_deriv_vec(&m.christoffel, &x, &y, &names), &z)
            - inner(g, &y, &cov_deriv_vec(&m.christoffel, &x, &z, &names));
        let nxy = cov_deriv_vec(&m.christoffel, &x, &y, &names);
        let nyx = cov_deriv_vec(&m.christoffel, &y, &x, &names);
        let br = lie_bracket(&x, &y, &names);
        for p in m.chart().random_points(100, SEED) {
            let scale = 1.0 + at(&m, &inner(g, &x, &x), &p).abs();
            assert!(at(&m, &metricity, &p).abs() < 1e-9 * scale);
            for k in 0..3 {
                let t = at(&m, &nxy[k], &p) - at(&m, &nyx[k], &p) - at(&m, &br[k], &p);
                assert!(t.abs() < 1e-9 * scale, "torsion {t}");
            }
        }
    }
}

#[test]
fn jacobi_identity() {
    let names = ["x", "y", "z"];
    let (x, y, z) = (poly_field(0.5), poly_field(-0.7), poly_field(1.3));
    let b = |a: &Vector, c: &Vector| lie_bracket(a, c, &names);
    let terms = [b(&x, &b(&y, &z)), b(&y, &b(&z, &x)), b(&z, &b(&x, &y))];
    let m = manifold(fixtures::EXP_WARPED);
    for p in m.chart().random_points(25, SEED) {
        for k in 0..3 {
            let s: f64 = terms.iter().map(|t| at(&m, &t[k], &p)).sum();
            assert!(s.abs() < 1e-9, "{s}");
        }
    }
}

#[test]
fn shipped_structures_satisfy_axioms() {
    for src in [fixtures::EXP_WARPED, fixtures::LIN_WARPED] {
        let m = manifold(src);
        let pts = m.chart().random_points(100, SEED);
        let ax = m.verify_acm_axioms(&pts).unwrap();
        assert!(ax.max_residual() < 1e-9, "{ax:?}");
        assert!(ax.min_leading_minor > 0.0);
        assert!(m.phi_derivative_identity_residual(&pts).unwrap() < 1e-8);
        assert!(m.normality_residual(&pts).unwrap() < 1e-8);
        assert!(m.eta_derivative_residual(&pts).unwrap() < 1e-8);
        assert!(m.two_form_antisymmetry(&pts).unwrap() < 1e-12);
    }
}

#[test]
fn phi_squared_at_origin() {
    let m = manifold(fixtures::EXP_WARPED);
    let ax = m
        .verify_acm_axioms(&[[0.0, 0.0, 0.0], [0.5, 1.5, 1.0]])
        .unwrap();
    assert_eq!(ax.phi_squared, 0.0);
    assert_eq!(ax.eta_metric_dual, 0.0);
}

#[test]
fn phi_zero_fails_the_square_axiom() {
    let m = manifold(fixtures::NOT_ACM);
    let pts = m.chart().random_points(10, SEED);
    let ax = m.verify_acm_axioms(&pts).unwrap();
    assert_eq!(ax.phi_squared, 1.0);
    assert!(!ax.verdict(1e-8).holds);
    assert_eq!(
        m.classify(&pts, 1e-8).unwrap().subtype,
        Subtype::NotTransSasakian
    );
}

#[test]
fn d_eta_uses_the_half_convention() {
    let m = manifold(fixtures::EXP_WARPED);
    let p = [0.3, -0.7, 1.1];
    let d = m.d_eta_at(&p).unwrap();
    assert_eq!(d[0][1], 0.5);
    assert_eq!(d[1][0], -0.5);
    assert_eq!(d[0][2], 0.0);
    // Φ(∂x, ∂y) = g(∂x, φ∂y) = g(∂x, −∂x − y∂z) = −(ω + y²) + y² = −ω
    let f = m.two_form_at(&p).unwrap();
    assert!((f[0][1] + 1.1f64.exp()).abs() < 1e-14);
    let flat = manifold(fixtures::COSYMPLECTIC_FLAT);
    assert_eq!(flat.d_eta_at(&p).unwrap(), [[0.0; 3]; 3]);
}

#[test]
fn contact_metric_predicate() {
    let m = manifold(fixtures::EXP_WARPED);
    let pts = m.chart().random_points(20, SEED);
    let v = m.is_contact_metric(&pts, 1e-8).unwrap();
    assert!(!v.holds && v.residual > 0.5);

    let c = manifold(fixtures::CONTACT_METRIC_HALF);
    let pts = c.chart().random_points(20, SEED);
    let v = c.is_contact_metric(&pts, 1e-8).unwrap();
    assert!(v.holds, "{v:?}");
    assert!(c.verify_acm_axioms(&pts).unwrap().verdict(1e-8).holds);
    let id = c.contact_identities(&pts).unwrap();
    assert!(id.nabla_xi < 1e-8, "{id:?}");
    assert!(id.h_anticommutes < 1e-8 && id.trace_h < 1e-8 && id.trace_phi_h < 1e-8);

    let flat = manifold(fixtures::COSYMPLECTIC_FLAT);
    let pts = flat.chart().random_points(5, SEED);
    assert!(!flat.is_contact_metric(&pts, 1e-8).unwrap().holds);
}

#[test]
fn h_vanishes_without_phi() {
    let m = manifold(fixtures::NOT_ACM);
    assert!(m.h.iter().flatten().all(Expr::is_zero));
}

#[test]
fn nijenhuis_is_antisymmetric() {
    let m = manifold(fixtures::LIN_WARPED);
    for p in m.chart().random_points(10, SEED) {
        for i in 0..3 {
            for j in 0..3 {
                let a = m.nijenhuis_at(&p, i, j).unwrap();
                let b = m.nijenhuis_at(&p, j, i).unwrap();
                for k in 0..3 {
                    assert!((a[k] + b[k]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn nabla_phi_is_linear_in_the_second_slot() {
    use acm_core::geometry::connection::coordinate_field;
    let m = manifold(fixtures::EXP_WARPED);
    let s = &m.structure;
    let names = s.chart.names();
    let y = poly_field(0.8);
    let phi_y = apply(&s.phi, &y);
    let direct: Vector = {
        let a = cov_deriv_vec(&m.christoffel, &coordinate_field(0), &phi_y, &names);
        let b = apply(
            &s.phi,
            &cov_deriv_vec(&m.christoffel, &coordinate_field(0), &y, &names),
        );
        std::array::from_fn(|k| &a[k] - &b[k])
    };
    for p in m.chart().random_points(10, SEED) {
        for k in 0..3 {
            // (∇_∂x φ) is tensorial: (∇_∂x φ)(Y) = Σ_j Y^j (∇_∂x φ)(∂j)
            let combo: f64 = (0..3)
                .map(|j| at(&m, &y[j], &p) * at(&m, &m.nabla_phi[0][j][k], &p))
                .sum();
            assert!((at(&m, &direct[k], &p) - combo).abs() < 1e-9);
        }
    }
}

#[test]
fn alpha_beta_of_exp_warped() {
    let m = manifold(fixtures::EXP_WARPED);
    let ab = m.extract_alpha_beta(&[0.0, 0.0, 0.0]).unwrap();
    assert!((ab.alpha + 0.5).abs() < 1e-12);
    assert!((ab.beta - 0.5).abs() < 1e-12);
    assert!(ab.residual < 1e-8);
    for p in m.chart().random_points(50, SEED) {
        let ab = m.extract_alpha_beta(&p).unwrap();
        assert!((ab.alpha * p[2].exp() + 0.5).abs() < 1e-8);
        assert!((ab.beta - 0.5).abs() < 1e-8);
    }
}

#[test]
fn alpha_beta_of_lin_warped() {
    let m = manifold(fixtures::LIN_WARPED);
    let ab = m.extract_alpha_beta(&[0.0, 0.0, 1.0]).unwrap();
    assert!((ab.alpha + 0.5).abs() < 1e-12);
    assert!((ab.beta - 0.5).abs() < 1e-12);
    for p in m.chart().random_points(50, SEED) {
        let ab = m.extract_alpha_beta(&p).unwrap();
        assert!((ab.alpha * 2.0 * p[2] + 1.0).abs() < 1e-8);
        assert!((ab.beta * 2.0 * p[2] - 1.0).abs() < 1e-8);
    }
}

#[test]
fn classification_of_shipped_structures() {
    let m = manifold(fixtures::EXP_WARPED);
    let pts = m.chart().random_points(30, SEED);
    let r = m.classify(&pts, 1e-8).unwrap();
    assert_eq!(r.subtype, Subtype::TransSasakian);
    assert!(r.acm.holds && r.normal.holds && !r.contact_metric.holds);
    let fit = r.trans_sasakian.unwrap();
    let spread = fit.beta.iter().fold(0.0f64, |m, b| m.max((b - 0.5).abs()));
    assert!(spread < 1e-8);
    assert!(fit
        .alpha
        .iter()
        .zip(&pts)
        .all(|(a, p)| (a * p[2].exp() + 0.5).abs() < 1e-8));

    let flat = manifold(fixtures::COSYMPLECTIC_FLAT);
    let pts = flat.chart().random_points(10, SEED);
    let r = flat.classify(&pts, 1e-8).unwrap();
    assert_eq!(r.subtype, Subtype::Cosymplectic);
    assert!(r.normal.holds);
    assert!(flat.extract_alpha_beta(&pts[0]).unwrap().alpha.abs() < 1e-15);

    let c = manifold(fixtures::CONTACT_METRIC_HALF);
    let pts = c.chart().random_points(10, SEED);
    let r = c.classify(&pts, 1e-8).unwrap();
    assert_eq!(r.subtype, Subtype::AlphaSasakian);
}

#[test]
fn classification_is_deterministic_under_parallelism() {
    let m = manifold(fixtures::LIN_WARPED);
    let pts = m.chart().random_points(64, SEED);
    let a = serde_json::to_string(&m.classify(&pts, 1e-8).unwrap()).unwrap();
    let b = serde_json::to_string(&m.classify(&pts, 1e-8).unwrap()).unwrap();
    assert_eq!(a, b);
}
