use serde::Serialize;

use super::frenet::frame;
use super::{
    trunc, unit_local, CurveError, CurveSpec, Local, COLLINEAR_MARGIN, GEODESIC_TOL, LEGENDRE_TOL,
};
use crate::expr::{EvalError, Jet, JetError};
use crate::geometry::fit_alpha_beta;
use crate::geometry::tensor::{dot, mat_vec, JVec};
use crate::geometry::Manifold;

/// |p| below this is treated as p = 0 where p appears in a denominator.
pub const P_TOL: f64 = 1e-10;

/// ∇_T T = (p/√(1−σ²)) φT + (q/√(1−σ²)) (ξ − σT), with σ = g(T, ξ).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccelDecomposition {
    pub t: f64,
    pub sigma: f64,
    pub p: f64,
    pub q: f64,
    /// g(∇_T T, φT), reported only when |σ| < [`LEGENDRE_TOL`].
    pub theta: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    /// |∇_T T − (p φT + q (ξ − σT))/√(1−σ²)|_g
    pub residual: f64,
}

/// Curvature and torsion of an almost contact curve from (α, β, ϑ),
/// side by side with the Frenet values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropositionData {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub theta: f64,
    pub theta_prime: f64,
    pub kappa_frenet: f64,
    /// √(β² + ϑ²)
    pub kappa_formula: f64,
    pub tau_frenet: f64,
    /// |α + (βϑ′ − β′ϑ)/κ²|
    pub tau_formula: f64,
    /// ξ and φT components of ∇_T N + κT.
    pub prop_p: f64,
    pub prop_q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremTorsion {
    pub t: f64,
    pub sigma: f64,
    pub p: f64,
    pub q: f64,
    pub p_prime: f64,
    pub q_prime: f64,
    pub alpha: f64,
    /// (1/√(1−σ²)) |(pq′ − p′q)/k² + pσ/√(1−σ²) + α|, k² = p² + q²
    pub tau_formula: f64,
    /// The bracket alone. φT and ξ − σT have g-norm √(1−σ²), so this is
    /// what |∇_T N + kT| works out to; it differs from `tau_formula` by
    /// the factor 1/√(1−σ²) off the contact distribution.
    pub tau_normalized: f64,
    pub tau_frenet: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremCoefficients {
    pub t: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub alpha: f64,
    pub beta: f64,
    /// |l1 α + l2 β + l3|
    pub combined: f64,
}

fn jet_err(t: f64) -> impl Fn(JetError) -> CurveError {
    move |e| CurveError::Eval {
        t,
        source: EvalError::Domain(e),
    }
}

/// Jets of the decomposition: σ to order 2, p and q to order 1, α and β
/// to order 3.
struct Parts {
    sigma: Jet,
    p: Jet,
    q: Jet,
    /// g(∇_T T, φT), order 1
    theta: Jet,
    alpha: Jet,
    beta: Jet,
    residual: f64,
}

fn parts(l: &Local) -> Result<Parts, CurveError> {
    let t = l.t;
    let f = &l.fields;
    let vel = &l.velocity;
    let sigma = dot(&f.g, vel, &f.xi).truncate(2);
    if !(sigma.value().abs() < 1.0 - COLLINEAR_MARGIN) {
        return Err(CurveError::CollinearWithXi {
            t,
            sigma: sigma.value(),
        });
    }
    let s = (-(sigma * sigma) + 1.0).sqrt().map_err(jet_err(t))?;
    let phi_t = trunc(&mat_vec(&f.phi, vel), 2);
    let perp: JVec = trunc(&std::array::from_fn(|k| f.xi[k] - sigma * vel[k]), 2);
    let theta = dot(&f.g, &l.accel, &phi_t).truncate(1);
    let p = theta.checked_div(&s).map_err(jet_err(t))?.truncate(1);
    let q = dot(&f.g, &l.accel, &perp)
        .checked_div(&s)
        .map_err(jet_err(t))?
        .truncate(1);

    let (ps, qs) = (p.value() / s.value(), q.value() / s.value());
    let r: [f64; 3] =
        std::array::from_fn(|k| l.accel[k].value() - ps * phi_t[k].value() - qs * perp[k].value());
    let rj = r.map(|v| Jet::constant(v, 0));
    let residual = dot(&f.g, &rj, &rj).value().max(0.0).sqrt();

    let (alpha, beta, _) =
        fit_alpha_beta(f).map_err(|source| CurveError::Geometry { t, source })?;
    Ok(Parts {
        sigma,
        p,
        q,
        theta,
        alpha,
        beta,
        residual,
    })
}

impl Manifold {
    pub fn decompose_acceleration(
        &self,
        c: &CurveSpec,
        t: f64,
    ) -> Result<AccelDecomposition, CurveError> {
        let l = unit_local(self, c, t)?;
        let d = parts(&l)?;
        let sigma = d.sigma.value();
        Ok(AccelDecomposition {
            t,
            sigma,
            p: d.p.value(),
            q: d.q.value(),
            theta: (sigma.abs() < LEGENDRE_TOL).then(|| d.theta.value()),
            alpha: d.alpha.value(),
            beta: d.beta.value(),
            residual: d.residual,
        })
    }

    /// |σ′ − β(1 − σ²) − q√(1 − σ²)| with σ′ from the jet of σ.
    pub fn verify_sigma_prime(&self, c: &CurveSpec, t: f64) -> Result<f64, CurveError> {
        let l = unit_local(self, c, t)?;
        let d = parts(&l)?;
        let s = d.sigma.value();
        let rhs = d.beta.value() * (1.0 - s * s) + d.q.value() * (1.0 - s * s).sqrt();
        Ok((d.sigma.derivative(1) - rhs).abs())
    }

    /// Curvature and torsion of an almost contact, non-geodesic curve in
    /// terms of (α, β, ϑ). β′ and ϑ′ are jet derivatives along the curve.
    pub fn proposition(&self, c: &CurveSpec, t: f64) -> Result<PropositionData, CurveError> {
        let l = unit_local(self, c, t)?;
        let d = parts(&l)?;
        if !(d.sigma.value().abs() < LEGENDRE_TOL) {
            return Err(CurveError::NotLegendre {
                t,
                sigma: d.sigma.value(),
            });
        }
        let fr = frame(&l)?;
        let kappa = fr.kappa.value();
        if !(kappa >= GEODESIC_TOL) {
            return Err(CurveError::Geodesic { t, kappa });
        }
        let (alpha, beta, theta) = (d.alpha.value(), d.beta.value(), d.theta.value());
        let (beta_prime, theta_prime) = (d.beta.derivative(1), d.theta.derivative(1));
        let kappa_prime = fr.kappa.derivative(1);
        let k2 = kappa * kappa;
        Ok(PropositionData {
            t,
            alpha,
            beta,
            beta_prime,
            theta,
            theta_prime,
            kappa_frenet: kappa,
            kappa_formula: beta.hypot(theta),
            tau_frenet: fr.tau,
            tau_formula: (alpha + (beta * theta_prime - beta_prime * theta) / k2).abs(),
            prop_p: theta * alpha / kappa - (beta_prime * kappa - beta * kappa_prime) / k2,
            prop_q: alpha * beta / kappa + (theta_prime * kappa - theta * kappa_prime) / k2,
        })
    }

    /// τ from the decomposition (p, q, σ) and α.
    pub fn theorem_torsion(&self, c: &CurveSpec, t: f64) -> Result<TheoremTorsion, CurveError> {
        let l = unit_local(self, c, t)?;
        let d = parts(&l)?;
        let fr = frame(&l)?;
        let (sigma, p, q) = (d.sigma.value(), d.p.value(), d.q.value());
        let k2 = p * p + q * q;
        if !(k2.sqrt() >= GEODESIC_TOL) {
            return Err(CurveError::Geodesic {
                t,
                kappa: k2.sqrt(),
            });
        }
        let (p_prime, q_prime) = (d.p.derivative(1), d.q.derivative(1));
        let s = (1.0 - sigma * sigma).sqrt();
        let alpha = d.alpha.value();
        let bracket = (p * q_prime - p_prime * q) / k2 + p * sigma / s + alpha;
        Ok(TheoremTorsion {
            t,
            sigma,
            p,
            q,
            p_prime,
            q_prime,
            alpha,
            tau_formula: bracket.abs() / s,
            tau_normalized: bracket.abs(),
            tau_frenet: fr.tau,
        })
    }

    /// l1 = 1/√(1−σ²), l2 = −pqσ/(√(1−σ²)(p²+q²)),
    /// l3 = −(p²/(p²+q²)) d/dt(β/p).
    pub fn theorem_coefficients(
        &self,
        c: &CurveSpec,
        t: f64,
    ) -> Result<TheoremCoefficients, CurveError> {
        let l = unit_local(self, c, t)?;
        let d = parts(&l)?;
        let (sigma, p, q) = (d.sigma.value(), d.p.value(), d.q.value());
        if !(p.abs() >= P_TOL) {
            return Err(CurveError::PVanishes { t, p });
        }
        let s = (1.0 - sigma * sigma).sqrt();
        let k2 = p * p + q * q;
        let ratio = d.beta.truncate(1).checked_div(&d.p).map_err(jet_err(t))?;
        let (alpha, beta) = (d.alpha.value(), d.beta.value());
        let l1 = 1.0 / s;
        let l2 = -p * q * sigma / (s * k2);
        let l3 = -(p * p / k2) * ratio.derivative(1);
        Ok(TheoremCoefficients {
            t,
            l1,
            l2,
            l3,
            alpha,
            beta,
            combined: (l1 * alpha + l2 * beta + l3).abs(),
        })
    }
}
