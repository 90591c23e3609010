use rayon::prelude::*;
use serde::Serialize;

use super::chart::Point;
use super::checks::{ContactIdentityResiduals, Verdict};
use super::manifold::{FieldSample, Manifold};
use super::tensor::{basis, dot, mat_vec, max_residual};
use super::GeometryError;
use crate::expr::Jet;

/// A least-squares defect at or above this marks the structure as not
/// trans-Sasakian.
pub const FIT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub beta: f64,
    /// Max component of α A + β B − (∇φ) over the 27 equations.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subtype {
    Cosymplectic,
    AlphaSasakian,
    BetaKenmotsu,
    TransSasakian,
    NotTransSasakian,
}

impl Subtype {
    pub fn label(self) -> &'static str {
        match self {
            Subtype::Cosymplectic => "cosymplectic",
            Subtype::AlphaSasakian => "alpha-Sasakian",
            Subtype::BetaKenmotsu => "beta-Kenmotsu",
            Subtype::TransSasakian => "trans-Sasakian",
            Subtype::NotTransSasakian => "not-trans-Sasakian",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransSasakianFit {
    pub points: Vec<Point>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub fit_residual: f64,
    /// (∇_X η)(Y) + α g(φX, Y) − β g(φX, φY) with the fitted α, β.
    pub eta_derivative_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub acm: Verdict,
    pub contact_metric: Verdict,
    pub normal: Verdict,
    pub trans_sasakian: Option<TransSasakianFit>,
    pub subtype: Subtype,
    /// Evaluated always; only meaningful when `contact_metric.holds`.
    pub contact_identities: ContactIdentityResiduals,
}

/// Least-squares fit of
/// (∇_X φ)Y = α (g(X, Y) ξ − η(Y) X) + β (g(φX, Y) ξ − η(Y) φX)
/// over all nine coordinate pairs, done in jet arithmetic so the fitted
/// α and β carry derivatives along a curve when the sample does.
pub fn fit_alpha_beta(s: &FieldSample) -> Result<(Jet, Jet, f64), GeometryError> {
    let mut rows: Vec<(Jet, Jet, Jet)> = Vec::with_capacity(27);
    for i in 0..3 {
        let ei = basis(i);
        let phi_ei = mat_vec(&s.phi, &ei);
        for j in 0..3 {
            let ej = basis(j);
            let g_xy = dot(&s.g, &ei, &ej);
            let g_phix_y = dot(&s.g, &phi_ei, &ej);
            let eta_y = s.eta[j];
            for k in 0..3 {
                let a = g_xy * s.xi[k] - eta_y * ei[k];
                let b = g_phix_y * s.xi[k] - eta_y * phi_ei[k];
                rows.push((a, b, s.nabla_phi[i][j][k]));
            }
        }
    }
    let mut aa = Jet::zero(0);
    let mut ab = Jet::zero(0);
    let mut bb = Jet::zero(0);
    let mut ar = Jet::zero(0);
    let mut br = Jet::zero(0);
    for (a, b, r) in &rows {
        aa += *a * *a;
        ab += *a * *b;
        bb += *b * *b;
        ar += *a * *r;
        br += *b * *r;
    }
    let det = aa * bb - ab * ab;
    let scale = aa.value() * bb.value();
    if !(det.value().abs() > 1e-12 * scale.max(1e-300)) {
        return Err(GeometryError::SingularFit { point: s.point });
    }
    let singular = |_| GeometryError::SingularFit { point: s.point };
    let alpha = (ar * bb - br * ab).checked_div(&det).map_err(singular)?;
    let beta = (aa * br - ab * ar).checked_div(&det).map_err(singular)?;
    let residual = rows.iter().fold(0.0, |m, (a, b, r)| {
        let d = a.value() * alpha.value() + b.value() * beta.value() - r.value();
        max_residual(m, d.abs())
    });
    Ok((alpha, beta, residual))
}

fn eta_derivative_at(s: &FieldSample, alpha: f64, beta: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let phi_ei = mat_vec(&s.phi, &basis(i));
        for j in 0..3 {
            let ej = basis(j);
            let phi_ej = mat_vec(&s.phi, &ej);
            let lhs = s.nabla_eta[i][j].value();
            let rhs = -alpha * dot(&s.g, &phi_ei, &ej).value()
                + beta * dot(&s.g, &phi_ei, &phi_ej).value();
            worst = max_residual(worst, (lhs - rhs).abs());
        }
    }
    worst
}

impl Manifold {
    pub fn extract_alpha_beta(&self, p: &Point) -> Result<AlphaBeta, GeometryError> {
        let (alpha, beta, residual) = fit_alpha_beta(&self.sample_point(p)?)?;
        Ok(AlphaBeta {
            alpha: alpha.value(),
            beta: beta.value(),
            residual,
        })
    }

    /// Max residual of the η-derivative identity using the (α, β) fitted
    /// at each point.
    pub fn eta_derivative_residual(&self, points: &[Point]) -> Result<f64, GeometryError> {
        let per: Vec<f64> = points
            .par_iter()
            .map(|p| {
                let s = self.sample_point(p)?;
                let (a, b, _) = fit_alpha_beta(&s)?;
                Ok(eta_derivative_at(&s, a.value(), b.value()))
            })
            .collect::<Result<_, GeometryError>>()?;
        Ok(per.into_iter().fold(0.0, max_residual))
    }

    /// Run every predicate over `points` and name the subtype. `tol`
    /// applies to identity residuals and to deciding α ≡ 0, β ≡ 0; the
    /// trans-Sasakian fit itself is judged against [`FIT_TOL`].
    pub fn classify(
        &self,
        points: &[Point],
        tol: f64,
    ) -> Result<ClassificationReport, GeometryError> {
        let acm = self.verify_acm_axioms(points)?.verdict(tol);
        let contact_metric = self.is_contact_metric(points, tol)?;
        let normal = self.is_normal(points, tol)?;
        let contact_identities = self.contact_identities(points)?;

        let fits: Result<Vec<(AlphaBeta, f64)>, GeometryError> = points
            .par_iter()
            .map(|p| {
                let s = self.sample_point(p)?;
                let (a, b, r) = fit_alpha_beta(&s)?;
                let ab = AlphaBeta {
                    alpha: a.value(),
                    beta: b.value(),
                    residual: r,
                };
                Ok((ab, eta_derivative_at(&s, ab.alpha, ab.beta)))
            })
            .collect();
        let trans_sasakian = match fits {
            Ok(fits) => Some(TransSasakianFit {
                points: points.to_vec(),
                alpha: fits.iter().map(|f| f.0.alpha).collect(),
                beta: fits.iter().map(|f| f.0.beta).collect(),
                fit_residual: fits.iter().fold(0.0, |m, f| max_residual(m, f.0.residual)),
                eta_derivative_residual: fits.iter().fold(0.0, |m, f| max_residual(m, f.1)),
            }),
            Err(GeometryError::SingularFit { .. }) => None,
            Err(e) => return Err(e),
        };
        let subtype = match &trans_sasakian {
            Some(fit) if acm.holds && fit.fit_residual < FIT_TOL => {
                let max_a = fit.alpha.iter().fold(0.0, |m: f64, a| m.max(a.abs()));
                let max_b = fit.beta.iter().fold(0.0, |m: f64, b| m.max(b.abs()));
                match (max_a < tol, max_b < tol) {
                    (true, true) => Subtype::Cosymplectic,
                    (false, true) => Subtype::AlphaSasakian,
                    (true, false) => Subtype::BetaKenmotsu,
                    (false, false) => Subtype::TransSasakian,
                }
            }
            _ => Subtype::NotTransSasakian,
        };
        Ok(ClassificationReport {
            acm,
            contact_metric,
            normal,
            trans_sasakian,
            subtype,
            contact_identities,
        })
    }
}
