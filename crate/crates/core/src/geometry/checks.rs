use rayon::prelude::*;
use serde::Serialize;

use super::chart::Point;
use super::manifold::{FieldSample, Manifold};
use super::tensor::{basis, dot, leading_minors, mat_values, mat_vec, max_residual, JVec};
use super::GeometryError;

/// Flag plus the measured residual that decided it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub residual: f64,
}

impl Verdict {
    pub fn below(residual: f64, tol: f64) -> Self {
        Verdict {
            holds: residual < tol,
            residual,
        }
    }
}

/// Maximum residual of each almost contact metric axiom over a point set,
/// on the coordinate frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct AxiomResiduals {
    /// φ² + I − ξ⊗η
    pub phi_squared: f64,
    /// η(ξ) − 1
    pub eta_of_xi: f64,
    /// φξ
    pub phi_xi: f64,
    /// η∘φ
    pub eta_phi: f64,
    /// g(φX, φY) − g(X, Y) + η(X)η(Y)
    pub metric_compatibility: f64,
    /// g(X, ξ) − η(X)
    pub eta_metric_dual: f64,
    /// Smallest leading principal minor of g; positive definite iff > 0.
    pub min_leading_minor: f64,
}

impl AxiomResiduals {
    pub fn max_residual(&self) -> f64 {
        [
            self.phi_squared,
            self.eta_of_xi,
            self.phi_xi,
            self.eta_phi,
            self.metric_compatibility,
            self.eta_metric_dual,
        ]
        .into_iter()
        .fold(0.0, max_residual)
    }

    pub fn verdict(&self, tol: f64) -> Verdict {
        let r = self.max_residual();
        Verdict {
            holds: r < tol && self.min_leading_minor > 0.0,
            residual: r,
        }
    }

    fn merge(self, o: Self) -> Self {
        AxiomResiduals {
            phi_squared: max_residual(self.phi_squared, o.phi_squared),
            eta_of_xi: max_residual(self.eta_of_xi, o.eta_of_xi),
            phi_xi: max_residual(self.phi_xi, o.phi_xi),
            eta_phi: max_residual(self.eta_phi, o.eta_phi),
            metric_compatibility: max_residual(self.metric_compatibility, o.metric_compatibility),
            eta_metric_dual: max_residual(self.eta_metric_dual, o.eta_metric_dual),
            min_leading_minor: self.min_leading_minor.min(o.min_leading_minor),
        }
    }
}

/// Identities that hold on contact metric manifolds. They are evaluated
/// for any structure but only carry a verdict when the structure is
/// contact metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ContactIdentityResiduals {
    /// ∇_X ξ + φX + φhX
    pub nabla_xi: f64,
    /// hφ + φh
    pub h_anticommutes: f64,
    /// h ξ
    pub h_xi: f64,
    pub trace_h: f64,
    pub trace_phi_h: f64,
}

fn axioms_at(s: &FieldSample) -> AxiomResiduals {
    let phi = mat_values(&s.phi);
    let g = mat_values(&s.g);
    let xi = s.xi.map(|j| j.value());
    let eta = s.eta.map(|j| j.value());
    let mut r = AxiomResiduals::default();
    for k in 0..3 {
        for j in 0..3 {
            let sq: f64 = (0..3).map(|l| phi[k][l] * phi[l][j]).sum();
            let id = if k == j { 1.0 } else { 0.0 };
            r.phi_squared = max_residual(r.phi_squared, (sq + id - xi[k] * eta[j]).abs());
        }
    }
    r.eta_of_xi = ((0..3).map(|k| eta[k] * xi[k]).sum::<f64>() - 1.0).abs();
    for k in 0..3 {
        let v: f64 = (0..3).map(|l| phi[k][l] * xi[l]).sum();
        r.phi_xi = max_residual(r.phi_xi, v.abs());
        let w: f64 = (0..3).map(|l| eta[l] * phi[l][k]).sum();
        r.eta_phi = max_residual(r.eta_phi, w.abs());
        let gx: f64 = (0..3).map(|l| g[k][l] * xi[l]).sum();
        r.eta_metric_dual = max_residual(r.eta_metric_dual, (gx - eta[k]).abs());
    }
    for i in 0..3 {
        for j in 0..3 {
            let gpp: f64 = (0..3)
                .flat_map(|a| (0..3).map(move |b| (a, b)))
                .map(|(a, b)| g[a][b] * phi[a][i] * phi[b][j])
                .sum();
            let res = gpp - g[i][j] + eta[i] * eta[j];
            r.metric_compatibility = max_residual(r.metric_compatibility, res.abs());
        }
    }
    r.min_leading_minor = leading_minors(&g).into_iter().fold(f64::INFINITY, f64::min);
    r
}

/// Residual of (∇_X φ)Y = g(φ∇_X ξ, Y) ξ − η(Y) φ∇_X ξ, which holds on
/// every almost contact metric 3-manifold.
fn phi_derivative_identity_at(s: &FieldSample) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let phi_nabla_xi = mat_vec(&s.phi, &s.nabla_xi[i]);
        for j in 0..3 {
            let ej = basis(j);
            let coeff = dot(&s.g, &phi_nabla_xi, &ej);
            let eta_y = s.eta[j];
            for k in 0..3 {
                let rhs = coeff * s.xi[k] - eta_y * phi_nabla_xi[k];
                let res = (s.nabla_phi[i][j][k] - rhs).value().abs();
                worst = max_residual(worst, res);
            }
        }
    }
    worst
}

impl Manifold {
    fn over_points<T, F>(&self, points: &[Point], f: F) -> Result<Vec<T>, GeometryError>
    where
        T: Send,
        F: Fn(&Point) -> Result<T, GeometryError> + Sync + Send,
    {
        points.par_iter().map(f).collect()
    }

    fn max_over<F>(&self, points: &[Point], f: F) -> Result<f64, GeometryError>
    where
        F: Fn(&Point) -> Result<f64, GeometryError> + Sync + Send,
    {
        Ok(self
            .over_points(points, f)?
            .into_iter()
            .fold(0.0, max_residual))
    }

    pub fn verify_acm_axioms(&self, points: &[Point]) -> Result<AxiomResiduals, GeometryError> {
        let per_point = self.over_points(points, |p| Ok(axioms_at(&self.sample_point(p)?)))?;
        let start = AxiomResiduals {
            min_leading_minor: f64::INFINITY,
            ..Default::default()
        };
        Ok(per_point.into_iter().fold(start, AxiomResiduals::merge))
    }

    pub fn phi_derivative_identity_residual(&self, points: &[Point]) -> Result<f64, GeometryError> {
        self.max_over(points, |p| {
            Ok(phi_derivative_identity_at(&self.sample_point(p)?))
        })
    }

    pub fn two_form_at(&self, p: &Point) -> Result<[[f64; 3]; 3], GeometryError> {
        self.matrix_at(&self.two_form, p, "fundamental 2-form")
    }

    pub fn d_eta_at(&self, p: &Point) -> Result<[[f64; 3]; 3], GeometryError> {
        self.matrix_at(&self.d_eta, p, "d eta")
    }

    /// max |Φ(X, Y) + Φ(Y, X)|
    pub fn two_form_antisymmetry(&self, points: &[Point]) -> Result<f64, GeometryError> {
        self.max_over(points, |p| {
            let f = self.two_form_at(p)?;
            let mut m: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    m = max_residual(m, (f[i][j] + f[j][i]).abs());
                }
            }
            Ok(m)
        })
    }

    /// max |Φ − dη| on coordinate pairs.
    pub fn contact_metric_residual(&self, points: &[Point]) -> Result<f64, GeometryError> {
        self.max_over(points, |p| {
            let f = self.two_form_at(p)?;
            let d = self.d_eta_at(p)?;
            let mut m: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    m = max_residual(m, (f[i][j] - d[i][j]).abs());
                }
            }
            Ok(m)
        })
    }

    pub fn is_contact_metric(&self, points: &[Point], tol: f64) -> Result<Verdict, GeometryError> {
        Ok(Verdict::below(self.contact_metric_residual(points)?, tol))
    }

    pub fn nijenhuis_at(&self, p: &Point, i: usize, j: usize) -> Result<[f64; 3], GeometryError> {
        self.vector_at(&self.nijenhuis[i][j], p, "Nijenhuis tensor")
    }

    /// max |[φ, φ](X, Y) + 2 dη(X, Y) ξ| on coordinate pairs.
    pub fn normality_residual(&self, points: &[Point]) -> Result<f64, GeometryError> {
        self.max_over(points, |p| {
            let d = self.d_eta_at(p)?;
            let xi = self.vector_at(&self.structure.xi, p, "xi")?;
            let mut m: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    let n = self.nijenhuis_at(p, i, j)?;
                    for k in 0..3 {
                        m = max_residual(m, (n[k] + 2.0 * d[i][j] * xi[k]).abs());
                    }
                }
            }
            Ok(m)
        })
    }

    pub fn is_normal(&self, points: &[Point], tol: f64) -> Result<Verdict, GeometryError> {
        Ok(Verdict::below(self.normality_residual(points)?, tol))
    }

    pub fn h_at(&self, p: &Point) -> Result<[[f64; 3]; 3], GeometryError> {
        self.matrix_at(&self.h, p, "h")
    }

    pub fn contact_identities(
        &self,
        points: &[Point],
    ) -> Result<ContactIdentityResiduals, GeometryError> {
        let per_point = self.over_points(points, |p| {
            let s = self.sample_point(p)?;
            let h = self.h_at(p)?;
            let phi = mat_values(&s.phi);
            let xi = s.xi.map(|j| j.value());
            let mul = |a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]| -> [[f64; 3]; 3] {
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| (0..3).map(|l| a[i][l] * b[l][j]).sum())
                })
            };
            let hp = mul(&h, &phi);
            let ph = mul(&phi, &h);
            let mut r = ContactIdentityResiduals::default();
            for i in 0..3 {
                // ∇_i ξ + φ e_i + φ h e_i, the i-th column
                let ei: JVec = basis(i);
                let phi_ei = mat_vec(&s.phi, &ei).map(|j| j.value());
                for k in 0..3 {
                    let v = s.nabla_xi[i][k].value() + phi_ei[k] + ph[k][i];
                    r.nabla_xi = max_residual(r.nabla_xi, v.abs());
                    r.h_anticommutes = max_residual(r.h_anticommutes, (hp[k][i] + ph[k][i]).abs());
                }
                let hxi: f64 = (0..3).map(|l| h[i][l] * xi[l]).sum();
                r.h_xi = max_residual(r.h_xi, hxi.abs());
            }
            r.trace_h = (0..3).map(|i| h[i][i]).sum::<f64>().abs();
            r.trace_phi_h = (0..3).map(|i| ph[i][i]).sum::<f64>().abs();
            Ok(r)
        })?;
        Ok(per_point
            .into_iter()
            .fold(ContactIdentityResiduals::default(), |a, b| {
                ContactIdentityResiduals {
                    nabla_xi: max_residual(a.nabla_xi, b.nabla_xi),
                    h_anticommutes: max_residual(a.h_anticommutes, b.h_anticommutes),
                    h_xi: max_residual(a.h_xi, b.h_xi),
                    trace_h: max_residual(a.trace_h, b.trace_h),
                    trace_phi_h: max_residual(a.trace_phi_h, b.trace_phi_h),
                }
            }))
    }
}
