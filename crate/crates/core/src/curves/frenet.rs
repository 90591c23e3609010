use serde::Serialize;

use super::{
    over_samples, trunc, unit_local, CurveError, CurveSpec, Local, GEODESIC_TOL, TORSION_TOL,
};
use crate::geometry::tensor::{dot, max_residual, pair, values, JVec};
use crate::geometry::{Manifold, Point};

/// Frenet frame and curvatures at one parameter value. N and B are absent
/// where κ or τ fall below their thresholds; τ is then reported as 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrenetData {
    pub t: f64,
    pub point: Point,
    pub tangent: [f64; 3],
    pub normal: Option<[f64; 3]>,
    pub binormal: Option<[f64; 3]>,
    pub kappa: f64,
    pub tau: f64,
    /// Max |g(E_a, E_b) − δ_ab| over the defined frame vectors.
    pub orthonormality: f64,
}

impl FrenetData {
    pub fn n_defined(&self) -> bool {
        self.normal.is_some()
    }

    pub fn b_defined(&self) -> bool {
        self.binormal.is_some()
    }
}

/// Frame pieces kept as jets for the decomposition code.
pub(crate) struct Frame {
    /// Valid to order 1.
    pub kappa: crate::expr::Jet,
    pub normal: Option<JVec>,
    pub tau: f64,
    pub binormal: Option<[f64; 3]>,
}

pub(crate) fn frame(l: &Local) -> Result<Frame, CurveError> {
    let g = &l.fields.g;
    let t = l.t;
    let kappa = dot(g, &l.accel, &l.accel).truncate(1);
    if !(kappa.value().sqrt() >= GEODESIC_TOL) {
        return Ok(Frame {
            kappa: crate::expr::Jet::constant(kappa.value().max(0.0).sqrt(), 1),
            normal: None,
            tau: 0.0,
            binormal: None,
        });
    }
    let eval_err = |e| CurveError::Eval {
        t,
        source: crate::expr::EvalError::Domain(e),
    };
    let kappa = kappa.sqrt().map_err(eval_err)?;
    let inv = kappa.recip().map_err(eval_err)?;
    let normal = trunc(&l.accel.map(|a| a * inv), 1);
    let dn = l.covariant(&normal, 1);
    let w: JVec = std::array::from_fn(|k| (dn[k] + kappa * l.velocity[k]).truncate(0));
    let tau = dot(g, &w, &w).value().max(0.0).sqrt();
    let binormal = (tau >= TORSION_TOL).then(|| values(&w).map(|c| c / tau));
    Ok(Frame {
        kappa,
        normal: Some(normal),
        tau: if binormal.is_some() { tau } else { 0.0 },
        binormal,
    })
}

fn orthonormality(l: &Local, frame: &[[f64; 3]]) -> f64 {
    let g = crate::geometry::tensor::mat_values(&l.fields.g);
    let ip = |u: &[f64; 3], v: &[f64; 3]| -> f64 {
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| g[i][j] * u[i] * v[j])
            .sum()
    };
    let mut worst: f64 = 0.0;
    for (a, u) in frame.iter().enumerate() {
        for (b, v) in frame.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = max_residual(worst, (ip(u, v) - target).abs());
        }
    }
    worst
}

impl Manifold {
    /// T, N, B, κ, τ at `t`. The curve must be unit speed at `t`.
    pub fn frenet_apparatus(&self, c: &CurveSpec, t: f64) -> Result<FrenetData, CurveError> {
        let l = unit_local(self, c, t)?;
        let f = frame(&l)?;
        let tangent = values(&l.velocity);
        let normal = f.normal.as_ref().map(values);
        let mut vecs = vec![tangent];
        vecs.extend(normal);
        vecs.extend(f.binormal);
        Ok(FrenetData {
            t,
            point: l.fields.point,
            tangent,
            normal,
            binormal: f.binormal,
            kappa: f.kappa.value(),
            tau: f.tau,
            orthonormality: orthonormality(&l, &vecs),
        })
    }

    pub fn frenet_samples(&self, c: &CurveSpec) -> Result<Vec<FrenetData>, CurveError> {
        over_samples(c, |t| self.frenet_apparatus(c, t))
    }

    /// |∇_T B + τN|_g at `t`, with dB/dt from a central difference of step
    /// `h`. The third Frenet equation is not used to build the frame, so
    /// this is an independent check. `None` where B is undefined.
    pub fn frenet_closure_residual(
        &self,
        c: &CurveSpec,
        t: f64,
        h: f64,
    ) -> Result<Option<f64>, CurveError> {
        let here = self.frenet_apparatus(c, t)?;
        let (Some(n), Some(b)) = (here.normal, here.binormal) else {
            return Ok(None);
        };
        let plus = self.frenet_apparatus(c, t + h)?.binormal;
        let minus = self.frenet_apparatus(c, t - h)?.binormal;
        let (Some(bp), Some(bm)) = (plus, minus) else {
            return Ok(None);
        };
        let l = unit_local(self, c, t)?;
        let gamma = &l.fields.gamma;
        let vel = values(&l.velocity);
        let mut r = [0.0; 3];
        for k in 0..3 {
            let mut v = (bp[k] - bm[k]) / (2.0 * h) + here.tau * n[k];
            for i in 0..3 {
                for j in 0..3 {
                    v += gamma[k][i][j].value() * vel[i] * b[j];
                }
            }
            r[k] = v;
        }
        let g = crate::geometry::tensor::mat_values(&l.fields.g);
        let sq: f64 = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| g[i][j] * r[i] * r[j])
            .sum();
        Ok(Some(sq.max(0.0).sqrt()))
    }
}

/// Outcome of the almost contact (Legendre) test over a curve's samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LegendreReport {
    pub holds: bool,
    /// max |η(γ′)|
    pub max_eta: f64,
    pub tol: f64,
    pub samples: usize,
    /// max |g(γ′, γ′) − 1|
    pub unit_speed_residual: f64,
    /// Every sample lies in the open chart domain.
    pub in_domain: bool,
}

impl LegendreReport {
    /// The predicate's preconditions: unit speed inside the manifold.
    pub fn preconditions_hold(&self) -> bool {
        self.in_domain && self.unit_speed_residual < super::UNIT_SPEED_TOL
    }
}

impl Manifold {
    /// max |η(γ′)| over the samples, flag set when it is below `tol`.
    /// Only η and g are evaluated, so this also runs on curves that stray
    /// outside the domain; `in_domain` and the speed residual record that.
    pub fn is_almost_contact(&self, c: &CurveSpec, tol: f64) -> Result<LegendreReport, CurveError> {
        let s = &self.structure;
        let per = over_samples(c, |t| {
            let coords = c.coords(t, 1)?;
            let point = coords.map(|j| j.value());
            let ctx = self.context(&coords.map(|j| j.truncate(0)));
            let geo = |source| CurveError::Geometry { t, source };
            let eta = self.eval_vec(&s.eta, &ctx, 0, &point, "eta").map_err(geo)?;
            let g = self
                .eval_mat(&s.g, &ctx, 0, &point, "metric")
                .map_err(geo)?;
            let v = coords.map(|j| j.differentiate());
            let sigma = pair(&eta, &v).value();
            let speed = (dot(&g, &v, &v).value() - 1.0).abs();
            Ok((sigma.abs(), speed, self.chart().in_domain(&point)))
        })?;
        let max_eta = per.iter().fold(0.0, |m, p| max_residual(m, p.0));
        Ok(LegendreReport {
            holds: max_eta < tol,
            max_eta,
            tol,
            samples: per.len(),
            unit_speed_residual: per.iter().fold(0.0, |m, p| max_residual(m, p.1)),
            in_domain: per.iter().all(|p| p.2),
        })
    }
}
