//! Curves on a structure: unit-speed and Legendre checks, the Frenet
//! apparatus, and the acceleration decomposition relative to (φγ′, ξ).
//!
//! Everything is evaluated with jets in the curve parameter: γ to order 3,
//! so T carries two derivatives, ∇_T T one, and ∇_T N its value.

mod decompose;
mod frenet;

pub use decompose::{
    AccelDecomposition, PropositionData, TheoremCoefficients, TheoremTorsion, P_TOL,
};
pub use frenet::{FrenetData, LegendreReport};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_expr, EvalContext, EvalError, Expr, Jet, ParseError, MAX_ORDER};
use crate::geometry::tensor::{dot, JVec};
use crate::geometry::{FieldSample, GeometryError, Interval, Manifold, Point};

/// Below this κ the curve counts as a geodesic and N is undefined.
pub const GEODESIC_TOL: f64 = 1e-10;
/// Below this τ the binormal is undefined.
pub const TORSION_TOL: f64 = 1e-10;
/// Allowed |g(γ′, γ′) − 1| before a curve is rejected as not unit speed.
pub const UNIT_SPEED_TOL: f64 = 1e-9;
/// |σ| at or above `1 − COLLINEAR_MARGIN` means γ′ is parallel to ξ.
pub const COLLINEAR_MARGIN: f64 = 1e-6;
/// |σ| below this counts as Legendre for defining ϑ.
pub const LEGENDRE_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Expr {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("invalid curve: {0}")]
    Invalid(String),
    #[error("curve leaves the chart domain at t = {t}: {point:?}")]
    OutsideDomain { t: f64, point: Point },
    #[error("curve is not unit speed at t = {t}: |g(T, T) - 1| = {residual:e}")]
    NotUnitSpeed { t: f64, residual: f64 },
    #[error("evaluating the curve at t = {t}: {source}")]
    Eval {
        t: f64,
        #[source]
        source: EvalError,
    },
    #[error("at t = {t}: {source}")]
    Geometry {
        t: f64,
        #[source]
        source: GeometryError,
    },
    #[error("curve is a geodesic at t = {t} (kappa = {kappa:e})")]
    Geodesic { t: f64, kappa: f64 },
    #[error("tangent is collinear with xi at t = {t} (sigma = {sigma})")]
    CollinearWithXi { t: f64, sigma: f64 },
    #[error("curve is not almost contact at t = {t} (eta(T) = {sigma:e})")]
    NotLegendre { t: f64, sigma: f64 },
    #[error("p vanishes at t = {t} (p = {p:e})")]
    PVanishes { t: f64, p: f64 },
}

impl CurveError {
    /// True for errors about the input text, false for violated
    /// preconditions of a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            CurveError::Json(_) | CurveError::Expr { .. } | CurveError::Invalid(_)
        )
    }

    pub fn expr_offset(&self) -> Option<usize> {
        match self {
            CurveError::Expr { source, .. } => Some(source.offset),
            _ => None,
        }
    }
}

/// On-disk curve description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "default_param")]
    pub param: String,
    pub domain: [f64; 2],
    pub samples: usize,
    pub components: [String; 3],
}

fn default_param() -> String {
    "t".to_string()
}

/// A parametrized curve in chart coordinates.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub name: Option<String>,
    pub param: String,
    pub domain: Interval,
    pub samples: usize,
    pub components: [Expr; 3],
}

impl CurveSpec {
    pub fn from_json(src: &str) -> Result<Self, CurveError> {
        let file: CurveFile = serde_json::from_str(src)?;
        Self::from_file(&file)
    }

    pub fn from_file(f: &CurveFile) -> Result<Self, CurveError> {
        let [a, b] = f.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(CurveError::Invalid(format!(
                "domain [{a}, {b}] is not a bounded interval"
            )));
        }
        if f.samples < 3 {
            return Err(CurveError::Invalid(format!(
                "samples must be at least 3, got {}",
                f.samples
            )));
        }
        let p = f.param.as_str();
        if p.is_empty()
            || !p.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
            || !p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(CurveError::Invalid(format!("{p:?} is not an identifier")));
        }
        let mut components = [Expr::zero(), Expr::zero(), Expr::zero()];
        for (k, src) in f.components.iter().enumerate() {
            components[k] = parse_expr(src, &[p]).map_err(|source| CurveError::Expr {
                field: format!("components[{k}]"),
                source,
            })?;
        }
        Ok(CurveSpec {
            name: f.name.clone(),
            param: f.param.clone(),
            domain: Interval::new(a, b),
            samples: f.samples,
            components,
        })
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile {
            name: self.name.clone(),
            param: self.param.clone(),
            domain: [self.domain.lo, self.domain.hi],
            samples: self.samples,
            components: self.components.clone().map(|e| e.to_string()),
        }
    }

    /// Evenly spaced parameters, endpoints included.
    pub fn sample_params(&self) -> Vec<f64> {
        self.domain.linspace(self.samples)
    }

    pub fn with_samples(&self, samples: usize) -> Self {
        CurveSpec {
            samples,
            ..self.clone()
        }
    }

    /// Coordinates of γ(t) as jets of the given order in t.
    pub fn coords(&self, t: f64, order: usize) -> Result<JVec, CurveError> {
        let mut ctx = EvalContext::new();
        ctx.bind(&self.param, Jet::variable(t, order));
        let mut out = [Jet::zero(order); 3];
        for k in 0..3 {
            out[k] = self.components[k]
                .eval_jet(&ctx, order)
                .map_err(|source| CurveError::Eval { t, source })?;
        }
        Ok(out)
    }

    pub fn point(&self, t: f64) -> Result<Point, CurveError> {
        Ok(self.coords(t, 0)?.map(|j| j.value()))
    }
}

/// Truncate every component to `order`, discarding coefficients that a
/// lower-order factor could not have determined.
fn trunc(v: &JVec, order: usize) -> JVec {
    v.map(|j| j.truncate(order))
}

/// Local data of a curve at one parameter value. The field sample has
/// order 3; `velocity` is valid to order 2 and `accel` to order 1.
pub(crate) struct Local {
    pub t: f64,
    pub fields: FieldSample,
    pub velocity: JVec,
    pub accel: JVec,
}

impl Local {
    pub fn speed_residual(&self) -> f64 {
        (dot(&self.fields.g, &self.velocity, &self.velocity).value() - 1.0).abs()
    }

    /// ∇_T V for a vector field V along the curve known to order `order`;
    /// the result is valid to `order − 1`.
    pub fn covariant(&self, v: &JVec, order: usize) -> JVec {
        let out_order = order.saturating_sub(1);
        let dv = v.map(|c| c.differentiate());
        let mut out = dv;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    out[k] += self.fields.gamma[k][i][j] * self.velocity[i] * v[j];
                }
            }
        }
        trunc(&out, out_order)
    }
}

/// Evaluate γ and the structure along it at `t`, checking the chart
/// domain but not unit speed.
pub(crate) fn local(m: &Manifold, c: &CurveSpec, t: f64) -> Result<Local, CurveError> {
    let coords = c.coords(t, MAX_ORDER)?;
    let point = coords.map(|j| j.value());
    if !m.chart().in_domain(&point) {
        return Err(CurveError::OutsideDomain { t, point });
    }
    let fields = m
        .sample(&coords)
        .map_err(|source| CurveError::Geometry { t, source })?;
    let velocity = coords.map(|j| j.differentiate());
    let mut l = Local {
        t,
        fields,
        velocity,
        accel: [Jet::zero(0); 3],
    };
    l.accel = l.covariant(&velocity, MAX_ORDER - 1);
    Ok(l)
}

/// As [`local`], but rejects a curve that is not unit speed at `t`.
pub(crate) fn unit_local(m: &Manifold, c: &CurveSpec, t: f64) -> Result<Local, CurveError> {
    let l = local(m, c, t)?;
    let residual = l.speed_residual();
    if !(residual < UNIT_SPEED_TOL) {
        return Err(CurveError::NotUnitSpeed { t, residual });
    }
    Ok(l)
}

/// Run `f` at every sample parameter of `c`, in parallel, keeping order.
pub fn over_samples<T, F>(c: &CurveSpec, f: F) -> Result<Vec<T>, CurveError>
where
    T: Send,
    F: Fn(f64) -> Result<T, CurveError> + Sync + Send,
{
    c.sample_params().into_par_iter().map(f).collect()
}

/// max |g(γ′, γ′) − 1| over the curve's samples. Fails only if the curve
/// leaves the domain or cannot be evaluated.
pub fn check_unit_speed(m: &Manifold, c: &CurveSpec) -> Result<f64, CurveError> {
    let per = over_samples(c, |t| Ok(local(m, c, t)?.speed_residual()))?;
    Ok(per
        .into_iter()
        .fold(0.0, crate::geometry::tensor::max_residual))
}
