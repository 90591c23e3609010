//! Charts, structure tensors, the Levi-Civita connection, and the
//! almost contact metric checks built on them.
//!
//! All tensor fields are symbolic; [`Manifold::sample`] evaluates them at
//! a point, or along a curve when the coordinates are jets.
//!
//! Convention: `dη(X, Y) = ½ (X η(Y) − Y η(X) − η([X, Y]))`, with the
//! factor ½. Contact metric means `Φ = dη` under this convention, so a
//! structure that is contact metric in texts without the ½ will not be
//! here (and vice versa).

pub mod chart;
mod checks;
mod classify;
pub mod connection;
mod manifold;
pub mod structure;
pub mod tensor;

pub use chart::{Chart, Interval, Point};
pub use checks::{AxiomResiduals, ContactIdentityResiduals, Verdict};
pub use classify::{
    fit_alpha_beta, AlphaBeta, ClassificationReport, Subtype, TransSasakianFit, FIT_TOL,
};
pub use connection::{christoffel, cov_deriv_vec, lie_bracket, ChristoffelField};
pub use manifold::{FieldSample, Manifold};
pub use structure::{AcmStructure, ManifoldFile, Matrix, StructureError, Vector};

use thiserror::Error;

use crate::expr::{EvalContext, EvalError};

/// Default tolerance for identities whose ingredients are symbolic.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GeometryError {
    #[error("metric determinant {det} is not positive at {point:?}")]
    SingularMetric { point: Point, det: f64 },
    #[error("evaluating {what} at {point:?}: {source}")]
    Eval {
        what: String,
        point: Point,
        #[source]
        source: EvalError,
    },
    #[error("normal equations for (alpha, beta) are singular at {point:?}")]
    SingularFit { point: Point },
}

pub(crate) fn point_context(chart: &Chart, p: &Point) -> EvalContext {
    EvalContext::at_point(&chart.names(), p)
}
