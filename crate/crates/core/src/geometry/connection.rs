//! Levi-Civita connection in coordinates, all symbolic.

use super::chart::Chart;
use super::structure::{Matrix, Vector};
use super::{point_context, GeometryError};
use crate::expr::{sum, Expr};

/// `gamma[k][i][j]` is the Christoffel symbol of the second kind with
/// upper index `k`. Entries `[k][i][j]` and `[k][j][i]` are the same tree.
#[derive(Clone, Debug)]
pub struct ChristoffelField {
    pub gamma: [[[Expr; 3]; 3]; 3],
}

/// Inverse metric as adjugate over determinant.
#[derive(Clone, Debug)]
pub struct InverseMetric {
    pub det: Expr,
    pub inv: Matrix,
}

pub fn inverse_metric(g: &Matrix) -> InverseMetric {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        &g[r0][c0] * &g[r1][c1] - &g[r0][c1] * &g[r1][c0]
    };
    // cofactor(i, j) uses the rows/cols other than i/j, cyclically ordered
    // so no sign flip is needed.
    let cof = |i: usize, j: usize| minor((i + 1) % 3, (i + 2) % 3, (j + 1) % 3, (j + 2) % 3);
    let det = sum((0..3).map(|j| &g[0][j] * cof(0, j)));
    let mut inv: Matrix = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            // adjugate is the transpose of the cofactor matrix
            inv[i][j] = cof(j, i) / &det;
        }
    }
    InverseMetric { det, inv }
}

/// Check that `det g` keeps one strictly positive sign on a grid over the
/// sample box. Returns the first offending point.
pub fn check_metric_determinant(g: &Matrix, chart: &Chart) -> Result<(), GeometryError> {
    let det = inverse_metric(g).det;
    for p in chart.grid_points(5) {
        let ctx = point_context(chart, &p);
        let d = det.eval_f64(&ctx).map_err(|source| GeometryError::Eval {
            what: "metric determinant".into(),
            point: p,
            source,
        })?;
        if !(d > 1e-12) {
            return Err(GeometryError::SingularMetric { point: p, det: d });
        }
    }
    Ok(())
}

/// Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij).
///
/// Fails when the metric determinant vanishes (or changes sign) on the
/// chart's sample box.
pub fn christoffel(g: &Matrix, chart: &Chart) -> Result<ChristoffelField, GeometryError> {
    check_metric_determinant(g, chart)?;
    Ok(christoffel_unchecked(g, &chart.names()))
}

pub fn christoffel_unchecked(g: &Matrix, names: &[&str; 3]) -> ChristoffelField {
    let inv = inverse_metric(g).inv;
    // dg[l][i][j] = ∂_l g_ij
    let dg: [[[Expr; 3]; 3]; 3] = std::array::from_fn(|l| {
        std::array::from_fn(|i| std::array::from_fn(|j| g[i][j].diff(names[l])))
    });
    let mut gamma: [[[Expr; 3]; 3]; 3] = Default::default();
    for k in 0..3 {
        for i in 0..3 {
            for j in i..3 {
                let e = sum((0..3).map(|l| {
                    let bracket = &dg[i][j][l] + &dg[j][i][l] - &dg[l][i][j];
                    &inv[k][l] * bracket
                })) * 0.5;
                gamma[k][j][i] = e.clone();
                gamma[k][i][j] = e;
            }
        }
    }
    ChristoffelField { gamma }
}

/// Directional derivative X(f) = X^i ∂_i f.
pub fn directional(x: &Vector, f: &Expr, names: &[&str; 3]) -> Expr {
    sum((0..3).map(|i| &x[i] * f.diff(names[i])))
}

/// (∇_X Y)^k = X(Y^k) + Γ^k_ij X^i Y^j.
pub fn cov_deriv_vec(
    gamma: &ChristoffelField,
    x: &Vector,
    y: &Vector,
    names: &[&str; 3],
) -> Vector {
    std::array::from_fn(|k| {
        let connection =
            sum((0..3).flat_map(|i| (0..3).map(move |j| &gamma.gamma[k][i][j] * &x[i] * &y[j])));
        directional(x, &y[k], names) + connection
    })
}

/// [X, Y]^k = X(Y^k) − Y(X^k).
pub fn lie_bracket(x: &Vector, y: &Vector, names: &[&str; 3]) -> Vector {
    std::array::from_fn(|k| directional(x, &y[k], names) - directional(y, &x[k], names))
}

/// Apply a (1,1)-tensor to a vector field.
pub fn apply(m: &Matrix, v: &Vector) -> Vector {
    std::array::from_fn(|k| sum((0..3).map(|j| &m[k][j] * &v[j])))
}

/// g(u, v).
pub fn inner(g: &Matrix, u: &Vector, v: &Vector) -> Expr {
    sum((0..3).flat_map(|i| (0..3).map(move |j| &g[i][j] * &u[i] * &v[j])))
}

/// Coordinate field ∂_i.
pub fn coordinate_field(i: usize) -> Vector {
    std::array::from_fn(|k| if k == i { Expr::one() } else { Expr::zero() })
}
