//! Pointwise linear algebra on jet-valued components.

use crate::expr::{Jet, JetError};

pub type JVec = [Jet; 3];
pub type JMat = [[Jet; 3]; 3];

pub fn zero_vec() -> JVec {
    [Jet::zero(0); 3]
}

pub fn basis(i: usize) -> JVec {
    std::array::from_fn(|k| Jet::constant(if k == i { 1.0 } else { 0.0 }, 0))
}

pub fn mat_vec(m: &JMat, v: &JVec) -> JVec {
    std::array::from_fn(|k| (0..3).map(|j| m[k][j] * v[j]).sum())
}

/// g(u, v)
pub fn dot(g: &JMat, u: &JVec, v: &JVec) -> Jet {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| g[i][j] * u[i] * v[j]))
        .sum()
}

/// Covector applied to a vector.
pub fn pair(w: &JVec, v: &JVec) -> Jet {
    (0..3).map(|i| w[i] * v[i]).sum()
}

/// Lower an index: (g v)_j.
pub fn lower(g: &JMat, v: &JVec) -> JVec {
    mat_vec(g, v)
}

pub fn add(u: &JVec, v: &JVec) -> JVec {
    std::array::from_fn(|k| u[k] + v[k])
}

pub fn sub(u: &JVec, v: &JVec) -> JVec {
    std::array::from_fn(|k| u[k] - v[k])
}

pub fn scale(v: &JVec, s: Jet) -> JVec {
    std::array::from_fn(|k| v[k] * s)
}

pub fn norm(g: &JMat, v: &JVec) -> Result<Jet, JetError> {
    dot(g, v, v).sqrt()
}

pub fn div(v: &JVec, s: &Jet) -> Result<JVec, JetError> {
    let r = s.recip()?;
    Ok(scale(v, r))
}

pub fn values(v: &JVec) -> [f64; 3] {
    v.map(|j| j.value())
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| max_residual(m, x.abs()))
}

/// `max` that propagates NaN, so a broken evaluation never hides behind a
/// good one.
pub fn max_residual(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Leading principal minors of a symmetric 3×3 matrix.
pub fn leading_minors(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let d1 = m[0][0];
    let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [d1, d2, d3]
}

pub fn mat_values(m: &JMat) -> [[f64; 3]; 3] {
    m.map(|r| r.map(|j| j.value()))
}
