use super::chart::{Chart, Point};
use super::connection::{
    apply, christoffel, coordinate_field, cov_deriv_vec, inverse_metric, lie_bracket,
    ChristoffelField,
};
use super::structure::{AcmStructure, Matrix, Vector};
use super::tensor::{JMat, JVec};
use super::GeometryError;
use crate::expr::{sum, EvalContext, Expr, Jet};

/// A structure together with its connection and the derived symbolic
/// tensors every check needs. Built once, then only evaluated.
#[derive(Clone, Debug)]
pub struct Manifold {
    pub structure: AcmStructure,
    pub christoffel: ChristoffelField,
    pub g_inv: Matrix,
    /// `nabla_phi[i][j]` = (∇_{∂i} φ) ∂j
    pub nabla_phi: [[Vector; 3]; 3],
    /// `nabla_xi[i]` = ∇_{∂i} ξ
    pub nabla_xi: [Vector; 3],
    /// `nabla_eta[i][j]` = (∇_{∂i} η)(∂j)
    pub nabla_eta: Matrix,
    /// Φ(∂i, ∂j) = g(∂i, φ ∂j)
    pub two_form: Matrix,
    pub d_eta: Matrix,
    /// `nijenhuis[i][j]` = [φ, φ](∂i, ∂j)
    pub nijenhuis: [[Vector; 3]; 3],
    /// h = ½ L_ξ φ, row = output component.
    pub h: Matrix,
}

/// Jet-valued components of the structure tensors at one point (or along
/// a curve, when the coordinates are jets in the curve parameter).
#[derive(Clone, Debug)]
pub struct FieldSample {
    pub point: Point,
    pub g: JMat,
    pub gamma: [JMat; 3],
    pub phi: JMat,
    pub xi: JVec,
    pub eta: JVec,
    pub nabla_phi: [[JVec; 3]; 3],
    pub nabla_xi: [JVec; 3],
    pub nabla_eta: JMat,
}

/// (∇_X φ) Y = ∇_X(φY) − φ(∇_X Y), symbolic.
pub fn nabla_phi(s: &AcmStructure, gamma: &ChristoffelField, x: &Vector, y: &Vector) -> Vector {
    let names = s.chart.names();
    let lhs = cov_deriv_vec(gamma, x, &apply(&s.phi, y), &names);
    let rhs = apply(&s.phi, &cov_deriv_vec(gamma, x, y, &names));
    std::array::from_fn(|k| &lhs[k] - &rhs[k])
}

/// Φ(∂i, ∂j) = g(∂i, φ ∂j) = g_il φ^l_j.
pub fn fundamental_two_form(s: &AcmStructure) -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| sum((0..3).map(|l| &s.g[i][l] * &s.phi[l][j]))))
}

/// dη(∂i, ∂j) = ½ (∂i η_j − ∂j η_i); coordinate brackets vanish.
pub fn d_eta(s: &AcmStructure) -> Matrix {
    let names = s.chart.names();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (s.eta[j].diff(names[i]) - s.eta[i].diff(names[j])) * 0.5)
    })
}

/// [φ, φ](X, Y) = [φX, φY] + φ²[X, Y] − φ[φX, Y] − φ[X, φY].
pub fn nijenhuis(s: &AcmStructure, x: &Vector, y: &Vector) -> Vector {
    let names = s.chart.names();
    let phi = &s.phi;
    let px = apply(phi, x);
    let py = apply(phi, y);
    let a = lie_bracket(&px, &py, &names);
    let b = apply(phi, &apply(phi, &lie_bracket(x, y, &names)));
    let c = apply(phi, &lie_bracket(&px, y, &names));
    let d = apply(phi, &lie_bracket(x, &py, &names));
    std::array::from_fn(|k| &a[k] + &b[k] - &c[k] - &d[k])
}

/// h = ½ L_ξ φ with (L_ξ φ) X = [ξ, φX] − φ[ξ, X].
pub fn compute_h(s: &AcmStructure) -> Matrix {
    let names = s.chart.names();
    let cols: [Vector; 3] = std::array::from_fn(|j| {
        let e = coordinate_field(j);
        let a = lie_bracket(&s.xi, &apply(&s.phi, &e), &names);
        let b = apply(&s.phi, &lie_bracket(&s.xi, &e, &names));
        std::array::from_fn(|k| (&a[k] - &b[k]) * 0.5)
    });
    std::array::from_fn(|k| std::array::from_fn(|j| cols[j][k].clone()))
}

impl Manifold {
    pub fn new(structure: AcmStructure) -> Result<Self, GeometryError> {
        let names = structure.chart.names();
        let christoffel = christoffel(&structure.g, &structure.chart)?;
        let g_inv = inverse_metric(&structure.g).inv;
        let fields: [Vector; 3] = std::array::from_fn(coordinate_field);
        let nabla_phi = std::array::from_fn(|i| {
            std::array::from_fn(|j| nabla_phi(&structure, &christoffel, &fields[i], &fields[j]))
        });
        let nabla_xi =
            std::array::from_fn(|i| cov_deriv_vec(&christoffel, &fields[i], &structure.xi, &names));
        let nabla_eta = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let conn = sum((0..3).map(|l| &christoffel.gamma[l][i][j] * &structure.eta[l]));
                structure.eta[j].diff(names[i]) - conn
            })
        });
        let two_form = fundamental_two_form(&structure);
        let d_eta = d_eta(&structure);
        let nijenhuis = std::array::from_fn(|i| {
            std::array::from_fn(|j| nijenhuis(&structure, &fields[i], &fields[j]))
        });
        let h = compute_h(&structure);
        Ok(Manifold {
            structure,
            christoffel,
            g_inv,
            nabla_phi,
            nabla_xi,
            nabla_eta,
            two_form,
            d_eta,
            nijenhuis,
            h,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.structure.chart
    }

    pub(crate) fn context(&self, coords: &JVec) -> EvalContext {
        let mut ctx = EvalContext::new();
        for (name, c) in self.chart().names().iter().zip(coords) {
            ctx.bind(name, *c);
        }
        ctx
    }

    /// Evaluate `e` with the coordinates bound to `coords`, keeping the
    /// jets' order.
    pub(crate) fn eval(
        &self,
        e: &Expr,
        ctx: &EvalContext,
        order: usize,
        point: &Point,
        what: &str,
    ) -> Result<Jet, GeometryError> {
        e.eval_jet(ctx, order)
            .map_err(|source| GeometryError::Eval {
                what: what.to_string(),
                point: *point,
                source,
            })
    }

    pub(crate) fn eval_mat(
        &self,
        m: &Matrix,
        ctx: &EvalContext,
        order: usize,
        point: &Point,
        what: &str,
    ) -> Result<JMat, GeometryError> {
        let mut out = [[Jet::zero(order); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.eval(&m[i][j], ctx, order, point, what)?;
            }
        }
        Ok(out)
    }

    pub(crate) fn eval_vec(
        &self,
        v: &Vector,
        ctx: &EvalContext,
        order: usize,
        point: &Point,
        what: &str,
    ) -> Result<JVec, GeometryError> {
        let mut out = [Jet::zero(order); 3];
        for k in 0..3 {
            out[k] = self.eval(&v[k], ctx, order, point, what)?;
        }
        Ok(out)
    }

    /// Evaluate every structure tensor with coordinates `coords`. The
    /// result has the highest order among the coordinate jets.
    pub fn sample(&self, coords: &JVec) -> Result<FieldSample, GeometryError> {
        let order = coords.iter().map(Jet::order).max().unwrap_or(0);
        let point = coords.map(|c| c.value());
        let ctx = self.context(coords);
        let s = &self.structure;
        let gamma = [0, 1, 2].map(|k| {
            self.eval_mat(
                &self.christoffel.gamma[k],
                &ctx,
                order,
                &point,
                "Christoffel symbol",
            )
        });
        let [g0, g1, g2] = gamma;
        let nabla_phi = {
            let mut out = [[[Jet::zero(order); 3]; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = self.eval_vec(
                        &self.nabla_phi[i][j],
                        &ctx,
                        order,
                        &point,
                        "covariant derivative of phi",
                    )?;
                }
            }
            out
        };
        let mut nabla_xi = [[Jet::zero(order); 3]; 3];
        for i in 0..3 {
            nabla_xi[i] = self.eval_vec(
                &self.nabla_xi[i],
                &ctx,
                order,
                &point,
                "covariant derivative of xi",
            )?;
        }
        Ok(FieldSample {
            point,
            g: self.eval_mat(&s.g, &ctx, order, &point, "metric")?,
            gamma: [g0?, g1?, g2?],
            phi: self.eval_mat(&s.phi, &ctx, order, &point, "phi")?,
            xi: self.eval_vec(&s.xi, &ctx, order, &point, "xi")?,
            eta: self.eval_vec(&s.eta, &ctx, order, &point, "eta")?,
            nabla_phi,
            nabla_xi,
            nabla_eta: self.eval_mat(
                &self.nabla_eta,
                &ctx,
                order,
                &point,
                "covariant derivative of eta",
            )?,
        })
    }

    pub fn sample_point(&self, p: &Point) -> Result<FieldSample, GeometryError> {
        self.sample(&p.map(|v| Jet::constant(v, 0)))
    }

    /// Plain values of a symbolic matrix at a point.
    pub fn matrix_at(
        &self,
        m: &Matrix,
        p: &Point,
        what: &str,
    ) -> Result<[[f64; 3]; 3], GeometryError> {
        let ctx = self.context(&p.map(|v| Jet::constant(v, 0)));
        Ok(super::tensor::mat_values(
            &self.eval_mat(m, &ctx, 0, p, what)?,
        ))
    }

    pub fn vector_at(&self, v: &Vector, p: &Point, what: &str) -> Result<[f64; 3], GeometryError> {
        let ctx = self.context(&p.map(|v| Jet::constant(v, 0)));
        Ok(super::tensor::values(&self.eval_vec(v, &ctx, 0, p, what)?))
    }
}
