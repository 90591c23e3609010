use std::sync::Arc;

use thiserror::Error;

use super::{BinaryOp, Expr, Jet, JetError, UnaryOp, MAX_ORDER};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable {0:?}")]
    Unbound(String),
    #[error(transparent)]
    Domain(#[from] JetError),
    #[error("jet order {0} exceeds {MAX_ORDER}")]
    Order(usize),
}

/// Variable bindings for evaluation. A handful of entries at most, so a
/// flat list beats a map.
#[derive(Clone, Debug, Default)]
pub struct EvalContext {
    bindings: Vec<(Arc<str>, Jet)>,
}

impl EvalContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bind each name to a constant (order-0) jet.
    pub fn at_point(names: &[&str], values: &[f64]) -> Self {
        let mut ctx = Self::new();
        for (n, v) in names.iter().zip(values) {
            ctx.bind(n, Jet::constant(*v, 0));
        }
        ctx
    }

    pub fn bind(&mut self, name: &str, value: Jet) -> &mut Self {
        if let Some(slot) = self.bindings.iter_mut().find(|(n, _)| &**n == name) {
            slot.1 = value;
        } else {
            self.bindings.push((Arc::from(name), value));
        }
        self
    }

    pub fn bind_real(&mut self, name: &str, value: f64) -> &mut Self {
        self.bind(name, Jet::constant(value, 0))
    }

    pub fn get(&self, name: &str) -> Option<Jet> {
        self.bindings
            .iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, j)| *j)
    }
}

impl Expr {
    /// Evaluate as a truncated Taylor series of the given order in the
    /// parameter carried by the bound jets.
    pub fn eval_jet(&self, ctx: &EvalContext, order: usize) -> Result<Jet, EvalError> {
        if order > MAX_ORDER {
            return Err(EvalError::Order(order));
        }
        Ok(self.eval_inner(ctx, order)?.with_order(order))
    }

    pub fn eval_f64(&self, ctx: &EvalContext) -> Result<f64, EvalError> {
        Ok(self.eval_inner(ctx, 0)?.value())
    }

    fn eval_inner(&self, ctx: &EvalContext, order: usize) -> Result<Jet, EvalError> {
        Ok(match self {
            Expr::Const(c) => Jet::constant(*c, 0),
            Expr::Var(v) => ctx
                .get(v)
                .ok_or_else(|| EvalError::Unbound(v.to_string()))?
                .truncate(order),
            Expr::Unary(op, a) => {
                let a = a.eval_inner(ctx, order)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Ln => a.ln()?,
                    UnaryOp::Sqrt => a.sqrt()?,
                    UnaryOp::Sin => a.sin_cos().0,
                    UnaryOp::Cos => a.sin_cos().1,
                }
            }
            Expr::Binary(op, a, b) => {
                let a = a.eval_inner(ctx, order)?;
                let b = b.eval_inner(ctx, order)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => a.checked_div(&b)?,
                }
            }
            Expr::Pow(a, r) => a.eval_inner(ctx, order)?.powf(*r)?,
        })
    }
}
