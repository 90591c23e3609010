use std::fmt;
use std::ops;

use thiserror::Error;

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum JetError {
    #[error("{op} of non-positive argument {value}")]
    NonPositive { op: &'static str, value: f64 },
    #[error("division by a jet with zero constant term")]
    DivisionByZero,
}

/// Truncated Taylor expansion of a scalar in one parameter:
/// `coeffs[k] = f^(k)(t0) / k!` for `k <= order`.
///
/// Coefficients above `order` are always zero, so a lower-order jet mixed
/// with a higher-order one behaves like an exact polynomial (in particular
/// an order-0 jet is a constant).
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    order: usize,
    coeffs: [f64; MAX_ORDER + 1],
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Jet").field(&self.coefficients()).finish()
    }
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut coeffs = [0.0; MAX_ORDER + 1];
        coeffs[0] = value;
        Jet { order, coeffs }
    }

    /// The identity function `t` expanded at `value`.
    pub fn variable(value: f64, order: usize) -> Self {
        let mut j = Jet::constant(value, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    /// Build from Taylor coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        assert!(
            !coeffs.is_empty() && coeffs.len() <= MAX_ORDER + 1,
            "jet needs 1..={} coefficients",
            MAX_ORDER + 1
        );
        let mut c = [0.0; MAX_ORDER + 1];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Jet {
            order: coeffs.len() - 1,
            coeffs: c,
        }
    }

    pub fn zero(order: usize) -> Self {
        Jet::constant(0.0, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs[..=self.order]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// k-th derivative at the expansion point, `k! * coeffs[k]`.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.coeff(k) * fact
    }

    /// Jet of the derivative; loses one order.
    pub fn differentiate(&self) -> Jet {
        let order = self.order.saturating_sub(1);
        let mut c = [0.0; MAX_ORDER + 1];
        for k in 0..self.order {
            c[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Jet { order, coeffs: c }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return *self;
        }
        let mut c = [0.0; MAX_ORDER + 1];
        c[..=order].copy_from_slice(&self.coeffs[..=order]);
        Jet { order, coeffs: c }
    }

    /// Raise (zero-padded) or lower the order.
    pub fn with_order(&self, order: usize) -> Jet {
        assert!(order <= MAX_ORDER);
        let mut j = self.truncate(order);
        j.order = order;
        j
    }

    fn combined_order(&self, other: &Jet) -> usize {
        self.order.max(other.order)
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut j = *self;
        for c in &mut j.coeffs {
            *c *= s;
        }
        j
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet, JetError> {
        let b0 = other.coeffs[0];
        if b0 == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let n = self.combined_order(other);
        let mut q = [0.0; MAX_ORDER + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for i in 1..=k {
                acc -= other.coeffs[i] * q[k - i];
            }
            q[k] = acc / b0;
        }
        Ok(Jet {
            order: n,
            coeffs: q,
        })
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        Jet::constant(1.0, 0).checked_div(self)
    }

    pub fn exp(&self) -> Jet {
        let n = self.order;
        let mut e = [0.0; MAX_ORDER + 1];
        e[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * self.coeffs[i] * e[k - i];
            }
            e[k] = acc / k as f64;
        }
        Jet {
            order: n,
            coeffs: e,
        }
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return Err(JetError::NonPositive {
                op: "ln",
                value: a0,
            });
        }
        let n = self.order;
        let mut l = [0.0; MAX_ORDER + 1];
        l[0] = a0.ln();
        for k in 1..=n {
            let mut acc = 0.0;
            for i in 1..k {
                acc += i as f64 * l[i] * self.coeffs[k - i];
            }
            l[k] = (self.coeffs[k] - acc / k as f64) / a0;
        }
        Ok(Jet {
            order: n,
            coeffs: l,
        })
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return Err(JetError::NonPositive {
                op: "sqrt",
                value: a0,
            });
        }
        let n = self.order;
        let mut s = [0.0; MAX_ORDER + 1];
        s[0] = a0.sqrt();
        for k in 1..=n {
            let mut acc = self.coeffs[k];
            for i in 1..k {
                acc -= s[i] * s[k - i];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Ok(Jet {
            order: n,
            coeffs: s,
        })
    }

    /// `(sin, cos)` computed together through their coupled recurrence.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.order;
        let mut s = [0.0; MAX_ORDER + 1];
        let mut c = [0.0; MAX_ORDER + 1];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..=n {
            let (mut sa, mut ca) = (0.0, 0.0);
            for i in 1..=k {
                let w = i as f64 * self.coeffs[i];
                sa += w * c[k - i];
                ca += w * s[k - i];
            }
            s[k] = sa / k as f64;
            c[k] = -ca / k as f64;
        }
        (
            Jet {
                order: n,
                coeffs: s,
            },
            Jet {
                order: n,
                coeffs: c,
            },
        )
    }

    pub fn powi(&self, exponent: i32) -> Result<Jet, JetError> {
        let mut base = *self;
        let mut e = exponent.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        if exponent < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Constant real exponent. Integer exponents go through repeated
    /// multiplication; anything else needs a positive base.
    pub fn powf(&self, exponent: f64) -> Result<Jet, JetError> {
        if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
            return self.powi(exponent as i32);
        }
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return Err(JetError::NonPositive {
                op: "pow",
                value: a0,
            });
        }
        let n = self.order;
        let mut p = [0.0; MAX_ORDER + 1];
        p[0] = a0.powf(exponent);
        for k in 1..=n {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += ((exponent + 1.0) * i as f64 - k as f64) * self.coeffs[i] * p[k - i];
            }
            p[k] = acc / (k as f64 * a0);
        }
        Ok(Jet {
            order: n,
            coeffs: p,
        })
    }

    pub fn abs_value(&self) -> f64 {
        self.coeffs[0].abs()
    }
}

impl ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.coeffs;
        for (a, b) in c.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        Jet {
            order: self.combined_order(&rhs),
            coeffs: c,
        }
    }
}

impl ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let n = self.combined_order(&rhs);
        let mut c = [0.0; MAX_ORDER + 1];
        for k in 0..=n {
            for i in 0..=k {
                c[k] += self.coeffs[i] * rhs.coeffs[k - i];
            }
        }
        Jet {
            order: n,
            coeffs: c,
        }
    }
}

impl ops::Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl ops::Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl ops::Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl ops::AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl ops::SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for Jet {
    fn sum<I: Iterator<Item = Jet>>(iter: I) -> Jet {
        iter.fold(Jet::zero(0), |a, b| a + b)
    }
}
