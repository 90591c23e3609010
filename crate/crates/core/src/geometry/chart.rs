use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Interval with possibly infinite ends. Serialized as `[lo, hi]` with
/// `null` standing for an infinite bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains_open(&self, v: f64) -> bool {
        v > self.lo && v < self.hi
    }

    pub fn contains_closed(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `n >= 2` evenly spaced values including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![self.lo];
        }
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let f = |v: f64| v.is_finite().then_some(v);
        [f(self.lo), f(self.hi)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[Option<f64>; 2]>::deserialize(d)?;
        Ok(Interval {
            lo: lo.unwrap_or(f64::NEG_INFINITY),
            hi: hi.unwrap_or(f64::INFINITY),
        })
    }
}

pub type Point = [f64; 3];

/// Coordinate chart on an open box of R^3.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    names: [String; 3],
    domain: [Interval; 3],
    sample_box: [Interval; 3],
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ChartError {
    #[error("coordinate names must be distinct identifiers, got {0:?}")]
    BadNames([String; 3]),
    #[error("sample box for {0:?} must be a bounded interval inside the domain")]
    BadSampleBox(String),
}

impl Chart {
    pub fn new(
        names: [String; 3],
        domain: [Interval; 3],
        sample_box: [Interval; 3],
    ) -> Result<Self, ChartError> {
        let ident = |s: &str| {
            let mut c = s.chars();
            c.next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && c.all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        if !names.iter().all(|n| ident(n))
            || names[0] == names[1]
            || names[0] == names[2]
            || names[1] == names[2]
        {
            return Err(ChartError::BadNames(names));
        }
        for i in 0..3 {
            let b = sample_box[i];
            let d = domain[i];
            if !b.is_bounded() || b.lo > b.hi || !d.contains_open(b.lo) || !d.contains_open(b.hi) {
                return Err(ChartError::BadSampleBox(names[i].clone()));
            }
        }
        Ok(Chart {
            names,
            domain,
            sample_box,
        })
    }

    /// Cartesian `x, y, z` on all of R^3 with the given sample box.
    pub fn cartesian(sample_box: [Interval; 3]) -> Self {
        Chart::new(
            ["x".into(), "y".into(), "z".into()],
            [Interval::REAL_LINE; 3],
            sample_box,
        )
        .expect("valid cartesian chart")
    }

    pub fn names(&self) -> [&str; 3] {
        [&self.names[0], &self.names[1], &self.names[2]]
    }

    pub fn domain(&self) -> &[Interval; 3] {
        &self.domain
    }

    pub fn sample_box(&self) -> &[Interval; 3] {
        &self.sample_box
    }

    pub fn in_domain(&self, p: &Point) -> bool {
        (0..3).all(|i| self.domain[i].contains_open(p[i]))
    }

    /// Uniform points in the sample box from a seeded ChaCha stream, so a
    /// given seed yields the same points on every platform.
    pub fn random_points(&self, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let mut p = [0.0; 3];
                for (i, v) in p.iter_mut().enumerate() {
                    let b = self.sample_box[i];
                    *v = if b.hi > b.lo {
                        rng.random_range(b.lo..=b.hi)
                    } else {
                        b.lo
                    };
                }
                p
            })
            .collect()
    }

    /// Tensor grid with `n` points per axis over the sample box.
    pub fn grid_points(&self, n: usize) -> Vec<Point> {
        let axes: Vec<Vec<f64>> = self.sample_box.iter().map(|b| b.linspace(n)).collect();
        let mut out = Vec::with_capacity(n * n * n);
        for &a in &axes[0] {
            for &b in &axes[1] {
                for &c in &axes[2] {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }
}
