//! The σ-ODE for a curve with constant p:
//!
//! ```text
//! dσ/ds = p μ
//! dμ/ds = −p (2σμ²/(1 − σ²) + σ)
//! ```
//!
//! i.e. σ″ + 2σσ′²/(1 − σ²) + p²σ = 0 with μ = σ′/p. Multiplying by the
//! integrating factor (1 − σ²)⁻² gives the first integral
//! C = μ²/(1 − σ²)² + 1/(1 − σ²), which is 1 exactly when σ = μ = 0.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Integration stops once |σ| reaches `1 − SINGULAR_MARGIN`.
pub const SINGULAR_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum LabError {
    #[error("p must be a non-zero finite constant, got {0}")]
    ZeroP(f64),
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("|sigma| = {0} is not below 1; the equation is singular there")]
    Singular(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SigmaState {
    pub s: f64,
    pub sigma: f64,
    pub mu: f64,
}

impl SigmaState {
    pub fn new(sigma: f64, mu: f64) -> Self {
        SigmaState { s: 0.0, sigma, mu }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeConfig {
    pub p: f64,
    pub step: f64,
    pub max_steps: usize,
}

impl OdeConfig {
    pub fn new(p: f64, step: f64, max_steps: usize) -> Result<Self, LabError> {
        if !(p.is_finite() && p != 0.0) {
            return Err(LabError::ZeroP(p));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(LabError::BadStep(step));
        }
        Ok(OdeConfig { p, step, max_steps })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    MaxSteps,
    Singularity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub states: Vec<SigmaState>,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn last(&self) -> &SigmaState {
        self.states
            .last()
            .expect("a trajectory holds its initial state")
    }

    /// max_k |C(state_k) − C(state_0)|
    pub fn drift(&self) -> f64 {
        let c0 = first_integral(&self.states[0]);
        self.states
            .iter()
            .map(|s| (first_integral(s) - c0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_sigma(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.sigma.abs())
            .fold(0.0, f64::max)
    }
}

/// (dσ/ds, dμ/ds)
pub fn sigma_rhs(state: &SigmaState, cfg: &OdeConfig) -> Result<(f64, f64), LabError> {
    let (sigma, mu, p) = (state.sigma, state.mu, cfg.p);
    let u = 1.0 - sigma * sigma;
    if !(u > 0.0) {
        return Err(LabError::Singular(sigma.abs()));
    }
    Ok((p * mu, -p * (2.0 * sigma * mu * mu / u + sigma)))
}

fn rk4_step(y: &SigmaState, cfg: &OdeConfig) -> Result<SigmaState, LabError> {
    let h = cfg.step;
    let at = |dy: (f64, f64), c: f64| SigmaState {
        s: y.s + c * h,
        sigma: y.sigma + c * h * dy.0,
        mu: y.mu + c * h * dy.1,
    };
    let k1 = sigma_rhs(y, cfg)?;
    let k2 = sigma_rhs(&at(k1, 0.5), cfg)?;
    let k3 = sigma_rhs(&at(k2, 0.5), cfg)?;
    let k4 = sigma_rhs(&at(k3, 1.0), cfg)?;
    Ok(SigmaState {
        s: y.s + h,
        sigma: y.sigma + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        mu: y.mu + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    })
}

/// Fixed-step classical RK4 from `init`, at most `cfg.max_steps` steps.
pub fn integrate_sigma(init: SigmaState, cfg: &OdeConfig) -> Result<Trajectory, LabError> {
    if !(init.sigma.abs() < 1.0 - SINGULAR_MARGIN) || !init.mu.is_finite() {
        return Err(LabError::Singular(init.sigma.abs()));
    }
    let mut states = Vec::with_capacity(cfg.max_steps + 1);
    states.push(init);
    let mut y = init;
    for _ in 0..cfg.max_steps {
        match rk4_step(&y, cfg) {
            Ok(next) if next.sigma.abs() < 1.0 - SINGULAR_MARGIN => {
                y = next;
                states.push(y);
            }
            Ok(next) => {
                states.push(next);
                return Ok(Trajectory {
                    states,
                    stop: StopReason::Singularity,
                });
            }
            Err(_) => {
                return Ok(Trajectory {
                    states,
                    stop: StopReason::Singularity,
                })
            }
        }
    }
    Ok(Trajectory {
        states,
        stop: StopReason::MaxSteps,
    })
}

/// C = μ²/(1 − σ²)² + 1/(1 − σ²)
pub fn first_integral(state: &SigmaState) -> f64 {
    let u = 1.0 - state.sigma * state.sigma;
    state.mu * state.mu / (u * u) + 1.0 / u
}

/// The constant as normalized by μ² = p²(C(1 − σ²) − 1)(1 − σ²). It is
/// not conserved by the system above unless p² = 1.
pub fn scaled_constant(state: &SigmaState, cfg: &OdeConfig) -> f64 {
    let u = 1.0 - state.sigma * state.sigma;
    (state.mu * state.mu / (cfg.p * cfg.p * u) + 1.0) / u
}

/// μ² forced by a given C at σ: (C(1 − σ²) − 1)(1 − σ²).
pub fn mu_squared(c: f64, sigma: f64) -> f64 {
    let u = 1.0 - sigma * sigma;
    (c * u - 1.0) * u
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityScan {
    pub sigmas: Vec<f64>,
    pub mu_squared: Vec<f64>,
    /// No grid point has μ² > 0.
    pub non_positive: bool,
    /// μ² = 0 exactly at σ = 0 and nowhere else on the grid.
    pub zero_only_at_origin: bool,
}

impl RigidityScan {
    pub fn holds(&self) -> bool {
        self.non_positive && self.zero_only_at_origin
    }
}

/// μ² at C = 1 on σ = (k − 99)/100, k = 0..=198.
pub fn rigidity_scan() -> RigidityScan {
    let sigmas: Vec<f64> = (0..=198).map(|k| (k as f64 - 99.0) / 100.0).collect();
    let mu_squared: Vec<f64> = sigmas.iter().map(|&s| mu_squared(1.0, s)).collect();
    let non_positive = mu_squared.iter().all(|&m| m <= 0.0);
    let zero_only_at_origin = sigmas
        .iter()
        .zip(&mu_squared)
        .all(|(&s, &m)| (m == 0.0) == (s == 0.0));
    RigidityScan {
        sigmas,
        mu_squared,
        non_positive,
        zero_only_at_origin,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub eps: f64,
    /// C − 1 for the start (ε, 0)
    pub gap: f64,
    pub max_abs_sigma: f64,
    pub drift: f64,
    pub stop: StopReason,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityProbe {
    pub rows: Vec<ProbeRow>,
    /// The gap increases strictly along eps_list (sorted ascending).
    pub monotone: bool,
}

/// Integrate from (ε, 0) for every ε and report how far C sits above 1.
pub fn rigidity_probe(cfg: &OdeConfig, eps_list: &[f64]) -> Result<RigidityProbe, LabError> {
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(f64::total_cmp);
    let rows: Vec<ProbeRow> = eps
        .par_iter()
        .map(|&e| {
            let init = SigmaState::new(e, 0.0);
            let traj = integrate_sigma(init, cfg)?;
            Ok(ProbeRow {
                eps: e,
                gap: first_integral(&init) - 1.0,
                max_abs_sigma: traj.max_abs_sigma(),
                drift: traj.drift(),
                stop: traj.stop,
            })
        })
        .collect::<Result<_, LabError>>()?;
    let monotone = rows.windows(2).all(|w| w[1].gap > w[0].gap);
    Ok(RigidityProbe { rows, monotone })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub drifts: Vec<f64>,
    /// log2 of successive drift ratios.
    pub orders: Vec<f64>,
}

/// First-integral drift over arc length `length` for each step size, and
/// the observed order between successive steps.
pub fn convergence_study(
    init: SigmaState,
    p: f64,
    length: f64,
    steps: &[f64],
) -> Result<ConvergenceStudy, LabError> {
    let drifts: Vec<f64> = steps
        .iter()
        .map(|&h| {
            let n = (length / h).round() as usize;
            let cfg = OdeConfig::new(p, h, n)?;
            Ok(integrate_sigma(init, &cfg)?.drift())
        })
        .collect::<Result<_, LabError>>()?;
    let orders = steps
        .windows(2)
        .zip(drifts.windows(2))
        .map(|(h, d)| (d[0] / d[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    Ok(ConvergenceStudy {
        steps: steps.to_vec(),
        drifts,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: f64) -> OdeConfig {
        OdeConfig::new(p, 1e-3, 100).unwrap()
    }

    #[test]
    fn origin_is_an_equilibrium() {
        assert_eq!(
            sigma_rhs(&SigmaState::new(0.0, 0.0), &cfg(1.0)).unwrap(),
            (0.0, 0.0)
        );
        assert_eq!(first_integral(&SigmaState::new(0.0, 0.0)), 1.0);
    }

    #[test]
    fn rhs_by_hand() {
        let (ds, dm) = sigma_rhs(&SigmaState::new(0.1, 0.1), &cfg(1.0)).unwrap();
        assert_eq!(ds, 0.1);
        // −(2·0.1·0.01/0.99 + 0.1)
        assert!((dm + 0.102_020_202_020_202).abs() < 1e-15);
    }

    #[test]
    fn rhs_is_odd() {
        let c = cfg(-1.7);
        let (a, b) = sigma_rhs(&SigmaState::new(0.3, -0.8), &c).unwrap();
        let (x, y) = sigma_rhs(&SigmaState::new(-0.3, 0.8), &c).unwrap();
        assert_eq!((a, b), (-x, -y));
    }

    #[test]
    fn zero_p_is_rejected() {
        assert_eq!(OdeConfig::new(0.0, 1e-3, 10), Err(LabError::ZeroP(0.0)));
        assert!(OdeConfig::new(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn singular_start_is_an_error() {
        assert!(integrate_sigma(SigmaState::new(1.0, 0.0), &cfg(1.0)).is_err());
        assert!(sigma_rhs(&SigmaState::new(-1.0, 0.0), &cfg(1.0)).is_err());
    }

    #[test]
    fn scaled_constant_matches_at_unit_p() {
        let s = SigmaState::new(0.4, -0.2);
        assert!((scaled_constant(&s, &cfg(1.0)) - first_integral(&s)).abs() < 1e-15);
        assert!((scaled_constant(&s, &cfg(2.0)) - first_integral(&s)).abs() > 1e-3);
    }
}
