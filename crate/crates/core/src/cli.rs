//! Command implementations behind the `acm` binary. Each returns a
//! [`RunReport`]; argument parsing lives in the binary.

use std::path::Path;

use serde_json::Value;
use thiserror::Error;

use crate::curves::{check_unit_speed, CurveError, CurveSpec};
use crate::fixtures;
use crate::geometry::{AcmStructure, GeometryError, Manifold, StructureError};
use crate::report::{CheckRecord, RunReport, Table};
use crate::reproduce::{self, DRIFT_TOL};
use crate::theorem_lab::{
    first_integral, integrate_sigma, scaled_constant, LabError, OdeConfig, SigmaState,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Threshold on the frame orthonormality residual.
pub const ORTHONORMALITY_TOL: f64 = 1e-8;
/// Threshold on |∇_T B + τN|.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Step of the central difference used for ∇_T B.
pub const CLOSURE_STEP: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Singular(_) => CliError::Precondition(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Exit status for a finished report.
pub fn exit_code(report: &RunReport) -> i32 {
    if !report.violations.is_empty() {
        EXIT_PRECONDITION
    } else if report.pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Accept a decimal or `0x`-prefixed hexadecimal seed.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

/// A manifold or curve file, or `builtin:<name>` for an embedded one.
pub struct Input {
    pub label: String,
    pub text: String,
}

pub fn load(spec: &str) -> Result<Input, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let text = fixtures::builtin(name).ok_or_else(|| {
            CliError::Input(format!(
                "unknown built-in {name:?}; known: {}",
                fixtures::NAMES.join(", ")
            ))
        })?;
        return Ok(Input {
            label: spec.to_string(),
            text: text.to_string(),
        });
    }
    let text =
        std::fs::read_to_string(spec).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    Ok(Input {
        label: spec.to_string(),
        text,
    })
}

fn manifold(input: &Input) -> Result<Manifold, CliError> {
    let s = AcmStructure::from_json(&input.text)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.label)))?;
    Ok(Manifold::new(s)?)
}

fn curve(input: &Input) -> Result<CurveSpec, CliError> {
    CurveSpec::from_json(&input.text).map_err(|e| match CliError::from(e) {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", input.label)),
        other => other,
    })
}

fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

pub fn verify(
    manifold_spec: &str,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<RunReport, CliError> {
    let input = load(manifold_spec)?;
    let m = manifold(&input)?;
    let mut r = RunReport::new(vec![
        "verify".into(),
        manifold_spec.into(),
        "--points".into(),
        points.to_string(),
        "--seed".into(),
        seed.to_string(),
        "--tol".into(),
        fmt_f64(tol),
    ]);
    r.input(&input.label, input.text.as_bytes());
    r.seed = Some(seed);
    let pts = m.chart().random_points(points, seed);
    let ax = m.verify_acm_axioms(&pts)?;
    for (name, v) in [
        ("phi_squared", ax.phi_squared),
        ("eta_of_xi", ax.eta_of_xi),
        ("phi_xi", ax.phi_xi),
        ("eta_phi", ax.eta_phi),
        ("metric_compatibility", ax.metric_compatibility),
        ("eta_metric_dual", ax.eta_metric_dual),
    ] {
        r.check(CheckRecord::below(name, v, tol));
    }
    r.check(reproduce::positive_definite(
        "metric_positive_definite",
        ax.min_leading_minor,
    ));
    r.check(CheckRecord::below(
        "phi_derivative_identity",
        m.phi_derivative_identity_residual(&pts)?,
        tol,
    ));
    r.property("min_leading_minor", ax.min_leading_minor);
    r.property("two_form_antisymmetry", m.two_form_antisymmetry(&pts)?);
    r.property("contact_metric", m.is_contact_metric(&pts, tol)?);
    r.property("normal", m.is_normal(&pts, tol)?);
    r.property("points", points);
    Ok(r)
}

pub fn classify(
    manifold_spec: &str,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<RunReport, CliError> {
    let input = load(manifold_spec)?;
    let m = manifold(&input)?;
    let mut r = RunReport::new(vec![
        "classify".into(),
        manifold_spec.into(),
        "--points".into(),
        points.to_string(),
        "--seed".into(),
        seed.to_string(),
        "--tol".into(),
        fmt_f64(tol),
    ]);
    r.input(&input.label, input.text.as_bytes());
    r.seed = Some(seed);
    let pts = m.chart().random_points(points, seed);
    let c = m.classify(&pts, tol)?;
    let mut acm = CheckRecord::below("acm_axioms", c.acm.residual, tol);
    if !c.acm.holds {
        acm.pass = false;
        acm = acm.with_note("not almost contact metric (axioms or positive definiteness)");
    }
    r.check(acm);
    r.property("subtype", c.subtype.label());
    r.property("contact_metric", c.contact_metric);
    r.property("normal", c.normal);
    r.property("contact_identities", c.contact_identities);
    r.property("contact_identities_meaningful", c.contact_metric.holds);
    if let Some(fit) = &c.trans_sasakian {
        r.property("fit_residual", fit.fit_residual);
        r.property("eta_derivative_residual", fit.eta_derivative_residual);
        let mut t = Table::new(["x", "y", "z", "alpha", "beta"]);
        for ((p, a), b) in fit.points.iter().zip(&fit.alpha).zip(&fit.beta) {
            t.push(vec![
                p[0].into(),
                p[1].into(),
                p[2].into(),
                (*a).into(),
                (*b).into(),
            ]);
        }
        r.table("alpha_beta", t);
    } else {
        r.property("fit_residual", Value::Null);
    }
    Ok(r)
}

pub fn frenet(
    manifold_spec: &str,
    curve_spec: &str,
    samples: Option<usize>,
    csv: Option<&Path>,
) -> Result<RunReport, CliError> {
    let mi = load(manifold_spec)?;
    let ci = load(curve_spec)?;
    let m = manifold(&mi)?;
    let mut c = curve(&ci)?;
    if let Some(n) = samples {
        c = c.with_samples(n);
    }
    let mut cmd = vec![
        "frenet".to_string(),
        manifold_spec.into(),
        curve_spec.into(),
        "--samples".into(),
        c.samples.to_string(),
    ];
    if let Some(p) = csv {
        cmd.extend(["--csv".to_string(), p.display().to_string()]);
    }
    let mut r = RunReport::new(cmd);
    r.input(&mi.label, mi.text.as_bytes());
    r.input(&ci.label, ci.text.as_bytes());
    let speed = check_unit_speed(&m, &c)?;
    if !(speed < crate::curves::UNIT_SPEED_TOL) {
        return Err(CliError::Precondition(format!(
            "{}: curve is not unit speed (max |g(T, T) - 1| = {speed:e})",
            ci.label
        )));
    }
    let frames = m.frenet_samples(&c)?;
    let mut t = Table::new([
        "t",
        "x",
        "y",
        "z",
        "kappa",
        "tau",
        "n_defined",
        "b_defined",
        "orthonormality",
        "closure",
    ]);
    let mut ortho: f64 = 0.0;
    let mut closure: f64 = 0.0;
    for f in &frames {
        let cl = m.frenet_closure_residual(&c, f.t, CLOSURE_STEP)?;
        ortho = crate::geometry::tensor::max_residual(ortho, f.orthonormality);
        if let Some(v) = cl {
            closure = crate::geometry::tensor::max_residual(closure, v);
        }
        t.push(vec![
            f.t.into(),
            f.point[0].into(),
            f.point[1].into(),
            f.point[2].into(),
            f.kappa.into(),
            f.tau.into(),
            f.n_defined().into(),
            f.b_defined().into(),
            f.orthonormality.into(),
            cl.map(Value::from).unwrap_or(Value::Null),
        ]);
    }
    r.check(CheckRecord::below(
        "frame_orthonormality",
        ortho,
        ORTHONORMALITY_TOL,
    ));
    r.check(CheckRecord::below("frenet_closure", closure, CLOSURE_TOL));
    r.property("unit_speed_residual", speed);
    r.property("samples", c.samples);
    if let Some(path) = csv {
        write_csv(&t, path)?;
    }
    r.table("frenet", t);
    Ok(r)
}

fn write_csv(t: &Table, path: &Path) -> Result<(), CliError> {
    let f = std::fs::File::create(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    t.write_csv(f)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn legendre(manifold_spec: &str, curve_spec: &str, tol: f64) -> Result<RunReport, CliError> {
    let mi = load(manifold_spec)?;
    let ci = load(curve_spec)?;
    let m = manifold(&mi)?;
    let c = curve(&ci)?;
    let mut r = RunReport::new(vec![
        "legendre".into(),
        manifold_spec.into(),
        curve_spec.into(),
        "--tol".into(),
        fmt_f64(tol),
    ]);
    r.input(&mi.label, mi.text.as_bytes());
    r.input(&ci.label, ci.text.as_bytes());
    let l = m.is_almost_contact(&c, tol)?;
    r.check(CheckRecord::below("max_eta_of_tangent", l.max_eta, tol));
    r.property("samples", l.samples);
    r.property("unit_speed_residual", l.unit_speed_residual);
    r.property("in_domain", l.in_domain);
    if !l.in_domain {
        r.violations.push("curve leaves the chart domain".into());
    }
    if !(l.unit_speed_residual < crate::curves::UNIT_SPEED_TOL) {
        r.violations.push(format!(
            "curve is not unit speed (max |g(T, T) - 1| = {:e})",
            l.unit_speed_residual
        ));
    }
    Ok(r)
}

pub fn reproduce(seed: u64) -> (RunReport, Vec<reproduce::Criterion>) {
    let criteria = reproduce::Suite::builtin(seed).run();
    let mut r = RunReport::new(vec!["reproduce".into(), "--seed".into(), seed.to_string()]);
    r.seed = Some(seed);
    for name in fixtures::NAMES {
        r.input(
            format!("builtin:{name}"),
            fixtures::builtin(name).unwrap_or_default().as_bytes(),
        );
    }
    for c in &criteria {
        for check in &c.checks {
            let mut check = check.clone();
            check.name = format!("{}.{}", c.id, check.name);
            r.check(check);
        }
        for (k, v) in &c.details {
            r.properties.insert(format!("{}.{k}", c.id), v.clone());
        }
    }
    (r, criteria)
}

pub struct SigmaArgs {
    pub p: f64,
    pub sigma0: f64,
    pub mu0: f64,
    pub step: f64,
    pub steps: usize,
}

pub fn sigma_ode(a: &SigmaArgs, csv: Option<&Path>) -> Result<RunReport, CliError> {
    let cfg = OdeConfig::new(a.p, a.step, a.steps)?;
    let init = SigmaState::new(a.sigma0, a.mu0);
    let traj = integrate_sigma(init, &cfg)?;
    let mut cmd: Vec<String> = vec!["sigma-ode".into()];
    for (flag, v) in [
        ("--p", a.p),
        ("--sigma0", a.sigma0),
        ("--mu0", a.mu0),
        ("--step", a.step),
    ] {
        cmd.extend([flag.to_string(), fmt_f64(v)]);
    }
    cmd.extend(["--steps".to_string(), a.steps.to_string()]);
    if let Some(p) = csv {
        cmd.extend(["--csv".to_string(), p.display().to_string()]);
    }
    let mut r = RunReport::new(cmd);
    r.check(CheckRecord::below(
        "first_integral_drift",
        traj.drift(),
        DRIFT_TOL,
    ));
    r.property("first_integral", first_integral(&init));
    r.property("scaled_constant", scaled_constant(&init, &cfg));
    r.property("final_state", traj.last());
    r.property("max_abs_sigma", traj.max_abs_sigma());
    r.property("stop", traj.stop);
    r.property("steps_taken", traj.states.len() - 1);
    if let Some(path) = csv {
        let mut t = Table::new(["s", "sigma", "mu", "C"]);
        for s in &traj.states {
            t.push(vec![
                s.s.into(),
                s.sigma.into(),
                s.mu.into(),
                first_integral(s).into(),
            ]);
        }
        write_csv(&t, path)?;
    }
    Ok(r)
}
