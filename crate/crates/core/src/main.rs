use std::path::PathBuf;
use std::process::ExitCode;

use acm_core::cli::{self, CliError, SigmaArgs};
use acm_core::reproduce;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "acm",
    version,
    about = "Almost contact metric manifolds and their curves"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Sampling {
    /// Number of random chart points.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    points: u64,
    /// Decimal or 0x-hex seed for the point set.
    #[arg(long, env = "ACM_SEED", default_value = "0xAC3", value_parser = cli::parse_seed)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the almost contact metric axioms.
    Verify {
        /// Manifold file, or builtin:NAME.
        manifold: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Classify the structure and fit (alpha, beta).
    Classify {
        manifold: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Frenet apparatus along a curve.
    Frenet {
        manifold: String,
        /// Curve file, or builtin:NAME.
        curve: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
        samples: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Test whether a curve is Legendre.
    Legendre {
        manifold: String,
        curve: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Run every acceptance criterion on the built-in fixtures.
    Reproduce {
        #[arg(long, env = "ACM_SEED", default_value = "0xAC3", value_parser = cli::parse_seed)]
        seed: u64,
        /// Print the JSON report instead of the summary table.
        #[arg(long)]
        json: bool,
    },
    /// Integrate the sigma ODE and track its first integral.
    SigmaOde {
        #[arg(long, default_value_t = 1.0, value_parser = nonzero, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        sigma0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu0: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn nonzero(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v == 0.0 || !v.is_finite() {
        return Err("must be finite and nonzero".into());
    }
    Ok(v)
}

fn run(cmd: Command) -> Result<i32, CliError> {
    let report = match cmd {
        Command::Verify {
            manifold,
            sampling: s,
        } => cli::verify(&manifold, s.points as usize, s.seed, s.tol)?,
        Command::Classify {
            manifold,
            sampling: s,
        } => cli::classify(&manifold, s.points as usize, s.seed, s.tol)?,
        Command::Frenet {
            manifold,
            curve,
            samples,
            csv,
        } => cli::frenet(
            &manifold,
            &curve,
            samples.map(|n| n as usize),
            csv.as_deref(),
        )?,
        Command::Legendre {
            manifold,
            curve,
            tol,
        } => cli::legendre(&manifold, &curve, tol)?,
        Command::Reproduce { seed, json } => {
            let (report, criteria) = cli::reproduce(seed);
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", reproduce::format_table(&criteria));
            }
            return Ok(cli::exit_code(&report));
        }
        Command::SigmaOde {
            p,
            sigma0,
            mu0,
            step,
            steps,
            csv,
        } => cli::sigma_ode(
            &SigmaArgs {
                p,
                sigma0,
                mu0,
                step,
                steps,
            },
            csv.as_deref(),
        )?,
    };
    println!("{}", report.to_json());
    for v in &report.violations {
        eprintln!("acm: precondition violated: {v}");
    }
    Ok(cli::exit_code(&report))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = run(args.command).unwrap_or_else(|e| {
        eprintln!("acm: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
