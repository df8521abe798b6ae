//! `fundsol`: fundamental solutions of homogeneous elliptic operators from
//! the command line.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on usage
//! or validation errors.

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod dsl;
mod output;

use clap::{Args, Parser, Subcommand};
use commands::{Case, LaurentArgs, Report, Route};
use fundsol::{Error, Execution, RunConfig};
use output::Format;
use std::io::{self, Write};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "fundsol", version, about, propagate_version = true)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Sphere quadrature level (node count doubles per level in each angle).
    #[arg(long, global = true, default_value_t = 4)]
    sphere_level: u32,
    /// Uniform Gauss–Legendre panels on the radial interval.
    #[arg(long, global = true, default_value_t = 24)]
    radial_panels: usize,
    /// Truncation threshold for the Gaussian radial tail.
    #[arg(long, global = true, default_value_t = 1e-16)]
    eps_tail: f64,
    /// Laurent contour radius (default depends on the degree k).
    #[arg(long, global = true)]
    contour_radius: Option<f64>,
    /// Trapezoid nodes on the Laurent contour (power of two, at least 64).
    #[arg(long, global = true, default_value_t = 256)]
    contour_nodes: usize,
    /// Output format (default json; csv for convergence).
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    /// Seed for random spot-check points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for verification commands.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Run node loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct Target {
    /// Symbol expression, e.g. "x1^2+x2^2" or "norm^1.5".
    #[arg(long)]
    symbol: String,
    /// Space dimension n.
    #[arg(long)]
    dim: usize,
    /// Test function, e.g. gaussian:s=1 or polygauss:poly=x1^2,s=2.
    #[arg(long, default_value = "gaussian:s=1")]
    test: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pair the fundamental solution with a test function.
    Eval {
        #[command(flatten)]
        target: Target,
        /// Evaluate the convolution with the test function at this point.
        #[arg(long)]
        at: Option<String>,
    },
    /// Check that P(D) applied to the fundamental solution is the Dirac mass.
    VerifyDelta {
        /// Symbol to check instead of the default suite (requires --dim).
        #[arg(long, requires = "dim")]
        symbol: Option<String>,
        #[arg(long, requires = "symbol")]
        dim: Option<usize>,
        /// Test function; repeatable (default: three suite functions).
        #[arg(long)]
        test: Vec<String>,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
    },
    /// Laurent coefficients about z = 0 of the continued family.
    Laurent {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
        j_min: i32,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        j_max: i32,
        /// Random points where the resummed series is compared with the
        /// direct pairing.
        #[arg(long, default_value_t = 3)]
        spot_checks: usize,
    },
    /// Residues at the candidate poles z = -j/k.
    Poles {
        #[command(flatten)]
        target: Target,
        /// Pole indices, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        j: Vec<u32>,
    },
    /// Error against a known value as the sphere level increases.
    Convergence {
        #[arg(long, value_enum)]
        case: Case,
        /// Level range LO-HI (default 1-6, or 2-5 for aniso-quartic-3d).
        #[arg(long)]
        levels: Option<String>,
    },
    /// Tables of the universal constants C and D.
    Constants {
        #[arg(long, default_value_t = 10)]
        k_max: u32,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
}

impl GlobalOpts {
    fn config(&self) -> fundsol::Result<RunConfig> {
        let cfg = RunConfig {
            sphere_level: self.sphere_level,
            radial_panels: self.radial_panels,
            eps_tail: self.eps_tail,
            contour_radius: self.contour_radius,
            contour_nodes: self.contour_nodes,
            seed: self.seed,
            execution: if self.sequential {
                Execution::SEQUENTIAL
            } else {
                Execution::default()
            },
        };
        cfg.validate()?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::BadTolerance(self.tol));
        }
        Ok(cfg)
    }
}

fn parse_levels(text: &str) -> fundsol::Result<(u32, u32)> {
    let bad = || Error::InvalidArgument(format!("levels must look like 2-5, got {text:?}"));
    let (lo, hi) = text.split_once('-').unwrap_or((text, text));
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn run(cli: &Cli) -> fundsol::Result<(Report, Format)> {
    let cfg = cli.opts.config()?;
    let tol = cli.opts.tol;
    let json = cli.opts.output.unwrap_or(Format::Json);
    Ok(match &cli.command {
        Command::Eval { target, at } => (
            commands::eval(&target.symbol, target.dim, &target.test, at.as_deref(), &cfg)?,
            json,
        ),
        Command::VerifyDelta {
            symbol,
            dim,
            test,
            route,
        } => {
            let one = symbol.as_deref().zip(*dim);
            (commands::verify_delta(one, test, *route, tol, &cfg)?, json)
        }
        Command::Laurent {
            target,
            j_min,
            j_max,
            spot_checks,
        } => {
            let args = LaurentArgs {
                symbol: &target.symbol,
                dim: target.dim,
                test: &target.test,
                j_min: *j_min,
                j_max: *j_max,
                spot_checks: *spot_checks,
            };
            (commands::laurent(&args, tol, &cfg)?, json)
        }
        Command::Poles { target, j } => (
            commands::poles(&target.symbol, target.dim, &target.test, j, &cfg)?,
            json,
        ),
        Command::Convergence { case, levels } => {
            let range = match levels {
                Some(text) => parse_levels(text)?,
                None => case.default_levels(),
            };
            (
                commands::convergence(*case, range, &cfg)?,
                cli.opts.output.unwrap_or(Format::Csv),
            )
        }
        Command::Constants { k_max, n_max } => (commands::constants(*k_max, *n_max)?, json),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let (report, format) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let single = matches!(cli.command, Command::Eval { .. });
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let written = if single {
        output::emit_one(&mut out, format, &report.records[0])
    } else {
        output::emit_many(&mut out, format, &report.records)
    };
    if let Err(e) = written.and_then(|()| out.flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for note in &report.notes {
        eprintln!("{note}");
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
