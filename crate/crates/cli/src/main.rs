//! `fkdv`: derive, certify, solve and numerically check traveling-wave
//! solutions of the fifth-order KdV family.

mod args;
mod commands;
mod json;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use args::{Format, GridArgs, OutputArgs, ParamArgs, SolutionArgs, UsageError};
use commands::Output;

const EXIT_USAGE: u8 = 2;
const EXIT_NO_REAL_SOLUTION: u8 = 3;
const EXIT_VERIFICATION_FAILED: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "fkdv",
    version,
    about = "Extended tanh solutions of u_t + w u_5x + a u u_3x + b u_x u_2x + g u^2 u_x = 0"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Balance the ansatz and write the algebraic system.
    Derive {
        #[command(flatten)]
        params: ParamArgs,
        /// Use the a1 = b1 = 0 ansatz.
        #[arg(long)]
        restricted: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Certify the six families symbolically.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        family: Option<u8>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the cascade solver at concrete coefficients and k.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        /// `p/q`, integer or decimal.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample a closed-form solution on a space-time grid.
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solution: SolutionArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// PDE residual by the Riccati chain and by finite differences.
    Residual {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solution: SolutionArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.05)]
        h: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Coefficient table, certified speeds and residuals for every preset.
    Report {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.05)]
        h: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn optional(params: &ParamArgs) -> Result<Option<fkdv_core::params::RationalParams>> {
    if params.is_empty() {
        Ok(None)
    } else {
        params.resolve().map(Some)
    }
}

fn run(cli: Cli) -> Result<(Output, OutputArgs, Format)> {
    Ok(match cli.command {
        Command::Derive {
            params,
            restricted,
            out,
        } => (
            commands::derive(optional(&params)?, restricted)?,
            out,
            Format::Json,
        ),
        Command::Verify {
            params,
            family,
            out,
        } => (
            commands::verify(optional(&params)?, family)?,
            out,
            Format::Json,
        ),
        Command::Solve { params, k, out } => (
            commands::solve_cmd(params.resolve()?, &k)?,
            out,
            Format::Json,
        ),
        Command::Eval {
            params,
            solution,
            grid,
            out,
        } => {
            let p = params.resolve()?;
            let sol = commands::build_solution(&p, &solution)?;
            (commands::eval(&p, &sol, &grid.spec()?)?, out, Format::Csv)
        }
        Command::Residual {
            params,
            solution,
            grid,
            h,
            out,
        } => {
            let p = params.resolve()?;
            let sol = commands::build_solution(&p, &solution)?;
            (
                commands::residual(&p, &sol, &grid.spec()?, h)?,
                out,
                Format::Json,
            )
        }
        Command::Report { grid, h, out } => {
            (commands::report(&grid.spec()?, h)?, out, Format::Json)
        }
    })
}

fn destination(out: &OutputArgs, command: &str, ext: &str) -> Option<PathBuf> {
    out.output.clone().or_else(|| {
        out.out_dir
            .as_ref()
            .map(|d| d.join(format!("{command}.{ext}")))
    })
}

fn emit(output: &Output, out: &OutputArgs, default: Format) -> Result<()> {
    let format = out.format.unwrap_or(default);
    let (body, ext) = match format {
        Format::Json => (json::render(&output.json), "json"),
        Format::Text => (output.text.clone(), "txt"),
        Format::Csv => match &output.csv {
            Some(csv) => (csv.clone(), "csv"),
            None => return Err(UsageError(format!("{} has no CSV form", output.command)).into()),
        },
    };
    match destination(out, output.command, ext) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
        }
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .context("writing stdout"),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<fkdv_core::Error>() {
        Some(fkdv_core::Error::NegativeDiscriminant(_)) => EXIT_NO_REAL_SOLUTION,
        Some(
            fkdv_core::Error::InvalidParams(_)
            | fkdv_core::Error::Parse(_)
            | fkdv_core::Error::BranchMismatch { .. }
            | fkdv_core::Error::UnknownFamily(_)
            | fkdv_core::Error::UnknownPrinted(_)
            | fkdv_core::Error::RationalLimitNotRequested,
        ) => EXIT_USAGE,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(output, out, default)| {
        emit(&output, &out, default)?;
        Ok(output.verification_failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_VERIFICATION_FAILED)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
