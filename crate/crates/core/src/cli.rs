//! Command-line front end.
//!
//! Exit codes: 0 success or feasible, 1 output could not be written, 2 usage
//! error or out-of-range argument, 3 infeasible, 4 invalid model file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{self, Figure};
use crate::error::Error;
use crate::hvmodel::{sample_experiment, HiddenVariableModel};
use crate::metrics::profile;
use crate::{oracle, saturate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "bellrelax", version, about = "One-sided relaxed CHSH bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest CHSH value under the given relaxation degrees.
    Bound {
        #[arg(long, allow_negative_numbers = true)]
        i2: f64,
        #[arg(long, allow_negative_numbers = true)]
        s12: f64,
        #[arg(long, allow_negative_numbers = true)]
        m2: f64,
        /// Evaluate at the usable shift instead of the literal s12.
        #[arg(long)]
        attainable: bool,
    },
    /// Relaxation degrees of a model file.
    Metrics {
        #[arg(long)]
        model: PathBuf,
        /// Print the profile as JSON with full precision.
        #[arg(long)]
        json: bool,
    },
    /// Write a model that reaches the bound.
    Saturate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, allow_negative_numbers = true)]
        i2: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        s12: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        m2: Option<f64>,
        /// Weight of `lambda1` in the `y'` contexts (table1 only).
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive grid search for the largest CHSH value.
    Oracle {
        #[arg(long, allow_negative_numbers = true)]
        i2: f64,
        #[arg(long, allow_negative_numbers = true)]
        s12: f64,
        #[arg(long, allow_negative_numbers = true)]
        m2: f64,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        /// Where to write the maximising model.
        #[arg(long, default_value = "argmax.json")]
        out: PathBuf,
    },
    /// Tradeoff surface as CSV.
    Tradeoff {
        #[arg(long)]
        figure: u8,
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo estimate of a model's CHSH value.
    Simulate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exit 0 if violation `v` is reachable under the caps, 3 otherwise.
    Feasible {
        #[arg(long, allow_negative_numbers = true)]
        i2: f64,
        #[arg(long, allow_negative_numbers = true)]
        s12: f64,
        #[arg(long, allow_negative_numbers = true)]
        m2: f64,
        #[arg(long, allow_negative_numbers = true)]
        v: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Mi,
    Table1,
    Combined,
}

enum Failure {
    Usage(String),
    Invalid(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_argument_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn required(value: Option<f64>, flag: &str, kind: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --kind {kind}")))
}

fn load_model(path: &Path) -> Result<HiddenVariableModel, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    HiddenVariableModel::from_json(&text)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Bound { i2, s12, m2, attainable } => {
            let b = if attainable {
                bounds::attainable_bound(i2, s12, m2)?
            } else {
                bounds::chsh_bound(i2, s12, m2)?
            };
            writeln!(out, "{:.6} {}", b.value, b.regime).map_err(io_err)?;
        }
        Command::Metrics { model, json } => {
            let p = profile(&load_model(&model)?);
            if json {
                let text = serde_json::to_string_pretty(&p).expect("profile serialises");
                writeln!(out, "{text}").map_err(io_err)?;
            } else {
                let rows = [
                    ("i1", p.i1),
                    ("i2", p.i2),
                    ("i", p.i),
                    ("s12", p.s12),
                    ("s21", p.s21),
                    ("s", p.s),
                    ("m1", p.m1),
                    ("m2", p.m2),
                    ("m", p.m),
                    ("f", p.f),
                ];
                for (name, value) in rows {
                    writeln!(out, "{name:<3} {value:.6}").map_err(io_err)?;
                }
            }
        }
        Command::Saturate { kind, i2, s12, m2, p, out: path } => {
            let model = match kind {
                Kind::Mi => saturate::mi_saturating_model(required(i2, "i2", "mi")?, required(s12, "s12", "mi")?)?,
                Kind::Table1 => saturate::table1_model(required(p, "p", "table1")?)?,
                Kind::Combined => saturate::combined_saturating_model(
                    required(i2, "i2", "combined")?,
                    required(s12, "s12", "combined")?,
                    required(m2, "m2", "combined")?,
                )?,
            };
            write_file(&path, &model.to_json())?;
            writeln!(out, "chsh {:.6}", model.chsh()).map_err(io_err)?;
        }
        Command::Oracle { i2, s12, m2, resolution, out: path } => {
            let report = oracle::max_chsh_search(i2, s12, m2, resolution)?;
            let tight = oracle::check_tightness(i2, s12, m2, resolution)?;
            write_file(&path, &report.argmax_model.to_json())?;
            writeln!(out, "best_chsh   {:.6}", report.best_chsh).map_err(io_err)?;
            writeln!(out, "bound       {:.6}", tight.bound).map_err(io_err)?;
            writeln!(out, "attainable  {:.6}", tight.attainable).map_err(io_err)?;
            writeln!(out, "gap         {:.6}", tight.gap).map_err(io_err)?;
            writeln!(out, "sound       {}", tight.sound).map_err(io_err)?;
            writeln!(out, "tight       {}", tight.tight).map_err(io_err)?;
            writeln!(out, "weight_p    {:.6}", report.weight_p).map_err(io_err)?;
            writeln!(out, "resolution  {}", report.resolution).map_err(io_err)?;
            writeln!(out, "grid_points {}", report.grid_points).map_err(io_err)?;
            for (k, label) in report.argmax_model.lambdas().iter().enumerate() {
                writeln!(
                    out,
                    "{label}: E {:.6} J {:.6} T {:.6}",
                    report.per_lambda_e[k], report.per_lambda_j[k], report.per_lambda_t[k]
                )
                .map_err(io_err)?;
            }
        }
        Command::Tradeoff { figure, resolution, out: path } => {
            let figure = Figure::from_number(figure)
                .ok_or_else(|| Failure::Usage(format!("--figure must be 1, 2, 3 or 4, got {figure}")))?;
            let table = bounds::tradeoff_grid(figure, resolution)?;
            write_file(&path, &table.to_csv())?;
            writeln!(out, "{} rows", table.rows.len()).map_err(io_err)?;
        }
        Command::Simulate { model, runs, seed } => {
            let report = sample_experiment(&load_model(&model)?, runs, seed)?;
            writeln!(out, "{:.6}", report.estimate).map_err(io_err)?;
        }
        Command::Feasible { i2, s12, m2, v } => {
            let ok = bounds::feasible(i2, s12, m2, v)?;
            writeln!(out, "{}", if ok { "feasible" } else { "infeasible" }).map_err(io_err)?;
            return Ok(if ok { EXIT_OK } else { EXIT_INFEASIBLE });
        }
    }
    Ok(EXIT_OK)
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "invalid model: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}
