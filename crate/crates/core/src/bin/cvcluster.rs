//! Command-line front end: run a preset cluster scheme or a netlist file and
//! print its report.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 netlist errors, 4 I/O errors,
//! 5 physics errors (e.g. a singular position covariance).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cvcluster::circuit::parse_circuit;
use cvcluster::optics::CylindricalMode;
use cvcluster::report::{
    build_report, default_epsilon, scheme_spec, to_csv, to_json, RunReport, Squeezing,
};
use cvcluster::Error;

#[derive(Parser)]
#[command(
    name = "cvcluster",
    version,
    about = "Continuous-variable cluster states from squeezed cylindrical beams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "A", alias = "a")]
    A,
}

#[derive(Subcommand)]
enum Command {
    /// Run one of the preset layouts.
    Scheme {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
        /// Squeezed input of scheme 1.
        #[arg(long, value_enum)]
        input: Option<Kind>,
        /// Squeeze magnitude.
        #[arg(long, allow_negative_numbers = true, conflicts_with = "db")]
        r: Option<f64>,
        /// Squeeze angle in radians.
        #[arg(long, allow_negative_numbers = true, requires = "r")]
        theta: Option<f64>,
        /// Amplitude squeezing in dB (negative = squeezed).
        #[arg(long, allow_negative_numbers = true)]
        db: Option<f64>,
        /// Transmittance of the converter loss applied to every squeezed input.
        #[arg(long)]
        loss: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = default_epsilon())]
        epsilon: f64,
    },
    /// Run a netlist file.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = default_epsilon())]
        epsilon: f64,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("cvcluster: {msg}");
    ExitCode::from(code)
}

fn physics_code(e: &Error) -> u8 {
    match e {
        Error::Wiring { .. } | Error::Parse(_) => 3,
        _ => 5,
    }
}

fn emit(report: &RunReport, format: Format) -> ExitCode {
    let text = match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    };
    print!("{text}");
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Scheme {
            id,
            input,
            r,
            theta,
            db,
            loss,
            format,
            epsilon,
        } => {
            let squeezing = match (r, db) {
                (Some(r), None) => Squeezing::Params {
                    r,
                    theta: theta.unwrap_or(0.0),
                },
                (None, Some(db)) => Squeezing::Db(db),
                _ => {
                    return fail(
                        2,
                        "give the input squeezing either as --r/--theta or as --db",
                    )
                }
            };
            let kind = input.map(|k| match k {
                Kind::R => CylindricalMode::RPlus,
                Kind::A => CylindricalMode::APlus,
            });
            let spec = match scheme_spec(id, kind, squeezing, loss) {
                Ok(s) => s,
                Err(e) => return fail(2, e),
            };
            let name = match kind {
                Some(k) => format!(
                    "scheme{id}-{}",
                    if k == CylindricalMode::RPlus {
                        "R"
                    } else {
                        "A"
                    }
                ),
                None => format!("scheme{id}"),
            };
            match build_report(&spec, &name, epsilon) {
                Ok(report) => emit(&report, format),
                Err(e) => fail(physics_code(&e), e),
            }
        }
        Command::Run {
            file,
            format,
            epsilon,
        } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail(4, format!("{}: {e}", file.display())),
            };
            let spec = match parse_circuit(&text) {
                Ok(s) => s,
                Err(e) => {
                    return fail(
                        3,
                        format!("{}:{}:{}: {e}", file.display(), e.line, e.column),
                    )
                }
            };
            match build_report(&spec, &file.display().to_string(), epsilon) {
                Ok(report) => emit(&report, format),
                Err(e) => fail(physics_code(&e), e),
            }
        }
    }
}
