//! Argument handling for the `stratavol` binary.
//!
//! [`run`] takes the argument vector and two sinks so it can be driven from
//! tests without spawning a process. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | invalid input |
//! | 2 | a required volume is missing from the tables |
//! | 3 | an identity suite reported failures |

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use stratavol::checks::{self, Bounds};
use stratavol::graphs::all_graphs_with;
use stratavol::{
    completed_volume_with, fmt_rational, mv_convert, parse_rational, render, vol_q0_two_poles, Error, Exec, Format,
    Signature, VolumeKind, VolumeTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MISSING: i32 = 2;
pub const EXIT_SUITE_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stratavol", version, about = "Exact completed volumes of strata of k-differentials")]
struct Cli {
    /// Run every grid and enumeration on a single thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the star and sunflower graphs of a stratum in canonical order.
    Enumerate {
        #[arg(long)]
        k: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        mu: Vec<i64>,
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Evaluate the completed volume from one or more volume tables.
    Completed {
        #[arg(long)]
        k: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        mu: Vec<i64>,
        /// Volume table file; may be repeated, later files may not redefine keys.
        #[arg(long = "volumes")]
        volumes: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Closed-form genus-zero quadratic volume of (m1, m2, -4g_1, ..., -4g_h).
    Vol0 {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        mu: Vec<i64>,
    },
    /// Run identity suites; with no names, run all of them.
    Check {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(checks::SUITES))]
        suites: Vec<String>,
        #[arg(long)]
        max_genus: Option<i64>,
        #[arg(long)]
        max_h: Option<usize>,
    },
    /// Convert a volume to Masur-Veech normalization.
    Convert {
        #[arg(long)]
        k: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        mu: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long, value_enum, default_value_t = Kind::Completed)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Table,
    Csv,
    Json,
}

impl From<ReportFormat> for Format {
    fn from(f: ReportFormat) -> Format {
        match f {
            ReportFormat::Text => Format::Text,
            ReportFormat::Table => Format::Table,
            ReportFormat::Csv => Format::Csv,
            ReportFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Stratum,
    Completed,
}

enum Failure {
    Invalid(String),
    Lib(Error),
    Suites,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(format!("write failed: {e}"))
    }
}

/// Parses `argv` (including the program name) and executes it.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match execute(cli.command, exec, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Suites) => EXIT_SUITE_FAILED,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Lib(e @ Error::MissingVolume { .. })) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(err, "add the following lines to a volume file:");
            for line in e.missing_table_lines() {
                let _ = writeln!(err, "{line}");
            }
            EXIT_MISSING
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn execute(command: Command, exec: Exec, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Enumerate { k, mu, format } => {
            let sig = Signature::new(k, mu)?;
            let e = all_graphs_with(&sig, exec);
            log::info!(
                "{sig}: {} graphs, {} unstable suns and {} top-dimension rejections",
                e.graphs.len(),
                e.unstable_sun_rejections,
                e.top_dim_rejections
            );
            match format {
                ListFormat::Text => {
                    for g in &e.graphs {
                        writeln!(out, "{}", g.canonical())?;
                    }
                }
                ListFormat::Json => {
                    let json = serde_json::to_string_pretty(&e.graphs)
                        .map_err(|e| Failure::Invalid(format!("serialization failed: {e}")))?;
                    writeln!(out, "{json}")?;
                }
            }
        }
        Command::Completed { k, mu, volumes, format } => {
            let sig = Signature::new(k, mu)?;
            let table = if volumes.is_empty() { VolumeTable::new() } else { VolumeTable::load_files(&volumes)? };
            let report = completed_volume_with(&sig, &table, exec)?;
            write!(out, "{}", render(&report, format.into()))?;
        }
        Command::Vol0 { mu } => {
            if mu.len() < 3 {
                return Err(Failure::Invalid("--mu needs m1,m2 and at least one pole -4g".into()));
            }
            let mut genera = Vec::with_capacity(mu.len() - 2);
            for &p in &mu[2..] {
                if p >= 0 || p % 4 != 0 {
                    return Err(Failure::Invalid(format!("pole order {p} is not of the form -4g with g >= 1")));
                }
                genera.push(-p / 4);
            }
            let v = vol_q0_two_poles(mu[0], mu[1], &genera)?;
            writeln!(out, "{}", fmt_rational(&v))?;
        }
        Command::Check { suites, max_genus, max_h } => {
            let bounds = Bounds { max_genus, max_h };
            let names: Vec<&str> =
                if suites.is_empty() { checks::SUITES.to_vec() } else { suites.iter().map(String::as_str).collect() };
            let mut failed = false;
            for name in names {
                let reports = checks::run_suite(name, bounds, exec)
                    .ok_or_else(|| Failure::Invalid(format!("unknown suite `{name}`")))?;
                for r in reports {
                    writeln!(out, "{r}")?;
                    for f in &r.failures {
                        writeln!(out, "  {f}")?;
                    }
                    failed |= !r.ok();
                }
            }
            if failed {
                return Err(Failure::Suites);
            }
        }
        Command::Convert { k, mu, value, kind } => {
            let sig = Signature::new(k, mu)?;
            let v = parse_rational(&value).map_err(|e| Failure::Invalid(format!("--value: {e}")))?;
            let kind = match kind {
                Kind::Stratum => VolumeKind::StratumVolume,
                Kind::Completed => VolumeKind::CompletedVolume,
            };
            writeln!(out, "{}", mv_convert(&sig, &v, kind)?)?;
        }
    }
    Ok(())
}
