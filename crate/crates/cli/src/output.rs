//! Report emission and exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use shrinker_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_FOUND: u8 = 3;
pub const EXIT_NOT_CERTIFIED: u8 = 4;
pub const EXIT_NUMERICAL: u8 = 5;

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write an SVG plot.
    #[arg(long, value_name = "PATH")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_)
            | Error::DegenerateInput(_)
            | Error::Parse { .. }
            | Error::Transversality { .. }
            | Error::Ambiguity { .. } => EXIT_USAGE,
            Error::NotFound(_) => EXIT_NOT_FOUND,
            Error::NotAGeodesic { .. } => EXIT_NOT_CERTIFIED,
            Error::Stiffness { .. } | Error::Inconsistency(_) => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure {
        code: EXIT_NUMERICAL,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

/// A report with a JSON form and a flat CSV form.
pub trait Report: Serialize {
    type Row: Serialize;
    fn rows(&self) -> Vec<Self::Row>;
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Failure {
                code: EXIT_NUMERICAL,
                message: e.to_string(),
            })?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in report.rows() {
                w.serialize(row).map_err(|e| Failure {
                    code: EXIT_NUMERICAL,
                    message: e.to_string(),
                })?;
            }
            let bytes = w.into_inner().map_err(|e| Failure {
                code: EXIT_NUMERICAL,
                message: e.to_string(),
            })?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn emit<R: Report>(report: &R, args: &OutputArgs) -> Result<(), Failure> {
    let text = render(report, args.format)?;
    match &args.out {
        Some(path) => write_file(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure {
                code: EXIT_NUMERICAL,
                message: e.to_string(),
            })
        }
    }
}
