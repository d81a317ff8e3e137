//! Command-line front end for `matfree`.
//!
//! Every command returns its standard output as a string together with an
//! exit code, so the binary is a thin wrapper and tests can call commands
//! directly.

pub mod analyze;
pub mod compare;
pub mod example;
pub mod survey;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use matfree::arrangement::Arrangement;
use matfree::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: Error },
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { source, .. } | CliError::Core(source) => match source {
                Error::GuardExceeded { .. } | Error::HardLimit { .. } => EXIT_GUARD,
                _ => EXIT_INPUT,
            },
            CliError::Io { .. } | CliError::Usage(_) => EXIT_INPUT,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a command prints and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    pub fn ok(text: String) -> Output {
        Output { text, code: EXIT_OK }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "matfree",
    version,
    about = "MAT-freeness, MAT*-freeness and inductive freeness of hyperplane arrangements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Mat,
    Matstar,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice summary and freeness verdicts for an arrangement file.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        variant: VariantArg,
        /// Also search for an inductive-freeness derivation.
        #[arg(long)]
        indfree: bool,
        #[arg(long)]
        json: bool,
        /// Include wall-clock timing (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Re-check a certificate (or every certificate in an `analyze --json` report).
    Verify { arrangement: PathBuf, certificate: PathBuf },
    /// Reproduce the GF(2) / GF(4) example built into the tool.
    PaperExample {
        #[arg(long)]
        json: bool,
    },
    /// Read one polynomial over several fields and compare verdicts and lattices.
    CompareFields {
        path: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        fields: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Every arrangement of normalized covectors over GF(q) with at most m hyperplanes.
    Survey {
        #[arg(long)]
        field: String,
        #[arg(long)]
        dim: usize,
        #[arg(long = "max-hyperplanes")]
        max_hyperplanes: usize,
        /// Write all rows as JSON to this file instead of listing them.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Decide every union-cover query by both finite-field methods.
        #[arg(long)]
        cross_check: bool,
    },
    /// Lattice isomorphism between two arrangement files.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_arrangement(path: &Path) -> CliResult<(Arrangement, Vec<String>)> {
    let text = read_file(path)?;
    matfree::parse::read_arrangement(&text).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Name of hyperplane `i` as a linear form, e.g. `x+y`.
pub fn hyperplane_name(a: &Arrangement, vars: &[String], i: usize) -> String {
    let single = Arrangement::new(a.field(), a.dim(), vec![a.get(i).clone()]).expect("one hyperplane");
    let p = single.defining_polynomial(vars);
    match p.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        Some(inner) => inner.to_string(),
        None => p,
    }
}

pub fn run(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Analyze {
            path,
            variant,
            indfree,
            json,
            timing,
        } => {
            let (a, vars) = load_arrangement(&path)?;
            let opts = analyze::AnalyzeOptions {
                mat: variant != VariantArg::Matstar,
                matstar: variant != VariantArg::Mat,
                indfree,
                timing,
            };
            let report = analyze::analyze(&a, &vars, &opts)?;
            Ok(Output::ok(if json {
                to_json(&report)
            } else {
                analyze::render(&report)
            }))
        }
        Command::Verify {
            arrangement,
            certificate,
        } => {
            let (a, _) = load_arrangement(&arrangement)?;
            let text = read_file(&certificate)?;
            verify::verify_text(&a, &text)
        }
        Command::PaperExample { json } => {
            let report = example::run()?;
            let text = if json {
                to_json(&report)
            } else {
                example::render(&report)
            };
            Ok(Output {
                text,
                code: if report.ok { EXIT_OK } else { EXIT_MISMATCH },
            })
        }
        Command::CompareFields { path, fields, json } => {
            let text = read_file(&path)?;
            let report = compare::compare_fields(&text, &fields).map_err(|e| match e {
                CliError::Core(source) => CliError::Input {
                    path: path.display().to_string(),
                    source,
                },
                other => other,
            })?;
            Ok(Output::ok(if json {
                to_json(&report)
            } else {
                compare::render_fields(&report)
            }))
        }
        Command::Survey {
            field,
            dim,
            max_hyperplanes,
            out,
            cross_check,
        } => {
            let params = survey::SurveyParams {
                field,
                dim,
                max_hyperplanes,
                cross_check,
            };
            let result = survey::run(&params)?;
            let mut text = String::new();
            match &out {
                Some(path) => std::fs::write(path, to_json(&result)).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => text.push_str(&survey::render_rows(&result)),
            }
            text.push_str(&survey::render_summary(&result));
            Ok(Output::ok(text))
        }
        Command::Iso { a, b, json } => {
            let (x, vx) = load_arrangement(&a)?;
            let (y, vy) = load_arrangement(&b)?;
            let report = compare::iso(&x, &y)?;
            let text = if json {
                to_json(&report)
            } else {
                compare::render_iso(&report, &x, &vx, &y, &vy)
            };
            Ok(Output {
                text,
                code: if report.isomorphic { EXIT_OK } else { EXIT_INPUT },
            })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Errors are rendered the way the binary reports them.
pub fn run_args<I, T>(args: I) -> (Output, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                (Output::ok(rendered), String::new())
            } else {
                (
                    Output {
                        text: String::new(),
                        code,
                    },
                    rendered,
                )
            };
        }
    };
    match run(cli) {
        Ok(out) => (out, String::new()),
        Err(e) => (
            Output {
                text: String::new(),
                code: e.exit_code(),
            },
            format!("error: {e}\n"),
        ),
    }
}
