//! `extmaps`: decompose, verify, dilate and inspect linear maps on density
//! matrices described by JSON input documents.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical precondition failure,
//! 3 verification failure. With several input files each is processed
//! independently and the process exits with the largest code.

mod commands;
mod input;
mod report;
mod text;

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use extmaps::extension::Variant;
use serde::Serialize;

use commands::{Command, Outcome, Settings};
use input::ToleranceOverrides;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 1,
            Self::Precondition(_) => 2,
        }
    }

    /// Malformed data is an input error; everything the numerics reject is a
    /// precondition failure.
    pub fn from_core(e: extmaps::Error) -> Self {
        use extmaps::Error::*;
        match e {
            DimensionMismatch(_) | NonFinite | InvalidTolerance(_) | InvalidArgument(_) | NotDensityMatrix(_) => {
                Self::Input(e.to_string())
            }
            _ => Self::Precondition(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Literal,
    Symmetric,
}

#[derive(Debug, Parser)]
#[command(name = "extmaps", version, about = "Split non-completely-positive maps into completely positive parts")]
struct Cli {
    /// Relative threshold below which eigenvalues count as zero
    #[arg(long, global = true, value_name = "REL")]
    tol_eig: Option<f64>,
    /// Absolute bound for residual checks
    #[arg(long, global = true, value_name = "ABS")]
    tol_residual: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Construction used for the extension and the completely positive map
    #[arg(long, global = true, value_enum, default_value = "literal")]
    variant: VariantArg,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct Files {
    /// Input documents; `-` reads standard input
    #[arg(required = true)]
    files: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Split a map and report its decomposition
    Decompose {
        #[command(flatten)]
        files: Files,
        /// Seed for the sampled annihilation check
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decompose, then check the reconstruction on random density matrices
    Verify {
        #[command(flatten)]
        files: Files,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Build a unitary dilation of a completely positive, trace-preserving map
    Dilate {
        #[command(flatten)]
        files: Files,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check whether a positive extension can produce a joint pure state
    Witness {
        #[command(flatten)]
        files: Files,
    },
    /// Extract the subsystem map induced by a joint unitary
    Extract {
        #[command(flatten)]
        files: Files,
    },
}

impl Sub {
    fn split(self) -> (Command, Vec<String>) {
        match self {
            Sub::Decompose { files, seed } => (Command::Decompose { seed }, files.files),
            Sub::Verify { files, samples, seed } => (Command::Verify { samples, seed }, files.files),
            Sub::Dilate { files, samples, seed } => (Command::Dilate { samples, seed }, files.files),
            Sub::Witness { files } => (Command::Witness, files.files),
            Sub::Extract { files } => (Command::Extract, files.files),
        }
    }
}

fn read_input(path: &str) -> Result<Vec<u8>, CliError> {
    let mut bytes = Vec::new();
    let result = if path == "-" {
        io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(path).map(|b| bytes = b)
    };
    result.map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    Ok(bytes)
}

fn process(settings: &Settings, files: &[String]) -> Vec<Outcome> {
    if files.iter().filter(|f| f.as_str() == "-").count() > 1 {
        let e = CliError::Input("standard input can be named only once".into());
        return vec![Outcome {
            report: None,
            exit_code: e.exit_code(),
            diagnostic: Some(e.to_string()),
        }];
    }
    let inputs: Vec<_> = files.iter().map(|f| (f, read_input(f))).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|(path, bytes)| {
                scope.spawn(move || match bytes {
                    Ok(bytes) => commands::run(settings, path, bytes),
                    Err(e) => Outcome {
                        report: None,
                        exit_code: e.exit_code(),
                        diagnostic: Some(e.to_string()),
                    },
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum BatchEntry<'a> {
    Report(&'a report::Report),
    Error(report::BatchError),
}

fn render(format: Format, files: &[String], outcomes: &[Outcome]) -> String {
    match format {
        Format::Text => outcomes
            .iter()
            .zip(files)
            .map(|(o, f)| match &o.report {
                Some(r) => text::summary(r),
                None => format!("{f}: {}\n", o.diagnostic.as_deref().unwrap_or("failed")),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json if outcomes.len() == 1 => match &outcomes[0].report {
            Some(r) => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
            None => String::new(),
        },
        Format::Json => {
            let entries: Vec<_> = outcomes
                .iter()
                .zip(files)
                .map(|(o, f)| match &o.report {
                    Some(r) => BatchEntry::Report(r),
                    None => BatchEntry::Error(report::BatchError {
                        input: f.clone(),
                        exit_code: o.exit_code,
                        error: o.diagnostic.clone().unwrap_or_default(),
                    }),
                })
                .collect();
            serde_json::to_string_pretty(&entries).expect("reports serialize") + "\n"
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, files) = cli.command.split();
    let settings = Settings {
        command,
        tolerance: ToleranceOverrides {
            zero_eig_rel: cli.tol_eig,
            residual_abs: cli.tol_residual,
        },
        variant: match cli.variant {
            VariantArg::Literal => Variant::Literal,
            VariantArg::Symmetric => Variant::Symmetric,
        },
    };
    let outcomes = process(&settings, &files);

    let mut stderr = io::stderr().lock();
    for (outcome, file) in outcomes.iter().zip(&files) {
        if let Some(d) = &outcome.diagnostic {
            let _ = writeln!(stderr, "extmaps: {file}: {d}");
        }
    }
    let _ = io::stdout().lock().write_all(render(cli.format, &files, &outcomes).as_bytes());

    let code = outcomes.iter().map(|o| o.exit_code).max().unwrap_or(0);
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
