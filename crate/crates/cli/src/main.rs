use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cogredient_cli::{
    cmd_classify, cmd_oracle, cmd_random, cmd_reduce, cmd_selftest, CliError, MatrixDocument,
    ORACLE_DEFAULT_BUDGET,
};

/// Classify symmetric bilinear forms over finite local rings of odd
/// characteristic into their standard congruence forms.
#[derive(Parser)]
#[command(name = "cogredient", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a matrix document: invariants only, no witness.
    Classify {
        /// Ring spec; must agree with the document's ring when given.
        #[arg(long)]
        ring: Option<String>,
        /// Input matrix document (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reduce a matrix document to its standard form with an explicit witness.
    Reduce {
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Re-multiply the witness against the input and record the check.
        #[arg(long)]
        verify: bool,
        /// Omit the witness matrix from the output document.
        #[arg(long = "no-witness")]
        no_witness: bool,
    },
    /// Exhaustively verify the two-orbit classification on a small ring.
    Oracle {
        #[arg(long)]
        ring: String,
        /// Matrix rank.
        #[arg(long)]
        n: usize,
        /// State budget: |R|^(n(n+1)/2) must not exceed this.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit seeded random symmetric invertible matrix documents (JSON lines).
    Random {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in invariant suites and report pass/fail.
    Selftest,
}

fn read_document(path: &PathBuf) -> Result<MatrixDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("invalid document: {e}")))
}

fn write_output(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.cmd {
        Cmd::Classify {
            ring,
            input,
            output,
        } => {
            let doc = read_document(&input)?;
            let result = cmd_classify(&doc, ring.as_deref())?;
            write_output(output.as_ref(), &to_pretty_json(&result)?)?;
            Ok(true)
        }
        Cmd::Reduce {
            ring,
            input,
            output,
            verify,
            no_witness,
        } => {
            let doc = read_document(&input)?;
            let result = cmd_reduce(&doc, ring.as_deref(), verify, !no_witness)?;
            write_output(output.as_ref(), &to_pretty_json(&result)?)?;
            Ok(true)
        }
        Cmd::Oracle {
            ring,
            n,
            budget,
            output,
        } => {
            let report = cmd_oracle(&ring, n, budget.unwrap_or(ORACLE_DEFAULT_BUDGET))?;
            let pass = report.pass;
            write_output(output.as_ref(), &to_pretty_json(&report)?)?;
            Ok(pass)
        }
        Cmd::Random {
            ring,
            n,
            seed,
            count,
            output,
        } => {
            let docs = cmd_random(&ring, n, seed, count)?;
            let mut text = String::new();
            for doc in &docs {
                text.push_str(
                    &serde_json::to_string(doc).map_err(|e| CliError::Io(e.to_string()))?,
                );
                text.push('\n');
            }
            write_output(output.as_ref(), &text)?;
            Ok(true)
        }
        Cmd::Selftest => {
            let mut stdout = std::io::stdout().lock();
            Ok(cmd_selftest(&mut stdout))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
