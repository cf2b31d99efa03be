use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use traceform::cli::{self, Report, ScanOptions};
use traceform::exec::Exec;

/// Integral trace forms of number fields: invariants, isometry decisions and
/// genus-symbol cross-checks. Records are JSON lines
/// `{"label", "poly", "basis"?, "splitting"?, "galois"?}`, coefficients
/// constant term first.
#[derive(Parser)]
#[command(name = "traceform", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, signature, splitting and ramification factors per field.
    Invariants {
        /// Record file, or `-` for standard input.
        input: String,
    },
    /// Decide a pair with every applicable criterion.
    Compare {
        /// Record file, or `-` for standard input.
        input: String,
        /// Label of the first field.
        a: String,
        /// Label of the second field.
        b: String,
        /// Also compare genus symbols of the trace forms.
        #[arg(long)]
        oracle: bool,
        /// Search for an explicit isometry with entries bounded by this.
        #[arg(long, value_name = "B")]
        witness_bound: Option<u32>,
    },
    /// Pairwise decisions within groups, or over an exhaustive cubic search.
    Scan {
        /// Record file, `-` for standard input; may be omitted with --cubic-search.
        input: Option<String>,
        /// Only pair fields of equal discriminant.
        #[arg(long)]
        group_by_disc: bool,
        /// Add every cubic field with |disc| <= N.
        #[arg(long, value_name = "N")]
        cubic_search: Option<u64>,
        /// Search for an explicit isometry on every decided pair.
        #[arg(long, value_name = "B")]
        witness_bound: Option<u32>,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Independent checks of trace forms against the invariants.
    OracleCheck {
        /// Record file, or `-` for standard input.
        input: String,
    },
}

fn run(cmd: Command) -> Report {
    let records = match &cmd {
        Command::Scan { input: None, cubic_search: Some(_), .. } => Ok(Vec::new()),
        Command::Scan { input, .. } => cli::ingest(input.as_deref().unwrap_or("-")),
        Command::Invariants { input } | Command::Compare { input, .. } | Command::OracleCheck { input } => cli::ingest(input),
    };
    let records = match records {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Report { lines: Vec::new(), exit: e.exit_code() };
        }
    };
    match cmd {
        Command::Invariants { .. } => cli::cmd_invariants(&records),
        Command::Compare { a, b, oracle, witness_bound, .. } => cli::cmd_compare(&records, &a, &b, oracle, witness_bound),
        Command::Scan { group_by_disc, cubic_search, witness_bound, sequential, .. } => {
            let exec = if sequential { Exec::Sequential } else { Exec::default() };
            cli::cmd_scan(&records, &ScanOptions { group_by_disc, cubic_search, witness_bound, exec })
        }
        Command::OracleCheck { .. } => cli::cmd_oracle_check(&records),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = run(cli.command);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(report.render().as_bytes());
    for line in &report.lines {
        if let Some(msg) = line.get("error") {
            eprintln!("error: {}", msg.as_str().unwrap_or_default());
        }
    }
    ExitCode::from(report.exit as u8)
}
