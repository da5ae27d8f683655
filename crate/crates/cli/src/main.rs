//! `adlp`: amplitude-damping weight enumerators and LP feasibility bounds.
//!
//! Exit codes: 0 success (and `Feasible` for `feasibility`), 1 malformed
//! input or runtime error, 2 `Infeasible` or a failed check, 3 numerical
//! failure.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "adlp", version, about = "Amplitude-damping weight enumerators and LP bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format. CSV is only available for enumerator tables.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// A/B enumerators of a code at one damping parameter.
    Enumerate(EnumerateArgs),
    /// Checks the connection-matrix identities on random codes.
    LemmaCheck(LemmaArgs),
    /// Decides feasibility of the LP for one c.
    Feasibility(FeasibilityArgs),
    /// Bisects for the largest c the LP rules out.
    ScanC(ScanArgs),
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Built-in name (leung4, shor9, trivial-zero(n), trivial-one(n)) or a JSON code file.
    #[arg(long)]
    pub code: String,
    #[arg(long)]
    pub gamma: String,
    /// Also report the Shor–Laflamme enumerators.
    #[arg(long)]
    pub sl: bool,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated damping parameters.
    #[arg(long)]
    pub gammas: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long = "constraint-set", default_value = "strengthened")]
    pub constraint_set: String,
    #[arg(long, default_value_t = 1e-7)]
    pub feasibility_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub pivot_tol: f64,
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub gammas: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the assembled program as free-format MPS.
    #[arg(long = "export-lp")]
    pub export_lp: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub gammas: String,
    #[arg(long = "c-lo")]
    pub c_lo: f64,
    #[arg(long = "c-hi")]
    pub c_hi: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli, &argv[1..]) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
