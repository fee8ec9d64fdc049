//! `orient`: rewriting, unification, resolution modulo and sequent proof
//! checking over theory files.
//!
//! Exit status: 0 established or valid, 1 not established, 2 a limit was
//! reached first, 3 bad input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orient_core::prover::ProverMode;
use orient_core::rewrite::DEFAULT_FUEL;
use orient_core::unify::DEFAULT_DEPTH;

#[derive(Parser, Debug)]
#[command(name = "orient", version, about = "Deduction modulo rewriting: normalize, unify, prove, check")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Text, global = true)]
    emit: Emit,
    /// Rewrite steps allowed per normalization.
    #[arg(long, default_value_t = DEFAULT_FUEL, global = true)]
    fuel: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize a term by the term rules, showing each step.
    Normalize { file: PathBuf, term: String },
    /// Decide whether two terms have the same normal form.
    Equiv { file: PathBuf, t: String, u: String },
    /// List the critical pairs of the term rules and whether each joins.
    Confluence { file: PathBuf },
    /// Enumerate unifiers modulo the term rules by narrowing.
    Unify {
        file: PathBuf,
        t: String,
        u: String,
        /// Narrowing depth bound.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Print the clauses of the axioms and the negated goal.
    Clausify {
        file: PathBuf,
        #[arg(long)]
        goal: Option<String>,
    },
    /// Search for a refutation of the axioms and the negated goal.
    Prove(ProveArgs),
    /// Check a sequent-calculus proof modulo the rewrite rules.
    Check {
        file: PathBuf,
        /// Name of a proof in the theory file.
        #[arg(long, conflicts_with = "proof_file", required_unless_present = "proof_file")]
        proof: Option<String>,
        /// Proof tree in a separate file, as JSON or indented text.
        #[arg(long)]
        proof_file: Option<PathBuf>,
        /// Reject proofs that use the cut rule.
        #[arg(long)]
        require_cut_free: bool,
    },
}

#[derive(Args, Debug)]
struct ProveArgs {
    file: PathBuf,
    #[arg(long)]
    goal: String,
    #[arg(long, value_parser = parse_mode)]
    mode: ProverMode,
    #[arg(long, default_value_t = 5000)]
    max_clauses: usize,
    #[arg(long, default_value_t = 5000)]
    max_iterations: usize,
    /// Narrowing depth bound for unification modulo the rules.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Turn the rules into axioms and run plain resolution.
    #[arg(long)]
    axiomatize: bool,
    #[arg(long)]
    no_subsumption: bool,
    #[arg(long)]
    no_tautology_deletion: bool,
}

fn parse_mode(s: &str) -> Result<ProverMode, String> {
    s.parse()
}

/// Exit status of a run, decided by its verdict alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Established = 0,
    NotEstablished = 1,
    LimitExceeded = 2,
    InputError = 3,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(Verdict::InputError as u8) } else { ExitCode::SUCCESS };
        }
    };
    let verdict = match commands::run(&cli) {
        Ok(report) => {
            match cli.emit {
                Emit::Text => print!("{}", report.text),
                Emit::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("json value")),
            }
            report.verdict
        }
        Err(e) => {
            match cli.emit {
                Emit::Text => eprintln!("error: {e}"),
                Emit::Json => println!("{}", serde_json::json!({ "verdict": "InputError", "error": e.to_string() })),
            }
            Verdict::InputError
        }
    };
    ExitCode::from(verdict as u8)
}
