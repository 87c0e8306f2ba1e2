//! `church`: synthesize, check and simulate from the command line.
//!
//! Exit status 1 means the tool failed; verdicts are reported as text. The
//! only exception is `synth --expect`, which exits with 2 when the winner
//! differs from the expected one.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "church",
    version,
    about = "Church synthesis for specifications with a periodic parameter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormulaKind {
    /// Sentence in the parameter that holds iff Player II wins.
    Win,
    /// Graph of the winner's operator for the bound parameter value.
    Strategy,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the game of a specification and write the winner's machine.
    Synth {
        spec: PathBuf,
        /// Parameter value `u;v`, overriding the file's binding.
        #[arg(long)]
        param: Option<String>,
        /// Directory for the machine table and DOT file.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Exit with status 2 unless this player wins.
        #[arg(long)]
        expect: Option<Side>,
        /// Seed for the opponents used in the cross-play check.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random opponents in the cross-play check.
        #[arg(long, default_value_t = 8)]
        opponents: usize,
    },
    /// Model-check a sentence against parameter values.
    Check {
        /// File holding the formula (`-` for standard input).
        file: Option<PathBuf>,
        /// Formula given inline instead of a file.
        #[arg(long, conflicts_with = "file")]
        expr: Option<String>,
        /// Binding `NAME=u;v`, repeatable.
        #[arg(long = "param", value_name = "NAME=u;v")]
        params: Vec<String>,
    },
    /// Run a machine table on a periodic input.
    Simulate {
        machine: PathBuf,
        /// Input literal `u;v`.
        input: String,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
    /// Print a definability formula for a specification.
    EmitFormula {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "win")]
        kind: FormulaKind,
        #[arg(long)]
        param: Option<String>,
    },
    /// Run the built-in corpus and random instances against the oracles.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth {
            spec,
            param,
            out_dir,
            expect,
            seed,
            opponents,
        } => commands::synth(&spec, param.as_deref(), &out_dir, expect, seed, opponents),
        Command::Check { file, expr, params } => {
            commands::check(file.as_deref(), expr.as_deref(), &params)
        }
        Command::Simulate {
            machine,
            input,
            steps,
        } => commands::simulate(&machine, &input, steps),
        Command::EmitFormula { spec, kind, param } => {
            commands::emit_formula(&spec, kind, param.as_deref())
        }
        Command::Selftest { seed, count } => commands::selftest(seed, count),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
