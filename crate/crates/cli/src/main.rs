//! `fairsc` — spectral clustering with group-fairness constraints.
//!
//! Subcommands: `generate` synthetic instances, `cluster` a graph with one
//! of the three algorithms, `evaluate` an assignment against references,
//! `bench` sweep runs with timing output, and `convert` raw datasets into
//! the native formats.

mod commands;
mod runner;

use clap::{Parser, Subcommand, ValueEnum};
use fairsc_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fairsc", version, about = "Group-fair spectral clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance (graph, groups, ground truth).
    Generate {
        /// Flat key-value config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one clustering algorithm and write the assignment + run record.
    Cluster {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate an assignment file against available references.
    Evaluate {
        #[arg(long)]
        assignment: PathBuf,
        /// Ground-truth assignment file (enables the error rate).
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Groups file (enables balance and fraction tables).
        #[arg(long)]
        groups: Option<PathBuf>,
        /// Edge list (enables the normalized-cut value).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: ReportFormat,
    },
    /// Sweep runs over n, k, seeds and algorithms with timing output.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
    /// Convert a raw edge list: keep the largest connected component,
    /// assign unit weights, relabel contiguously.
    Convert {
        #[arg(long)]
        input: PathBuf,
        /// Raw groups file to remap alongside the graph.
        #[arg(long)]
        groups: Option<PathBuf>,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_groups: Option<PathBuf>,
    },
}

/// Distinct exit codes per failure class: 2 parse/config, 3 solver
/// non-convergence, 4 dense-guard, 1 anything else.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Config(_) | Error::Io(_) => 2,
        Error::ConvergenceFailure { .. }
        | Error::ShiftTooSmall { .. }
        | Error::EigNonConvergence { .. } => 3,
        Error::TooLargeForDense { .. } => 4,
        _ => 1,
    }
}

fn init_threads() {
    #[cfg(feature = "parallel")]
    if let Ok(threads) = std::env::var("FAIRSC_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { config } => commands::generate(&config),
        Command::Cluster { config } => commands::cluster(&config),
        Command::Evaluate {
            assignment,
            truth,
            groups,
            graph,
            out,
            format,
        } => commands::evaluate(
            &assignment,
            truth.as_deref(),
            groups.as_deref(),
            graph.as_deref(),
            out.as_deref(),
            format,
        ),
        Command::Bench { config } => commands::bench(&config),
        Command::Convert {
            input,
            groups,
            out_graph,
            out_groups,
        } => commands::convert(
            &input,
            groups.as_deref(),
            &out_graph,
            out_groups.as_deref(),
        ),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fairsc: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
