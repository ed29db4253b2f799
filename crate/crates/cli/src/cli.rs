use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Spectral tree tests for linear Bayesian networks.
#[derive(Debug, Parser)]
#[command(name = "bnspect", version, about)]
pub struct Cli {
    /// Verdict tolerance (default 1e-8). Overrides BNSPECT_TOL.
    #[arg(long, global = true, env = "BNSPECT_TOL", value_parser = parse_tol)]
    pub tol: Option<f64>,

    /// Base random seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output path; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// At most one parent per vertex.
    Forest,
    /// Uniform parent counts up to --K.
    Bounded,
    /// Every forward pair with probability --p.
    Erdos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenArgs {
    pub kind: ModelKind,
    pub n: usize,
    pub k: Option<usize>,
    pub p: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random model file.
    Gen {
        kind: ModelKind,
        /// Number of vertices.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Maximum indegree (bounded).
        #[arg(long = "K", visible_alias = "k")]
        k: Option<usize>,
        /// Edge probability (erdos).
        #[arg(long)]
        p: Option<f64>,
    },
    /// Analyze a model: spectrum, identities, assumptions and tree verdicts.
    Analyze { model: PathBuf },
    /// Check one theorem on a model; exit 3 on a counterexample.
    Verify {
        model: PathBuf,
        #[arg(long)]
        theorem: Theorem,
    },
    /// Draw observations from a model as CSV.
    Sample {
        model: PathBuf,
        /// Number of observations.
        #[arg(long = "N", visible_alias = "rows", value_parser = clap::value_parser!(u64).range(1..))]
        rows: u64,
    },
    /// Analyze the estimated normalized precision of a CSV data set.
    Estimate { data: PathBuf },
    /// Run many random trials and write per-trial statistics as CSV.
    Experiment {
        kind: ModelKind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long = "K", visible_alias = "k")]
        k: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
    },
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("tolerance must be positive and finite, got {v}"))
    }
}
