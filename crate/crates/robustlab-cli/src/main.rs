//! Experiment driver: build tasks, perturb and classify samples, run
//! seeded Monte-Carlo evaluations, and verify task files.
//!
//! Exit codes: 0 on success and satisfied pass bands, 2 on a failed pass
//! band or verification, 1 on configuration or I/O errors.

mod actors;
mod commands;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "robustlab", version, about = "labeled-task robustness experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a task (and its secret, when the family has one).
    GenTask(GenTaskArgs),
    /// Apply a perturbation adversary; never touches secret material.
    Perturb(PerturbArgs),
    /// Run a classifier over a samples file.
    Classify(ClassifyArgs),
    /// Train a learner on a samples file; never touches secret material.
    Learn(LearnArgs),
    /// Seeded Monte-Carlo evaluation of a classifier against an adversary.
    Eval(EvalArgs),
    /// Combined converse-premise report (farness bound + battery).
    Converse(ConverseArgs),
    /// Re-check well-formedness and trapdoor certificates.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct GenTaskArgs {
    /// lpn-trapdoor | lpn-uniform | lwe-trapdoor | lwe-uniform |
    /// prf-ecc | avgcase-ecc | owp-ecc | bbs-blpr
    #[arg(long)]
    family: String,
    /// Dimension parameter n (lpn, lwe, prf, avgcase).
    #[arg(long)]
    n: Option<usize>,
    /// Explicit LPN overrides (micro instances).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    eps: Option<usize>,
    /// Prime for owp-ecc.
    #[arg(long)]
    p: Option<u64>,
    /// Modulus bits for bbs-blpr.
    #[arg(long)]
    bits: Option<usize>,
    /// Generator length m for bbs-blpr.
    #[arg(long)]
    prg_len: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Output base path; writes <out>.task and possibly <out>.secret.
    #[arg(long)]
    out: PathBuf,
    /// Also write <out>.samples with this many clean labeled samples.
    #[arg(long)]
    emit_samples: Option<usize>,
}

#[derive(clap::Args)]
struct PerturbArgs {
    /// Public task file; used to sample fresh instances (publicly
    /// samplable families only).
    #[arg(long, conflicts_with = "from_samples")]
    task: Option<PathBuf>,
    /// Apply the adversary to an existing samples file instead.
    #[arg(long)]
    from_samples: Option<PathBuf>,
    /// none | weight | chi | zero-first-bit
    #[arg(long)]
    adversary: String,
    #[arg(long)]
    weight: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct ClassifyArgs {
    #[arg(long)]
    task: PathBuf,
    #[arg(long)]
    secret: Option<PathBuf>,
    /// first-bit | robust-E | robust-T | decode-check | bbs-trapdoor |
    /// bbs-ball-<c>
    #[arg(long)]
    classifier: String,
    #[arg(long)]
    samples: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Exit 2 unless the accuracy reaches this band.
    #[arg(long)]
    min_estimate: Option<f64>,
}

#[derive(clap::Args)]
struct LearnArgs {
    #[arg(long)]
    task: PathBuf,
    #[arg(long)]
    samples: PathBuf,
    /// span | nearest-centroid | gf2-affine | majority-bit
    #[arg(long)]
    learner: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct EvalArgs {
    /// JSON experiment config; exclusive with the flag form.
    #[arg(long, conflicts_with_all = ["task", "classifier"])]
    config: Option<PathBuf>,
    #[arg(long)]
    task: Option<PathBuf>,
    #[arg(long)]
    secret: Option<PathBuf>,
    #[arg(long)]
    classifier: Option<String>,
    /// none | weight | chi | zero-first-bit
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    weight: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output base path; writes <out>.csv and <out>.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    min_estimate: Option<f64>,
}

#[derive(clap::Args)]
struct ConverseArgs {
    #[arg(long)]
    task: PathBuf,
    #[arg(long)]
    secret: Option<PathBuf>,
    #[arg(long)]
    weight: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1000)]
    train: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Exit 2 unless both premises hold.
    #[arg(long, default_value_t = false)]
    require_pass: bool,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    task: PathBuf,
    #[arg(long)]
    secret: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::GenTask(a) => commands::gen_task(a),
        Cmd::Perturb(a) => commands::perturb(a),
        Cmd::Classify(a) => commands::classify(a),
        Cmd::Learn(a) => commands::learn(a),
        Cmd::Eval(a) => commands::eval(a),
        Cmd::Converse(a) => commands::converse(a),
        Cmd::Verify(a) => commands::verify(a),
    };
    match outcome {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::BandFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
