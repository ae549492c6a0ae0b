//! Seeded Monte-Carlo evaluation with Hoeffding confidence bands.
//!
//! Each trial derives its own RNG from (stream, trial index), so the
//! estimate is a pure function of the seed and trial count. Trials run
//! on rayon by default and aggregation is a commutative sum, which makes
//! reports byte-identical across worker counts.

use super::task::{Adversary, Classification, Classifier, TaskFamily};
use crate::algebra::rng::RngStream;
use crate::error::Result;
use crate::parallel::{sum_over, Parallelism};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Two-sided significance level of every confidence radius (99% bands).
pub const CONFIDENCE_ALPHA: f64 = 0.01;

pub const REPORT_VERSION: u32 = 1;

/// Hoeffding radius: with probability 1 - alpha the estimate is within
/// this distance of the true mean.
pub fn hoeffding_radius(trials: u64) -> f64 {
    ((2.0 / CONFIDENCE_ALPHA).ln() / (2.0 * trials as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub version: u32,
    pub family: String,
    pub params: String,
    pub classifier: String,
    pub adversary: String,
    pub trials: u64,
    pub estimate: f64,
    pub ci_radius: f64,
    pub seed: String,
}

impl ExperimentReport {
    pub const CSV_HEADER: &'static str =
        "version,family,params,classifier,adversary,trials,estimate,ci_radius,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{:.6},{}",
            self.version,
            self.family,
            self.params,
            self.classifier,
            self.adversary,
            self.trials,
            self.estimate,
            self.ci_radius,
            self.seed
        )
    }

    pub fn csv_document(reports: &[ExperimentReport]) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn json_document(reports: &[ExperimentReport]) -> Result<String> {
        Ok(serde_json::to_string_pretty(reports)? + "\n")
    }
}

/// Estimate Pr[classifier(P(x)) = b] over b uniform, x <- D_b,
/// perturbed by `adversary` (identity when absent).
pub fn evaluate(
    classifier: &dyn Classifier,
    task: &dyn TaskFamily,
    adversary: Option<&Adversary>,
    trials: u64,
    stream: &RngStream,
) -> Result<ExperimentReport> {
    evaluate_with(classifier, task, adversary, trials, stream, Parallelism::default())
}

pub fn evaluate_with(
    classifier: &dyn Classifier,
    task: &dyn TaskFamily,
    adversary: Option<&Adversary>,
    trials: u64,
    stream: &RngStream,
    mode: Parallelism,
) -> Result<ExperimentReport> {
    assert!(trials >= 1);
    let norm = task.norm();
    let successes = sum_over(trials, mode, |i| {
        let mut rng = stream.derive_index("trial", i).rng();
        let label = rng.gen::<bool>();
        let instance = task.sample(label, &mut rng);
        let perturbed = match adversary {
            None => instance.payload.clone(),
            Some(adv) => {
                let p = adv.apply(&instance.payload, &mut rng).expect("adversary failure");
                let d = instance.payload.distance(&p, norm).expect("norm mismatch");
                assert!(
                    d <= adv.budget(),
                    "adversary exceeded its budget: {d} > {}",
                    adv.budget()
                );
                p
            }
        };
        match classifier.classify(&perturbed) {
            Classification::Label(b) if b == label => 1,
            _ => 0,
        }
    });
    Ok(ExperimentReport {
        version: REPORT_VERSION,
        family: task.family_id().to_string(),
        params: task.params_echo(),
        classifier: classifier.name(),
        adversary: adversary.map(|a| a.name()).unwrap_or_else(|| "none".into()),
        trials,
        estimate: successes as f64 / trials as f64,
        ci_radius: hoeffding_radius(trials),
        seed: stream.fingerprint(),
    })
}
