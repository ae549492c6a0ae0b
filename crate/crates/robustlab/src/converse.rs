//! The one-way-function converse: a candidate function built from a task
//! and its perturbation adversary, a total-variation lower bound
//! certified by any robust classifier, and the distinguisher battery
//! that probes computational closeness of the perturbed classes.

use crate::algebra::gf2::Gf2Vec;
use crate::algebra::rng::RngStream;
use crate::error::{Error, Result};
use crate::framework::baseline::{train_baseline, BaselineKind};
use crate::framework::eval::{evaluate, hoeffding_radius, ExperimentReport};
use crate::framework::task::{Adversary, Classification, Classifier, Payload, TaskFamily, TaskInstance};
use crate::parallel::{sum_over, Parallelism};
use serde::{Deserialize, Serialize};

/// Farness constant of the folklore construction.
pub const TV_THRESHOLD: f64 = 0.8;

/// f(b, r) = serialized P(sample from D_b with randomness r).
pub struct OwfCandidate<'a> {
    pub task: &'a dyn TaskFamily,
    pub adversary: &'a Adversary,
    /// Declared input randomness length in bits.
    pub r_len: usize,
}

pub fn payload_bytes(p: &Payload) -> Vec<u8> {
    match p {
        Payload::Bits(v) => v.to_bytes(),
        Payload::Mod(v) => {
            let mut out = Vec::with_capacity(v.len() * 8);
            for i in 0..v.len() {
                out.extend_from_slice(&v.get(i).to_le_bytes());
            }
            out
        }
    }
}

impl<'a> OwfCandidate<'a> {
    pub fn new(task: &'a dyn TaskFamily, adversary: &'a Adversary, r_len: usize) -> Self {
        OwfCandidate { task, adversary, r_len }
    }

    /// Deterministic evaluation: r seeds the sampling and perturbation.
    pub fn eval(&self, b: bool, r: &Gf2Vec) -> Result<Vec<u8>> {
        if r.len() != self.r_len {
            return Err(Error::DimensionMismatch(format!(
                "randomness length {} != declared {}",
                r.len(),
                self.r_len
            )));
        }
        let stream = RngStream::from_seed_bytes(&r.to_bytes()).derive("owf-candidate");
        let mut rng = stream.rng();
        let instance = self.task.sample(b, &mut rng);
        let perturbed = self.adversary.apply(&instance.payload, &mut rng)?;
        Ok(payload_bytes(&perturbed))
    }

    /// Exhaustive preimage search; functional sanity at micro scale.
    pub fn brute_force_invert(&self, target: &[u8]) -> Result<Option<(bool, u64)>> {
        if self.r_len > 20 {
            return Err(Error::SizeGuard(format!("2^{} preimages", self.r_len + 1)));
        }
        for b in [false, true] {
            for r in 0u64..(1u64 << self.r_len) {
                let rv = Gf2Vec::from_uint(r, self.r_len);
                if self.eval(b, &rv)? == target {
                    return Ok(Some((b, r)));
                }
            }
        }
        Ok(None)
    }
}

/// A certified lower bound on d_TV(P(D_0), P(D_1)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvBound {
    /// acc_1 - acc_0 of the test classifier across the perturbed classes.
    pub estimate: f64,
    pub trials: u64,
    /// Radius of the two-sided difference (sum of both Hoeffding radii).
    pub ci_radius: f64,
}

impl TvBound {
    /// The bound that holds with the configured confidence.
    pub fn certified_lower(&self) -> f64 {
        self.estimate - self.ci_radius
    }

    pub fn passes(&self) -> bool {
        self.certified_lower() >= TV_THRESHOLD
    }
}

/// Estimate E_{x <- P(D_1)}[R] - E_{x <- P(D_0)}[R]. Any classifier is an
/// admissible test function, so the estimate (minus its radius) lower
/// bounds the true total variation distance.
pub fn tv_lower_bound(
    classifier: &dyn Classifier,
    task: &dyn TaskFamily,
    adversary: &Adversary,
    trials: u64,
    stream: &RngStream,
) -> Result<TvBound> {
    assert!(trials >= 1);
    let accept_rate = |label: bool, side: &str| -> u64 {
        let side_stream = stream.derive(side);
        sum_over(trials, Parallelism::default(), |i| {
            let mut rng = side_stream.derive_index("trial", i).rng();
            let instance = task.sample(label, &mut rng);
            let perturbed = adversary.apply(&instance.payload, &mut rng).expect("adversary");
            match classifier.classify(&perturbed) {
                Classification::Label(true) => 1,
                _ => 0,
            }
        })
    };
    let acc1 = accept_rate(true, "tv-class1") as f64 / trials as f64;
    let acc0 = accept_rate(false, "tv-class0") as f64 / trials as f64;
    Ok(TvBound { estimate: acc1 - acc0, trials, ci_radius: 2.0 * hoeffding_radius(trials) })
}

/// One battery entry: a learner trained on perturbed samples and its
/// measured advantage over chance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryEntry {
    pub report: ExperimentReport,
    pub advantage: f64,
    /// True when the advantage is within the confidence radius, i.e.
    /// statistically indistinguishable from chance.
    pub within_chance: bool,
}

/// Train every baseline on fresh perturbed labeled samples and measure
/// its advantage on fresh perturbed trials.
pub fn advantage_battery(
    task: &dyn TaskFamily,
    adversary: &Adversary,
    train_per_label: usize,
    trials: u64,
    stream: &RngStream,
) -> Result<Vec<BatteryEntry>> {
    let mut entries = Vec::new();
    for kind in BaselineKind::ALL {
        let mut train_rng = stream.derive(kind.name()).derive("train").rng();
        let mut train = Vec::with_capacity(2 * train_per_label);
        for i in 0..2 * train_per_label {
            let inst = task.sample(i % 2 == 0, &mut train_rng);
            let payload = adversary.apply(&inst.payload, &mut train_rng)?;
            train.push(TaskInstance { label: inst.label, payload });
        }
        let clf = train_baseline(kind, &train)?;
        let report =
            evaluate(&clf, task, Some(adversary), trials, &stream.derive(kind.name()))?;
        let advantage = (report.estimate - 0.5).abs();
        let within_chance = advantage <= report.ci_radius;
        entries.push(BatteryEntry { report, advantage, within_chance });
    }
    Ok(entries)
}

/// Combined premise report for the converse: the statistical-farness
/// bound plus the indistinguishability battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConverseReport {
    pub version: u32,
    pub family: String,
    pub params: String,
    pub classifier: String,
    pub adversary: String,
    pub seed: String,
    pub tv: TvBound,
    pub tv_threshold: f64,
    pub battery: Vec<BatteryEntry>,
    pub farness_pass: bool,
    pub battery_pass: bool,
    pub pass: bool,
}

pub fn converse_premises(
    classifier: &dyn Classifier,
    task: &dyn TaskFamily,
    adversary: &Adversary,
    train_per_label: usize,
    trials: u64,
    stream: &RngStream,
) -> Result<ConverseReport> {
    let tv = tv_lower_bound(classifier, task, adversary, trials, &stream.derive("tv"))?;
    let battery = advantage_battery(task, adversary, train_per_label, trials, &stream.derive("battery"))?;
    let farness_pass = tv.passes();
    let battery_pass = battery.iter().all(|e| e.within_chance);
    Ok(ConverseReport {
        version: crate::framework::eval::REPORT_VERSION,
        family: task.family_id().to_string(),
        params: task.params_echo(),
        classifier: classifier.name(),
        adversary: adversary.name(),
        seed: stream.fingerprint(),
        tv,
        tv_threshold: TV_THRESHOLD,
        battery,
        farness_pass,
        battery_pass,
        pass: farness_pass && battery_pass,
    })
}
