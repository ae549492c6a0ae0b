//! Task, adversary, classifier and learner abstractions plus the seeded
//! Monte-Carlo evaluation engine.

pub mod baseline;
pub mod eval;
pub mod span;
pub mod task;

pub use baseline::{train_baseline, BaselineClassifier, BaselineKind};
pub use eval::{evaluate, evaluate_with, hoeffding_radius, ExperimentReport, CONFIDENCE_ALPHA};
pub use span::{span_learner, LearnedSpanModel};
pub use task::{
    Adversary, Classification, Classifier, Norm, Payload, TaskFamily, TaskInstance,
};
