//! Construction of classifiers and adversaries from their CLI names.

use anyhow::{anyhow, bail, Result};
use robustlab::bbs::TrapdoorClassifier;
use robustlab::files::{SecretObject, TaskObject};
use robustlab::framework::task::{Adversary, Classifier};
use robustlab::hardfn::{DecodeCheckClassifier, FirstBitClassifier};
use robustlab::lpn::LpnRobustClassifier;
use robustlab::lwe::LweRobustClassifier;

pub fn build_classifier(
    name: &str,
    task: &TaskObject,
    secret: Option<&SecretObject>,
) -> Result<Box<dyn Classifier>> {
    match name {
        "first-bit" => Ok(Box::new(FirstBitClassifier)),
        "robust-E" => {
            let Some(SecretObject::LpnTrapdoor { trapdoor, .. }) = secret else {
                bail!("robust-E needs an lpn-trapdoor secret file");
            };
            Ok(Box::new(LpnRobustClassifier::new(trapdoor)))
        }
        "robust-T" => {
            let Some(SecretObject::LweTrapdoor(trapdoor)) = secret else {
                bail!("robust-T needs an lwe-trapdoor secret file");
            };
            Ok(Box::new(LweRobustClassifier::new(trapdoor)))
        }
        "decode-check" => {
            let TaskObject::HardBit(t) = task else {
                bail!("decode-check applies to prf-ecc / avgcase-ecc / owp-ecc tasks");
            };
            Ok(Box::new(DecodeCheckClassifier::new(t)))
        }
        other if other == "bbs-trapdoor" || other.starts_with("bbs-ball-") => {
            let TaskObject::Blpr(t) = task else {
                bail!("{other} applies to bbs-blpr tasks");
            };
            let Some(SecretObject::BbsFactors(key)) = secret else {
                bail!("{other} needs the bbs factorization secret file");
            };
            if key.modulus() != t.modulus() {
                bail!("secret factorization does not match the task modulus");
            }
            let radius = match other.strip_prefix("bbs-ball-") {
                None => None,
                Some(c) => Some(c.parse::<usize>().map_err(|_| anyhow!("bad ball radius"))?),
            };
            Ok(Box::new(TrapdoorClassifier::new(key.clone(), t.m(), radius)))
        }
        other => bail!("unknown classifier `{other}`"),
    }
}

/// Default weight for the `weight` adversary: the family's hardness-side
/// noise level.
fn default_weight(task: &TaskObject) -> Option<usize> {
    match task {
        TaskObject::LpnDual(t) => Some(t.params().t),
        TaskObject::LpnUniform(t) => Some(t.params().t),
        TaskObject::HardBit(t) => Some(t.decode_radius()),
        TaskObject::Blpr(_) => Some(2),
        TaskObject::Lwe(_) => None,
    }
}

pub fn build_adversary(
    name: &str,
    task: &TaskObject,
    weight: Option<usize>,
) -> Result<Option<Adversary>> {
    match name {
        "none" => Ok(None),
        "zero-first-bit" => Ok(Some(Adversary::ZeroFirstBit)),
        "weight" => {
            let w = weight
                .or_else(|| default_weight(task))
                .ok_or_else(|| anyhow!("--weight required for this family"))?;
            // budget checks for the lpn families
            match task {
                TaskObject::LpnDual(t) if w > t.params().eps => {
                    bail!("weight {w} exceeds the family budget {}", t.params().eps)
                }
                TaskObject::LpnUniform(t) if w > t.params().eps => {
                    bail!("weight {w} exceeds the family budget {}", t.params().eps)
                }
                _ => {}
            }
            Ok(Some(Adversary::FixedWeight { weight: w }))
        }
        "chi" => {
            let TaskObject::Lwe(t) = task else {
                bail!("the chi adversary applies to lwe tasks");
            };
            Ok(Some(Adversary::Chi { params: t.params().chi }))
        }
        other => bail!("unknown adversary `{other}`"),
    }
}

/// Family-appropriate defaults for the converse pipeline.
pub fn converse_defaults(
    task: &TaskObject,
    secret: Option<&SecretObject>,
    weight: Option<usize>,
) -> Result<(Box<dyn Classifier>, Adversary)> {
    let (clf_name, adv) = match task {
        TaskObject::LpnDual(_) | TaskObject::LpnUniform(_) => {
            ("robust-E", build_adversary("weight", task, weight)?.unwrap())
        }
        TaskObject::Lwe(_) => ("robust-T", build_adversary("chi", task, None)?.unwrap()),
        TaskObject::HardBit(_) => ("decode-check", Adversary::ZeroFirstBit),
        TaskObject::Blpr(_) => {
            ("bbs-trapdoor", Adversary::FixedWeight { weight: weight.unwrap_or(1) })
        }
    };
    Ok((build_classifier(clf_name, task, secret)?, adv))
}
