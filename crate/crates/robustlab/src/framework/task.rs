//! Core abstractions: labeled instances, task families, perturbation
//! adversaries and classifiers.

use crate::algebra::gauss::{trunc_gauss_vec, TruncGaussParams};
use crate::algebra::gf2::{gf2_sample_fixed_weight, Gf2Vec};
use crate::algebra::zq::ZqVec;
use crate::error::{Error, Result};
use rand_chacha::ChaCha20Rng;

/// Sample payload: a binary word or a mod-q word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Payload {
    Bits(Gf2Vec),
    Mod(ZqVec),
}

impl Payload {
    pub fn len(&self) -> usize {
        match self {
            Payload::Bits(v) => v.len(),
            Payload::Mod(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> Result<&Gf2Vec> {
        match self {
            Payload::Bits(v) => Ok(v),
            Payload::Mod(_) => Err(Error::DimensionMismatch("expected a binary payload".into())),
        }
    }

    pub fn modq(&self) -> Result<&ZqVec> {
        match self {
            Payload::Mod(v) => Ok(v),
            Payload::Bits(_) => Err(Error::DimensionMismatch("expected a mod-q payload".into())),
        }
    }

    /// Distance in the given norm; families pair Bits with Hamming and
    /// Mod with the centered l-infinity norm.
    pub fn distance(&self, other: &Payload, norm: Norm) -> Result<u64> {
        match (self, other, norm) {
            (Payload::Bits(a), Payload::Bits(b), Norm::Hamming) => {
                Ok(a.hamming_distance(b) as u64)
            }
            (Payload::Mod(a), Payload::Mod(b), Norm::CenteredLinf) => Ok(a.linf_distance(b)),
            _ => Err(Error::DimensionMismatch("payload kind / norm mismatch".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Hamming,
    CenteredLinf,
}

/// One labeled sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskInstance {
    pub label: bool,
    pub payload: Payload,
}

/// A family of labeled-sample distributions (D_0, D_1).
pub trait TaskFamily: Sync {
    fn family_id(&self) -> &'static str;
    /// Compact parameter echo for reports, e.g. "n=144;m=1152;t=3".
    fn params_echo(&self) -> String;
    fn payload_len(&self) -> usize;
    fn norm(&self) -> Norm;
    /// Perturbation budget within which the family's robust classifier
    /// is asserted to work.
    fn robust_radius(&self) -> u64;
    fn sample(&self, label: bool, rng: &mut ChaCha20Rng) -> TaskInstance;
}

/// A classifier may also abstain (decode failure); evaluation counts
/// abstentions as errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Label(bool),
    Abstain,
}

pub trait Classifier: Sync {
    fn name(&self) -> String;
    fn classify(&self, payload: &Payload) -> Classification;
}

impl<F> Classifier for (String, F)
where
    F: Fn(&Payload) -> Classification + Sync,
{
    fn name(&self) -> String {
        self.0.clone()
    }
    fn classify(&self, payload: &Payload) -> Classification {
        (self.1)(payload)
    }
}

/// Perturbation adversaries. Every output stays within `budget()` of the
/// input in the family norm; the evaluation engine asserts this on every
/// trial.
#[derive(Debug, Clone)]
pub enum Adversary {
    /// x unchanged.
    Identity,
    /// Flip a uniform set of exactly `weight` bit positions.
    FixedWeight { weight: usize },
    /// Flip `weight` bits at fixed positions (worst-case patterns).
    FixedPositions { positions: Vec<usize> },
    /// Add i.i.d. truncated-Gaussian noise per coordinate.
    Chi { params: TruncGaussParams },
    /// Add a fixed offset vector (worst-case sign-aligned patterns).
    FixedOffset { offset: ZqVec },
    /// Set payload bit 0 to zero.
    ZeroFirstBit,
}

impl Adversary {
    pub fn name(&self) -> String {
        match self {
            Adversary::Identity => "identity".into(),
            Adversary::FixedWeight { weight } => format!("weight-{weight}"),
            Adversary::FixedPositions { positions } => {
                format!("positions-{}", positions.len())
            }
            Adversary::Chi { params } => format!("chi-s{:.3}-b{}", params.sigma, params.bound),
            Adversary::FixedOffset { .. } => "fixed-offset".into(),
            Adversary::ZeroFirstBit => "zero-first-bit".into(),
        }
    }

    /// Worst-case distance this adversary can move a point, in the norm
    /// of the payloads it applies to.
    pub fn budget(&self) -> u64 {
        match self {
            Adversary::Identity => 0,
            Adversary::FixedWeight { weight } => *weight as u64,
            Adversary::FixedPositions { positions } => positions.len() as u64,
            Adversary::Chi { params } => params.bound,
            Adversary::FixedOffset { offset } => {
                (0..offset.len()).map(|i| offset.centered(i).unsigned_abs()).max().unwrap_or(0)
            }
            Adversary::ZeroFirstBit => 1,
        }
    }

    pub fn apply(&self, payload: &Payload, rng: &mut ChaCha20Rng) -> Result<Payload> {
        match (self, payload) {
            (Adversary::Identity, p) => Ok(p.clone()),
            (Adversary::FixedWeight { weight }, Payload::Bits(v)) => {
                let err = gf2_sample_fixed_weight(v.len(), *weight, rng)?;
                Ok(Payload::Bits(v.xored(&err)))
            }
            (Adversary::FixedPositions { positions }, Payload::Bits(v)) => {
                let mut out = v.clone();
                for &p in positions {
                    if p >= v.len() {
                        return Err(Error::DimensionMismatch("flip position out of range".into()));
                    }
                    out.flip(p);
                }
                Ok(Payload::Bits(out))
            }
            (Adversary::Chi { params }, Payload::Mod(v)) => {
                if params.modulus != v.modulus() {
                    return Err(Error::DimensionMismatch("chi modulus mismatch".into()));
                }
                let e = trunc_gauss_vec(params, v.len(), rng)?;
                Ok(Payload::Mod(v.add(&e)))
            }
            (Adversary::FixedOffset { offset }, Payload::Mod(v)) => {
                if offset.len() != v.len() || offset.modulus() != v.modulus() {
                    return Err(Error::DimensionMismatch("offset shape mismatch".into()));
                }
                Ok(Payload::Mod(v.add(offset)))
            }
            (Adversary::ZeroFirstBit, Payload::Bits(v)) => {
                let mut out = v.clone();
                out.set(0, false);
                Ok(Payload::Bits(out))
            }
            _ => Err(Error::DimensionMismatch("adversary / payload kind mismatch".into())),
        }
    }
}
