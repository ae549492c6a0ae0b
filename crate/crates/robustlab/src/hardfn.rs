//! Encoded-hard-bit task families: a label bit prepended to an
//! error-corrected encoding of (x, hard_bit(x) xor label), where the
//! hard bit comes from a keyed PRF, a secret random table, or the
//! hard-core predicate of a one-way permutation.
//!
//! The first bit makes unperturbed classification trivial; the code
//! gives the secret holder a classifier robust to floor(m/8) flips; the
//! bit-zeroing adversary reduces classification to predicting the hard
//! bit itself.

use crate::algebra::gf2::Gf2Vec;
use crate::ecc::{ecc_build, Code};
use crate::error::{Error, Result};
use crate::framework::task::{
    Adversary, Classification, Classifier, Norm, Payload, TaskFamily, TaskInstance,
};
use crate::hardprim::{prf_eval, OwpInstance, PrfKey, TableFunction};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardBitVariant {
    Prf,
    AvgCase,
    Owp,
}

impl HardBitVariant {
    pub fn id(&self) -> &'static str {
        match self {
            HardBitVariant::Prf => "prf-ecc",
            HardBitVariant::AvgCase => "avgcase-ecc",
            HardBitVariant::Owp => "owp-ecc",
        }
    }
}

#[derive(Debug, Clone)]
pub enum HardBitSecret {
    Prf(PrfKey),
    Table(TableFunction),
    /// The permutation instance is public; holding it here models the
    /// inefficient classifier's access (inversion), not secrecy.
    Owp(OwpInstance),
}

#[derive(Debug, Clone)]
pub struct HardBitTask {
    secret: HardBitSecret,
    code: Code,
}

impl HardBitTask {
    pub fn prf(key: PrfKey) -> Result<Self> {
        let code = ecc_build(key.n())?;
        Ok(HardBitTask { secret: HardBitSecret::Prf(key), code })
    }

    pub fn avgcase(table: TableFunction) -> Result<Self> {
        let code = ecc_build(table.n() + 1)?;
        Ok(HardBitTask { secret: HardBitSecret::Table(table), code })
    }

    pub fn owp(inst: OwpInstance) -> Result<Self> {
        let code = ecc_build(inst.width() + 1)?;
        Ok(HardBitTask { secret: HardBitSecret::Owp(inst), code })
    }

    pub fn variant(&self) -> HardBitVariant {
        match &self.secret {
            HardBitSecret::Prf(_) => HardBitVariant::Prf,
            HardBitSecret::Table(_) => HardBitVariant::AvgCase,
            HardBitSecret::Owp(_) => HardBitVariant::Owp,
        }
    }

    pub fn secret(&self) -> &HardBitSecret {
        &self.secret
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    /// Length of the encoded part (the payload adds one label bit).
    pub fn code_len(&self) -> usize {
        self.code.code_len()
    }

    /// Perturbation radius the decode-then-check classifier tolerates.
    pub fn decode_radius(&self) -> usize {
        self.code_len() / 8
    }

    /// Draw x, compute the hard bit, encode (x, hard xor label).
    fn sample_message(&self, label: bool, rng: &mut ChaCha20Rng) -> Gf2Vec {
        match &self.secret {
            HardBitSecret::Prf(key) => {
                let x = Gf2Vec::random(key.input_len(), rng);
                let c = prf_eval(key, &x).expect("input length fixed") ^ label;
                let mut msg = x;
                let mut out = Gf2Vec::zeros(msg.len() + 1);
                for i in 0..msg.len() {
                    if msg.get(i) {
                        out.set(i, true);
                    }
                }
                out.set(msg.len(), c);
                msg = out;
                msg
            }
            HardBitSecret::Table(g) => {
                let z = Gf2Vec::random(g.n(), rng);
                let c = g.eval(&z).expect("input length fixed") ^ label;
                let mut out = Gf2Vec::zeros(g.n() + 1);
                for i in 0..z.len() {
                    if z.get(i) {
                        out.set(i, true);
                    }
                }
                out.set(g.n(), c);
                out
            }
            HardBitSecret::Owp(inst) => {
                // forward evaluations only: sample x, publish (f(x), b(x) xor label)
                let x = rng.gen_range(1..inst.p());
                let y = inst.eval(x).expect("x in domain");
                let c = inst.hardcore_bit(x).expect("x in domain") ^ label;
                let w = inst.width();
                let mut out = Gf2Vec::from_uint(y - 1, w);
                let mut full = Gf2Vec::zeros(w + 1);
                for i in 0..w {
                    if out.get(i) {
                        full.set(i, true);
                    }
                }
                full.set(w, c);
                out = full;
                out
            }
        }
    }

    /// Check a decoded message against the secret: true iff the carried
    /// bit equals the hard bit of the carried point (class 0).
    fn message_consistent(&self, msg: &Gf2Vec) -> Result<bool> {
        let body_len = msg.len() - 1;
        let c = msg.get(body_len);
        match &self.secret {
            HardBitSecret::Prf(key) => {
                let x = msg.slice(0, body_len);
                Ok(prf_eval(key, &x)? == c)
            }
            HardBitSecret::Table(g) => {
                let z = msg.slice(0, body_len);
                Ok(g.eval(&z)? == c)
            }
            HardBitSecret::Owp(inst) => {
                let y = msg.slice(0, body_len).to_uint() + 1;
                if y >= inst.p() {
                    return Err(Error::OutOfDomain);
                }
                let x = inst.invert(y)?;
                Ok(inst.hardcore_bit(x)? == c)
            }
        }
    }
}

impl TaskFamily for HardBitTask {
    fn family_id(&self) -> &'static str {
        self.variant().id()
    }

    fn params_echo(&self) -> String {
        format!(
            "msg={};m={};radius={}",
            self.code.msg_len(),
            self.code.code_len(),
            self.decode_radius()
        )
    }

    fn payload_len(&self) -> usize {
        1 + self.code.code_len()
    }

    fn norm(&self) -> Norm {
        Norm::Hamming
    }

    fn robust_radius(&self) -> u64 {
        self.decode_radius() as u64
    }

    fn sample(&self, label: bool, rng: &mut ChaCha20Rng) -> TaskInstance {
        let msg = self.sample_message(label, rng);
        let encoded = self.code.encode(&msg).expect("message length fixed");
        let mut payload = Gf2Vec::zeros(1 + encoded.len());
        payload.set(0, label);
        for i in 0..encoded.len() {
            if encoded.get(i) {
                payload.set(1 + i, true);
            }
        }
        TaskInstance { label, payload: Payload::Bits(payload) }
    }
}

/// The trivially learnable classifier: read payload bit 0.
#[derive(Debug, Clone, Copy)]
pub struct FirstBitClassifier;

impl Classifier for FirstBitClassifier {
    fn name(&self) -> String {
        "first-bit".into()
    }

    fn classify(&self, payload: &Payload) -> Classification {
        match payload.bits() {
            Ok(v) if !v.is_empty() => Classification::Label(v.get(0)),
            _ => Classification::Abstain,
        }
    }
}

/// Decode-then-check robust classifier. Requires possession of the task
/// secret. Ignores the label bit, decodes the rest, and compares the
/// carried bit to the hard bit; decode failures abstain.
#[derive(Debug, Clone)]
pub struct DecodeCheckClassifier {
    task: HardBitTask,
}

impl DecodeCheckClassifier {
    pub fn new(task: &HardBitTask) -> Self {
        DecodeCheckClassifier { task: task.clone() }
    }
}

impl Classifier for DecodeCheckClassifier {
    fn name(&self) -> String {
        "decode-check".into()
    }

    fn classify(&self, payload: &Payload) -> Classification {
        let Ok(bits) = payload.bits() else { return Classification::Abstain };
        if bits.len() != self.task.payload_len() {
            return Classification::Abstain;
        }
        let body = bits.slice(1, bits.len() - 1);
        let Ok(msg) = self.task.code().decode(&body) else {
            return Classification::Abstain;
        };
        match self.task.message_consistent(&msg) {
            Ok(consistent) => Classification::Label(!consistent),
            Err(_) => Classification::Abstain,
        }
    }
}

/// The hardness-side adversary: set the label bit to zero.
pub fn zero_first_bit_adversary() -> Adversary {
    Adversary::ZeroFirstBit
}

/// A contiguous burst of `weight` flips starting at `start`; stress
/// pattern for the decoder.
pub fn burst_adversary(start: usize, weight: usize) -> Adversary {
    Adversary::FixedPositions { positions: (start..start + weight).collect() }
}
