//! Task, secret, and sample file formats.
//!
//! Public task files (`robustlab-task v1`) carry everything a learner or
//! adversary may see; secret files (`robustlab-secret v1`) carry
//! trapdoors and keys and live beside them under a `.secret` suffix.
//! Code paths that model learners or adversaries must call
//! `reject_secret_path` on every input they open.

use crate::algebra::gf2::Gf2Vec;
use crate::algebra::rng::RngStream;
use crate::algebra::serial;
use crate::algebra::zq::ZqVec;
use crate::bbs::{BbsKey, BlprTask};
use crate::error::{Error, Result};
use crate::framework::task::{Payload, TaskFamily, TaskInstance};
use crate::hardfn::HardBitTask;
use crate::hardprim::{OwpInstance, PrfKey, TableFunction};
use crate::lpn::{LpnDualTask, LpnParams, LpnRegime, LpnTrapdoor, LpnUniformTask};
use crate::lwe::{LweParams, LweRegime, LweTask, LweTrapdoor};
use std::path::Path;

pub const TASK_MAGIC: &str = "robustlab-task v1";
pub const SECRET_MAGIC: &str = "robustlab-secret v1";
pub const SAMPLES_MAGIC: &str = "robustlab-samples v1";

/// Suffix that marks secret material on disk.
pub const SECRET_SUFFIX: &str = ".secret";

/// Path policy: learner- and adversary-facing commands may never read
/// secret files.
pub fn reject_secret_path(path: &Path) -> Result<()> {
    if path.to_string_lossy().ends_with(SECRET_SUFFIX) {
        return Err(Error::SecretPathRejected(path.display().to_string()));
    }
    Ok(())
}

/// A loaded public task. PRF and table variants cannot even sample
/// without their secret, so they only appear here fully assembled.
pub enum TaskObject {
    LpnDual(LpnDualTask),
    LpnUniform(LpnUniformTask),
    Lwe(LweTask),
    HardBit(HardBitTask),
    Blpr(BlprTask),
}

impl TaskObject {
    pub fn family(&self) -> &dyn TaskFamily {
        match self {
            TaskObject::LpnDual(t) => t,
            TaskObject::LpnUniform(t) => t,
            TaskObject::Lwe(t) => t,
            TaskObject::HardBit(t) => t,
            TaskObject::Blpr(t) => t,
        }
    }
}

/// Secret material, segregated from the public task description.
pub enum SecretObject {
    LpnTrapdoor { t: usize, trapdoor: LpnTrapdoor },
    LweTrapdoor(LweTrapdoor),
    PrfKey { n: usize, key: PrfKey },
    TableSeed { n: usize, seed: RngStream },
    BbsFactors(BbsKey),
}

struct LineReader<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        LineReader { lines: text.lines().peekable() }
    }

    fn expect_magic(&mut self, magic: &str) -> Result<()> {
        let line = self.next_line()?;
        if line != magic {
            return Err(Error::Version(format!("expected `{magic}`, found `{line}`")));
        }
        Ok(())
    }

    fn next_line(&mut self) -> Result<&'a str> {
        self.lines.next().ok_or_else(|| Error::Parse("unexpected end of file".into()))
    }

    fn field(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next_line()?;
        let (k, v) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("malformed line `{line}`")))?;
        if k != key {
            return Err(Error::Parse(format!("expected field `{key}`, found `{k}`")));
        }
        Ok(v)
    }

    fn field_usize(&mut self, key: &str) -> Result<usize> {
        self.field(key)?.parse().map_err(|_| Error::Parse(format!("bad integer for `{key}`")))
    }

    fn field_u64(&mut self, key: &str) -> Result<u64> {
        self.field(key)?.parse().map_err(|_| Error::Parse(format!("bad integer for `{key}`")))
    }

    fn field_f64(&mut self, key: &str) -> Result<f64> {
        self.field(key)?.parse().map_err(|_| Error::Parse(format!("bad float for `{key}`")))
    }

    fn rest(&mut self) -> impl Iterator<Item = &'a str> + '_ {
        &mut self.lines
    }
}

pub fn write_task(task: &TaskObject) -> String {
    let mut out = format!("{TASK_MAGIC}\n");
    match task {
        TaskObject::LpnDual(t) => {
            let p = t.params();
            out.push_str(&format!(
                "family lpn-trapdoor\nn {}\nm {}\nt {}\neps {}\n",
                p.n, p.m, p.t, p.eps
            ));
            out.push_str(&serial::gf2_mat_to_string(t.parity_check()));
        }
        TaskObject::LpnUniform(t) => {
            let p = t.params();
            out.push_str(&format!(
                "family lpn-uniform\nn {}\nm {}\nt {}\neps {}\n",
                p.n, p.m, p.t, p.eps
            ));
            out.push_str(&serial::gf2_mat_to_string(t.matrix()));
        }
        TaskObject::Lwe(t) => {
            let p = t.params();
            let regime = match p.regime {
                LweRegime::Trapdoor => "lwe-trapdoor",
                LweRegime::NoEfficient => "lwe-uniform",
            };
            out.push_str(&format!(
                "family {regime}\nn {}\nq {}\nm {}\nsigma {:?}\nbound {}\n",
                p.n, p.q, p.m, p.chi.sigma, p.chi.bound
            ));
            out.push_str(&serial::zq_mat_to_string(t.matrix()));
        }
        TaskObject::HardBit(t) => match t.secret() {
            crate::hardfn::HardBitSecret::Prf(key) => {
                out.push_str(&format!("family prf-ecc\nn {}\n", key.n()));
            }
            crate::hardfn::HardBitSecret::Table(g) => {
                out.push_str(&format!("family avgcase-ecc\nn {}\n", g.n()));
            }
            crate::hardfn::HardBitSecret::Owp(inst) => {
                out.push_str(&format!("family owp-ecc\np {}\n", inst.p()));
            }
        },
        TaskObject::Blpr(t) => {
            out.push_str(&format!("family bbs-blpr\nmodulus {}\nm {}\n", t.modulus(), t.m()));
        }
    }
    out
}

pub fn write_secret(secret: &SecretObject) -> String {
    let mut out = format!("{SECRET_MAGIC}\n");
    match secret {
        SecretObject::LpnTrapdoor { t, trapdoor } => {
            out.push_str(&format!("family lpn-trapdoor\nt {t}\n"));
            out.push_str(&serial::gf2_mat_to_string(trapdoor.matrix()));
        }
        SecretObject::LweTrapdoor(trapdoor) => {
            out.push_str("family lwe-trapdoor\n");
            out.push_str(&serial::zq_mat_to_string(trapdoor.matrix()));
        }
        SecretObject::PrfKey { n, key } => {
            out.push_str(&format!("family prf-ecc\nn {n}\nkey {}\n", key.to_hex()));
        }
        SecretObject::TableSeed { n, seed } => {
            out.push_str(&format!("family avgcase-ecc\nn {n}\nseed {}\n", seed.to_hex()));
        }
        SecretObject::BbsFactors(key) => {
            let (p, q) = key.primes();
            out.push_str(&format!("family bbs-blpr\np {p}\nq {q}\n"));
        }
    }
    out
}

pub fn read_secret(text: &str) -> Result<SecretObject> {
    let mut r = LineReader::new(text);
    r.expect_magic(SECRET_MAGIC)?;
    let family = r.field("family")?.to_string();
    match family.as_str() {
        "lpn-trapdoor" => {
            let t = r.field_usize("t")?;
            let e = serial::gf2_mat_from_lines(&mut r.rest())?;
            Ok(SecretObject::LpnTrapdoor { t, trapdoor: LpnTrapdoor::from_matrix(e, t)? })
        }
        "lwe-trapdoor" => {
            let m = serial::zq_mat_from_lines(&mut r.rest())?;
            Ok(SecretObject::LweTrapdoor(LweTrapdoor::from_matrix(m)?))
        }
        "prf-ecc" => {
            let n = r.field_usize("n")?;
            let key = PrfKey::from_hex(r.field("key")?, n)?;
            Ok(SecretObject::PrfKey { n, key })
        }
        "avgcase-ecc" => {
            let n = r.field_usize("n")?;
            let seed = RngStream::from_hex(r.field("seed")?)?;
            Ok(SecretObject::TableSeed { n, seed })
        }
        "bbs-blpr" => {
            let p = r.field_u64("p")?;
            let q = r.field_u64("q")?;
            Ok(SecretObject::BbsFactors(BbsKey::from_parts(p, q)?))
        }
        other => Err(Error::Parse(format!("unknown secret family `{other}`"))),
    }
}

/// Family id of a public task file, without constructing the task.
pub fn read_task_family(text: &str) -> Result<String> {
    let mut r = LineReader::new(text);
    r.expect_magic(TASK_MAGIC)?;
    Ok(r.field("family")?.to_string())
}

/// Load a public task. `secret` is required for the prf/avgcase families
/// (their distributions cannot be sampled without it) and ignored
/// otherwise.
pub fn read_task(text: &str, secret: Option<&SecretObject>) -> Result<TaskObject> {
    let mut r = LineReader::new(text);
    r.expect_magic(TASK_MAGIC)?;
    let family = r.field("family")?.to_string();
    match family.as_str() {
        "lpn-trapdoor" | "lpn-uniform" => {
            let n = r.field_usize("n")?;
            let m = r.field_usize("m")?;
            let t = r.field_usize("t")?;
            let eps = r.field_usize("eps")?;
            let mat = serial::gf2_mat_from_lines(&mut r.rest())?;
            if family == "lpn-trapdoor" {
                let params = LpnParams::custom(n, m, t, eps, LpnRegime::Trapdoor)?;
                Ok(TaskObject::LpnDual(LpnDualTask::new(params, mat)?))
            } else {
                let params = LpnParams::custom(n, m, t, eps, LpnRegime::NoEfficient)?;
                Ok(TaskObject::LpnUniform(LpnUniformTask::from_matrix(params, mat)?))
            }
        }
        "lwe-trapdoor" | "lwe-uniform" => {
            let n = r.field_usize("n")?;
            let q = r.field_u64("q")?;
            let m = r.field_usize("m")?;
            let sigma = r.field_f64("sigma")?;
            let bound = r.field_u64("bound")?;
            let chi = crate::algebra::gauss::TruncGaussParams::new(sigma, bound, q)?;
            let regime = if family == "lwe-trapdoor" {
                LweRegime::Trapdoor
            } else {
                LweRegime::NoEfficient
            };
            let params = LweParams::custom(n, q, m, chi, regime)?;
            let mat = serial::zq_mat_from_lines(&mut r.rest())?;
            Ok(TaskObject::Lwe(LweTask::new(params, mat)?))
        }
        "prf-ecc" => {
            let n = r.field_usize("n")?;
            match secret {
                Some(SecretObject::PrfKey { n: sn, key }) if *sn == n => {
                    Ok(TaskObject::HardBit(HardBitTask::prf(key.clone())?))
                }
                Some(_) => Err(Error::Parse("secret does not match the prf-ecc task".into())),
                None => Err(Error::InvalidParameter(
                    "prf-ecc sampling requires the secret key file".into(),
                )),
            }
        }
        "avgcase-ecc" => {
            let n = r.field_usize("n")?;
            match secret {
                Some(SecretObject::TableSeed { n: sn, seed }) if *sn == n => Ok(
                    TaskObject::HardBit(HardBitTask::avgcase(TableFunction::new(seed.clone(), n)?)?),
                ),
                Some(_) => Err(Error::Parse("secret does not match the avgcase-ecc task".into())),
                None => Err(Error::InvalidParameter(
                    "avgcase-ecc sampling requires the secret table seed".into(),
                )),
            }
        }
        "owp-ecc" => {
            let p = r.field_u64("p")?;
            Ok(TaskObject::HardBit(HardBitTask::owp(OwpInstance::new(p)?)?))
        }
        "bbs-blpr" => {
            let modulus = r.field_u64("modulus")?;
            let m = r.field_usize("m")?;
            Ok(TaskObject::Blpr(BlprTask::new(modulus, m)?))
        }
        other => Err(Error::Parse(format!("unknown task family `{other}`"))),
    }
}

/// Labeled sample files: payload kind header plus one `label hex` line
/// per sample.
pub fn write_samples(family_id: &str, samples: &[TaskInstance]) -> Result<String> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no samples to write".into()));
    }
    let mut out = format!("{SAMPLES_MAGIC}\nfamily {family_id}\n");
    match &samples[0].payload {
        Payload::Bits(v) => out.push_str(&format!("payload gf2 {}\n", v.len())),
        Payload::Mod(v) => out.push_str(&format!("payload zq {} {}\n", v.len(), v.modulus())),
    }
    out.push_str(&format!("count {}\n", samples.len()));
    for s in samples {
        let hex = match &s.payload {
            Payload::Bits(v) => hex::encode(v.to_bytes()),
            Payload::Mod(v) => {
                let mut bytes = Vec::with_capacity(v.len() * 8);
                for i in 0..v.len() {
                    bytes.extend_from_slice(&v.get(i).to_le_bytes());
                }
                hex::encode(bytes)
            }
        };
        out.push_str(&format!("{} {hex}\n", s.label as u8));
    }
    Ok(out)
}

pub fn read_samples(text: &str) -> Result<(String, Vec<TaskInstance>)> {
    let mut r = LineReader::new(text);
    r.expect_magic(SAMPLES_MAGIC)?;
    let family = r.field("family")?.to_string();
    let payload_desc = r.field("payload")?.to_string();
    let parts: Vec<&str> = payload_desc.split_whitespace().collect();
    let count = r.field_usize("count")?;
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let line = r.next_line()?;
        let (label, hex_str) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("malformed sample line `{line}`")))?;
        let label = match label {
            "0" => false,
            "1" => true,
            other => return Err(Error::Parse(format!("bad label `{other}`"))),
        };
        let bytes = hex::decode(hex_str).map_err(|e| Error::Parse(e.to_string()))?;
        let payload = match parts.as_slice() {
            ["gf2", len] => {
                let len: usize =
                    len.parse().map_err(|_| Error::Parse("bad payload length".into()))?;
                Payload::Bits(Gf2Vec::from_bytes(&bytes, len)?)
            }
            ["zq", len, q] => {
                let len: usize =
                    len.parse().map_err(|_| Error::Parse("bad payload length".into()))?;
                let q: u64 = q.parse().map_err(|_| Error::Parse("bad modulus".into()))?;
                if bytes.len() != len * 8 {
                    return Err(Error::Parse("payload byte length mismatch".into()));
                }
                let mut entries = Vec::with_capacity(len);
                for c in 0..len {
                    let mut w = [0u8; 8];
                    w.copy_from_slice(&bytes[c * 8..(c + 1) * 8]);
                    let v = u64::from_le_bytes(w);
                    if v >= q {
                        return Err(Error::Parse(format!("entry {v} >= modulus {q}")));
                    }
                    entries.push(v);
                }
                Payload::Mod(ZqVec::from_entries(entries, q))
            }
            _ => return Err(Error::Parse(format!("bad payload header `{payload_desc}`"))),
        };
        samples.push(TaskInstance { label, payload });
    }
    Ok((family, samples))
}
