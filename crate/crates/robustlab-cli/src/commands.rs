//! Command implementations.

use crate::actors;
use anyhow::{anyhow, bail, Context, Result};
use robustlab::algebra::rng::RngStream;
use robustlab::bbs::{bbs_keygen, BlprTask};
use robustlab::converse::converse_premises;
use robustlab::files::{
    read_samples, read_secret, read_task, reject_secret_path, write_samples, write_secret,
    write_task, SecretObject, TaskObject,
};
use robustlab::framework::baseline::{train_baseline, BaselineKind};
use robustlab::framework::eval::{evaluate, hoeffding_radius, ExperimentReport, REPORT_VERSION};
use robustlab::framework::span::span_learner;
use robustlab::framework::task::{Classification, Classifier, TaskInstance};
use robustlab::hardfn::HardBitTask;
use robustlab::hardprim::{OwpInstance, PrfKey, TableFunction};
use robustlab::lpn::{lpn_trapsamp, LpnDualTask, LpnParams, LpnRegime, LpnUniformTask};
use robustlab::lwe::{lwe_trapdoor_sample, verify_trapdoor, LweParams, LweTask};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

pub enum Outcome {
    Pass,
    BandFailed,
}

fn load_task_file(path: &Path, secret: Option<&SecretObject>) -> Result<TaskObject> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(read_task(&text, secret)?)
}

fn load_secret_file(path: &Path) -> Result<SecretObject> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(read_secret(&text)?)
}

fn load_pair(task: &Path, secret: Option<&PathBuf>) -> Result<(TaskObject, Option<SecretObject>)> {
    let secret = secret.map(|p| load_secret_file(p)).transpose()?;
    let task = load_task_file(task, secret.as_ref())?;
    Ok((task, secret))
}

fn write_reports(base: &Path, reports: &[ExperimentReport]) -> Result<()> {
    let csv_path = base.with_extension("csv");
    let json_path = base.with_extension("json");
    fs::write(&csv_path, ExperimentReport::csv_document(reports))?;
    fs::write(&json_path, ExperimentReport::json_document(reports)?)?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

pub fn gen_task(a: crate::GenTaskArgs) -> Result<Outcome> {
    let stream = RngStream::from_seed_u64(a.seed).derive("gen-task");
    let mut rng = stream.rng();
    let need_n = || a.n.ok_or_else(|| anyhow!("--n required for {}", a.family));
    let (task, secret): (TaskObject, Option<SecretObject>) = match a.family.as_str() {
        "lpn-trapdoor" => {
            let n = need_n()?;
            let params = match (a.m, a.t, a.eps) {
                (None, None, None) => LpnParams::trapdoor(n)?,
                (m, t, eps) => LpnParams::custom(
                    n,
                    m.unwrap_or(8 * n),
                    t.ok_or_else(|| anyhow!("--t required with custom dims"))?,
                    eps.ok_or_else(|| anyhow!("--eps required with custom dims"))?,
                    LpnRegime::Trapdoor,
                )?,
            };
            let (h, trapdoor) = lpn_trapsamp(params.n, params.t, &mut rng)?;
            (
                TaskObject::LpnDual(LpnDualTask::new(params, h)?),
                Some(SecretObject::LpnTrapdoor { t: params.t, trapdoor }),
            )
        }
        "lpn-uniform" => {
            let n = need_n()?;
            let params = match (a.m, a.t, a.eps) {
                (None, None, None) => LpnParams::no_efficient(n)?,
                (m, t, eps) => LpnParams::custom(
                    n,
                    m.unwrap_or(8 * n),
                    t.ok_or_else(|| anyhow!("--t required with custom dims"))?,
                    eps.ok_or_else(|| anyhow!("--eps required with custom dims"))?,
                    LpnRegime::NoEfficient,
                )?,
            };
            (TaskObject::LpnUniform(LpnUniformTask::generate(params, &mut rng)?), None)
        }
        "lwe-trapdoor" => {
            let params = LweParams::trapdoor(need_n()?)?;
            let (task, trapdoor) = loop {
                let (mat, trapdoor) = lwe_trapdoor_sample(&params, &mut rng)?;
                match LweTask::new(params, mat) {
                    Ok(task) => break (task, trapdoor),
                    Err(_) => continue,
                }
            };
            (TaskObject::Lwe(task), Some(SecretObject::LweTrapdoor(trapdoor)))
        }
        "lwe-uniform" => {
            let params = LweParams::no_efficient(need_n()?)?;
            (TaskObject::Lwe(LweTask::generate_uniform(params, &mut rng)?), None)
        }
        "prf-ecc" => {
            let n = need_n()?;
            let key = PrfKey::generate(n, &mut rng);
            (
                TaskObject::HardBit(HardBitTask::prf(key.clone())?),
                Some(SecretObject::PrfKey { n, key }),
            )
        }
        "avgcase-ecc" => {
            let n = need_n()?;
            let seed = stream.derive("table-secret");
            let table = TableFunction::new(seed.clone(), n)?;
            (
                TaskObject::HardBit(HardBitTask::avgcase(table)?),
                Some(SecretObject::TableSeed { n, seed }),
            )
        }
        "owp-ecc" => {
            let p = a.p.unwrap_or(65521);
            (TaskObject::HardBit(HardBitTask::owp(OwpInstance::new(p)?)?), None)
        }
        "bbs-blpr" => {
            let bits = a.bits.unwrap_or(32);
            let m = a.prg_len.unwrap_or(16);
            let key = bbs_keygen(bits, &mut rng)?;
            (TaskObject::Blpr(BlprTask::from_key(&key, m)?), Some(SecretObject::BbsFactors(key)))
        }
        other => bail!("unknown family `{other}`"),
    };

    let task_path = a.out.with_extension("task");
    fs::write(&task_path, write_task(&task))?;
    println!("wrote {}", task_path.display());
    if let Some(secret) = &secret {
        let secret_path = a.out.with_extension("secret");
        fs::write(&secret_path, write_secret(secret))?;
        println!("wrote {}", secret_path.display());
    }
    if let Some(count) = a.emit_samples {
        let sample_stream = stream.derive("samples");
        let family = task.family();
        let samples: Vec<TaskInstance> = (0..count)
            .map(|i| {
                let mut rng = sample_stream.derive_index("sample", i as u64).rng();
                family.sample(i % 2 == 0, &mut rng)
            })
            .collect();
        let samples_path = a.out.with_extension("samples");
        fs::write(&samples_path, write_samples(family.family_id(), &samples)?)?;
        println!("wrote {}", samples_path.display());
    }
    println!("family {} params {}", task.family().family_id(), task.family().params_echo());
    Ok(Outcome::Pass)
}

pub fn perturb(a: crate::PerturbArgs) -> Result<Outcome> {
    let stream = RngStream::from_seed_u64(a.seed).derive("perturb");
    let (family_id, samples) = match (&a.task, &a.from_samples) {
        (Some(task_path), None) => {
            reject_secret_path(task_path)?;
            let task = load_task_file(task_path, None).map_err(|e| {
                anyhow!("{e}; note: perturb never reads secrets, so families that need a secret to sample must go through --from-samples")
            })?;
            let family = task.family();
            let samples: Vec<TaskInstance> = (0..a.count)
                .map(|i| {
                    let mut rng = stream.derive_index("sample", i as u64).rng();
                    family.sample(i % 2 == 0, &mut rng)
                })
                .collect();
            (family.family_id().to_string(), samples)
        }
        (None, Some(samples_path)) => {
            reject_secret_path(samples_path)?;
            let text = fs::read_to_string(samples_path)?;
            read_samples(&text)?
        }
        _ => bail!("exactly one of --task / --from-samples is required"),
    };

    let adversary = match a.adversary.as_str() {
        "none" => None,
        "zero-first-bit" => Some(robustlab::framework::task::Adversary::ZeroFirstBit),
        "weight" => Some(robustlab::framework::task::Adversary::FixedWeight {
            weight: a.weight.ok_or_else(|| anyhow!("--weight required"))?,
        }),
        other => bail!("perturb supports none | weight | zero-first-bit, not `{other}`"),
    };

    let perturbed: Vec<TaskInstance> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| -> Result<TaskInstance> {
            let payload = match &adversary {
                None => s.payload.clone(),
                Some(adv) => {
                    let mut rng = stream.derive_index("perturb", i as u64).rng();
                    adv.apply(&s.payload, &mut rng)?
                }
            };
            Ok(TaskInstance { label: s.label, payload })
        })
        .collect::<Result<_>>()?;
    fs::write(&a.out, write_samples(&family_id, &perturbed)?)?;
    println!("wrote {} perturbed samples to {}", perturbed.len(), a.out.display());
    Ok(Outcome::Pass)
}

pub fn classify(a: crate::ClassifyArgs) -> Result<Outcome> {
    let (task, secret) = load_pair(&a.task, a.secret.as_ref())?;
    let classifier = actors::build_classifier(&a.classifier, &task, secret.as_ref())?;
    let text = fs::read_to_string(&a.samples)?;
    let (_, samples) = read_samples(&text)?;
    if samples.is_empty() {
        bail!("empty samples file");
    }
    let correct = samples
        .iter()
        .filter(|s| classifier.classify(&s.payload) == Classification::Label(s.label))
        .count();
    let report = ExperimentReport {
        version: REPORT_VERSION,
        family: task.family().family_id().to_string(),
        params: task.family().params_echo(),
        classifier: classifier.name(),
        adversary: "samples-file".into(),
        trials: samples.len() as u64,
        estimate: correct as f64 / samples.len() as f64,
        ci_radius: hoeffding_radius(samples.len() as u64),
        seed: "-".into(),
    };
    println!("{}", report.csv_row());
    write_reports(&a.out, &[report.clone()])?;
    if let Some(band) = a.min_estimate {
        if report.estimate < band {
            return Ok(Outcome::BandFailed);
        }
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct LearnReport {
    version: u32,
    family: String,
    learner: String,
    training_samples: usize,
    training_accuracy: f64,
    rank: Option<usize>,
    saturated: Option<bool>,
}

pub fn learn(a: crate::LearnArgs) -> Result<Outcome> {
    reject_secret_path(&a.task)?;
    reject_secret_path(&a.samples)?;
    // Learners see only public information: the family id for reporting
    // and, for the span learner, the public shift and expected rank.
    let task_text = fs::read_to_string(&a.task)?;
    let family_id = robustlab::files::read_task_family(&task_text)?;
    let text = fs::read_to_string(&a.samples)?;
    let (_, samples) = read_samples(&text)?;
    if samples.is_empty() {
        bail!("empty samples file");
    }

    let (classifier, rank, saturated): (Box<dyn Classifier>, Option<usize>, Option<bool>) =
        match a.learner.as_str() {
            "span" => {
                let task = load_task_file(&a.task, None)?;
                let (shift, expected) = match &task {
                    TaskObject::LpnDual(t) => (t.shift(), t.class0_rank()),
                    TaskObject::LpnUniform(t) => (t.shift(), t.class0_rank()),
                    TaskObject::Lwe(t) => (t.shift(), t.class0_rank()),
                    _ => bail!("the span learner applies to lpn/lwe tasks"),
                };
                let model = span_learner(&samples, &shift, expected)?;
                let rank = model.rank();
                let saturated = model.saturated();
                (Box::new(model), Some(rank), Some(saturated))
            }
            name => {
                let kind = BaselineKind::ALL
                    .into_iter()
                    .find(|k| k.name() == name)
                    .ok_or_else(|| anyhow!("unknown learner `{name}`"))?;
                (Box::new(train_baseline(kind, &samples)?), None, None)
            }
        };

    let correct = samples
        .iter()
        .filter(|s| classifier.classify(&s.payload) == Classification::Label(s.label))
        .count();
    let report = LearnReport {
        version: REPORT_VERSION,
        family: family_id,
        learner: classifier.name(),
        training_samples: samples.len(),
        training_accuracy: correct as f64 / samples.len() as f64,
        rank,
        saturated,
    };
    fs::write(&a.out, serde_json::to_string_pretty(&report)? + "\n")?;
    println!(
        "learner {} training accuracy {:.4} ({} samples)",
        report.learner, report.training_accuracy, report.training_samples
    );
    Ok(Outcome::Pass)
}

/// Versioned experiment configuration; unknown fields are rejected and
/// the seed is mandatory.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub task: PathBuf,
    #[serde(default)]
    pub secret: Option<PathBuf>,
    pub classifier: String,
    #[serde(default)]
    pub adversary: Option<String>,
    #[serde(default)]
    pub weight: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    pub out: PathBuf,
    #[serde(default)]
    pub min_estimate: Option<f64>,
}

pub fn eval(a: crate::EvalArgs) -> Result<Outcome> {
    let config = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let cfg: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| anyhow!("config schema error at {path:?}: {e}"))?;
            if cfg.version != 1 {
                bail!("unsupported config version {}", cfg.version);
            }
            cfg
        }
        None => ExperimentConfig {
            version: 1,
            task: a.task.clone().ok_or_else(|| anyhow!("--task required"))?,
            secret: a.secret.clone(),
            classifier: a.classifier.clone().ok_or_else(|| anyhow!("--classifier required"))?,
            adversary: a.adversary.clone(),
            weight: a.weight,
            trials: a.trials.ok_or_else(|| anyhow!("--trials required"))?,
            seed: a.seed.ok_or_else(|| anyhow!("--seed required"))?,
            out: a.out.clone().ok_or_else(|| anyhow!("--out required"))?,
            min_estimate: a.min_estimate,
        },
    };

    let (task, secret) = load_pair(&config.task, config.secret.as_ref())?;
    let classifier = actors::build_classifier(&config.classifier, &task, secret.as_ref())?;
    let adversary = match &config.adversary {
        None => None,
        Some(name) => actors::build_adversary(name, &task, config.weight)?,
    };
    let stream = RngStream::from_seed_u64(config.seed).derive("eval");
    let report =
        evaluate(classifier.as_ref(), task.family(), adversary.as_ref(), config.trials, &stream)?;
    println!("{}", report.csv_row());
    write_reports(&config.out, &[report.clone()])?;
    if let Some(band) = config.min_estimate {
        if report.estimate < band {
            eprintln!("estimate {} below the pass band {band}", report.estimate);
            return Ok(Outcome::BandFailed);
        }
    }
    Ok(Outcome::Pass)
}

pub fn converse(a: crate::ConverseArgs) -> Result<Outcome> {
    let (task, secret) = load_pair(&a.task, a.secret.as_ref())?;
    let (classifier, adversary) = actors::converse_defaults(&task, secret.as_ref(), a.weight)?;
    let stream = RngStream::from_seed_u64(a.seed).derive("converse");
    let report = converse_premises(
        classifier.as_ref(),
        task.family(),
        &adversary,
        a.train,
        a.trials,
        &stream,
    )?;
    fs::write(&a.out, serde_json::to_string_pretty(&report)? + "\n")?;
    println!(
        "tv lower bound {:.4} (threshold {}), battery pass: {}",
        report.tv.certified_lower(),
        report.tv_threshold,
        report.battery_pass
    );
    println!("wrote {}", a.out.display());
    if a.require_pass && !report.pass {
        return Ok(Outcome::BandFailed);
    }
    Ok(Outcome::Pass)
}

pub fn verify(a: crate::VerifyArgs) -> Result<Outcome> {
    let (task, secret) = load_pair(&a.task, a.secret.as_ref())?;
    let mut failures: Vec<String> = Vec::new();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut check = |name: &str, ok: bool| {
        checks.push((name.to_string(), ok));
    };

    match (&task, &secret) {
        (TaskObject::LpnDual(t), Some(SecretObject::LpnTrapdoor { t: tw, trapdoor })) => {
            let h = t.parity_check();
            let e = trapdoor.matrix();
            check("dims", e.rows() * 2 == h.rows() && e.cols() == h.cols());
            check("row-weights-exact", (0..e.rows()).all(|r| e.row(r).weight() == *tw));
            check("col-weights-bounded", robustlab::lpn::max_column_weight(e) <= *tw);
            let in_span = (0..e.rows()).all(|r| {
                robustlab::algebra::gf2::gf2_rowspan_contains(h, &e.row(r)).unwrap_or(false)
            });
            check("rows-in-rowspan", in_span);
            let ones = robustlab::algebra::gf2::Gf2Vec::ones(e.cols());
            check(
                "shift-maps-to-ones",
                e.mul_vec(&ones).map(|v| v.weight() == e.rows()).unwrap_or(false),
            );
            check("shift-outside-code", !h.mul_vec(&ones).map(|v| v.is_zero()).unwrap_or(true));
        }
        (TaskObject::LpnDual(_), _) => bail!("lpn-trapdoor verification needs --secret"),
        (TaskObject::LpnUniform(t), _) => {
            let ones = robustlab::algebra::gf2::Gf2Vec::ones(t.params().m);
            let outside =
                !robustlab::algebra::gf2::gf2_rowspan_contains(t.matrix(), &ones).unwrap_or(true);
            check("shift-outside-rowspan", outside);
        }
        (TaskObject::Lwe(t), Some(SecretObject::LweTrapdoor(trapdoor))) => {
            let cert = verify_trapdoor(t.matrix(), trapdoor);
            check("trapdoor-certificate", cert.ok);
            if !cert.ok {
                failures.extend(cert.violations.clone());
            }
            println!(
                "beta {} odd-columns {} deterministic radius {}",
                cert.beta, cert.odd_cols, cert.robust_radius
            );
        }
        (TaskObject::Lwe(_), _) => {
            // uniform task: well-formedness was re-checked at load time
            check("shift-outside-row-module", true);
        }
        (TaskObject::HardBit(t), _) => {
            let code = t.code();
            check("code-radius-covers-eighth", code.radius() >= code.code_len() / 8);
        }
        (TaskObject::Blpr(t), Some(SecretObject::BbsFactors(key))) => {
            check("modulus-matches", key.modulus() == t.modulus());
            let (p, q) = key.primes();
            check("primes-blum", p % 4 == 3 && q % 4 == 3 && p != q);
            check(
                "primality",
                robustlab::bbs::is_prime_u64(p) && robustlab::bbs::is_prime_u64(q),
            );
        }
        (TaskObject::Blpr(_), _) => {
            check("modulus-positive", true);
        }
    }

    let mut all_ok = true;
    for (name, ok) in &checks {
        println!("{}: {}", name, if *ok { "pass" } else { "FAIL" });
        if !ok {
            all_ok = false;
            failures.push(name.clone());
        }
    }
    for f in &failures {
        eprintln!("violation: {f}");
    }
    if all_ok {
        println!("verification passed");
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::BandFailed)
    }
}
