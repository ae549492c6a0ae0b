//! Baseline learners: concrete stand-ins for "any efficient learner".
//!
//! Three fixed kinds. Nearest-centroid compares class means (circular
//! embedding for mod-q payloads), the affine-span learner classifies by
//! membership in the span of class-0 training samples, and majority-bit
//! is a single-coordinate decision stump picked by training accuracy.

use super::span::LearnedSpanModel;
use super::task::{Classification, Classifier, Payload, TaskInstance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    NearestCentroid,
    Gf2Affine,
    MajorityBit,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 3] =
        [BaselineKind::NearestCentroid, BaselineKind::Gf2Affine, BaselineKind::MajorityBit];

    pub fn name(&self) -> &'static str {
        match self {
            BaselineKind::NearestCentroid => "nearest-centroid",
            BaselineKind::Gf2Affine => "gf2-affine",
            BaselineKind::MajorityBit => "majority-bit",
        }
    }
}

#[derive(Debug, Clone)]
enum BaselineInner {
    Centroid { mu0: Vec<(f64, f64)>, mu1: Vec<(f64, f64)> },
    Affine(Box<LearnedSpanModel>),
    Stump { coord: usize, mu0: (f64, f64), mu1: (f64, f64) },
}

#[derive(Debug, Clone)]
pub struct BaselineClassifier {
    kind: BaselineKind,
    inner: BaselineInner,
}

/// Embed a payload coordinate on the unit circle so means are meaningful
/// for both payload kinds (bits map to angles 0 and pi).
fn coords(p: &Payload) -> Vec<(f64, f64)> {
    match p {
        Payload::Bits(v) => (0..v.len())
            .map(|i| if v.get(i) { (-1.0, 0.0) } else { (1.0, 0.0) })
            .collect(),
        Payload::Mod(v) => {
            let q = v.modulus() as f64;
            (0..v.len())
                .map(|i| {
                    let theta = 2.0 * std::f64::consts::PI * v.get(i) as f64 / q;
                    (theta.cos(), theta.sin())
                })
                .collect()
        }
    }
}

fn mean(points: &[Vec<(f64, f64)>]) -> Vec<(f64, f64)> {
    let len = points[0].len();
    let mut mu = vec![(0.0, 0.0); len];
    for p in points {
        for (m, &(x, y)) in mu.iter_mut().zip(p) {
            m.0 += x;
            m.1 += y;
        }
    }
    for m in &mut mu {
        m.0 /= points.len() as f64;
        m.1 /= points.len() as f64;
    }
    mu
}

fn sqdist(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter().zip(b).map(|(&(ax, ay), &(bx, by))| (ax - bx).powi(2) + (ay - by).powi(2)).sum()
}

/// Train a deterministic classifier of the named kind.
pub fn train_baseline(kind: BaselineKind, samples: &[TaskInstance]) -> Result<BaselineClassifier> {
    let class0: Vec<&TaskInstance> = samples.iter().filter(|s| !s.label).collect();
    let class1: Vec<&TaskInstance> = samples.iter().filter(|s| s.label).collect();
    if class0.len() < 2 || class1.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need >= 2 samples per label, got {} / {}",
            class0.len(),
            class1.len()
        )));
    }
    let inner = match kind {
        BaselineKind::NearestCentroid => {
            let p0: Vec<_> = class0.iter().map(|s| coords(&s.payload)).collect();
            let p1: Vec<_> = class1.iter().map(|s| coords(&s.payload)).collect();
            BaselineInner::Centroid { mu0: mean(&p0), mu1: mean(&p1) }
        }
        BaselineKind::Gf2Affine => {
            // Span of the class-0 training payloads; expected rank is
            // irrelevant for classification so the model never needs to
            // saturate.
            let zero_shift = match &samples[0].payload {
                Payload::Bits(v) => {
                    Payload::Bits(crate::algebra::gf2::Gf2Vec::zeros(v.len()))
                }
                Payload::Mod(v) => {
                    Payload::Mod(crate::algebra::zq::ZqVec::zeros(v.len(), v.modulus()))
                }
            };
            let mut model = LearnedSpanModel::empty(zero_shift, usize::MAX)?;
            for s in &class0 {
                model.absorb(s)?;
            }
            BaselineInner::Affine(Box::new(model))
        }
        BaselineKind::MajorityBit => {
            let p0: Vec<_> = class0.iter().map(|s| coords(&s.payload)).collect();
            let p1: Vec<_> = class1.iter().map(|s| coords(&s.payload)).collect();
            let mu0 = mean(&p0);
            let mu1 = mean(&p1);
            // Rank coordinates by training accuracy of the 1-D rule.
            let len = mu0.len();
            let mut best = (0usize, -1.0f64);
            for c in 0..len {
                let mut correct = 0usize;
                for p in &p0 {
                    if sqdist(&p[c..=c], &mu0[c..=c]) <= sqdist(&p[c..=c], &mu1[c..=c]) {
                        correct += 1;
                    }
                }
                for p in &p1 {
                    if sqdist(&p[c..=c], &mu1[c..=c]) < sqdist(&p[c..=c], &mu0[c..=c]) {
                        correct += 1;
                    }
                }
                let acc = correct as f64 / (p0.len() + p1.len()) as f64;
                if acc > best.1 {
                    best = (c, acc);
                }
            }
            BaselineInner::Stump { coord: best.0, mu0: mu0[best.0], mu1: mu1[best.0] }
        }
    };
    Ok(BaselineClassifier { kind, inner })
}

impl Classifier for BaselineClassifier {
    fn name(&self) -> String {
        self.kind.name().to_string()
    }

    fn classify(&self, payload: &Payload) -> Classification {
        match &self.inner {
            BaselineInner::Centroid { mu0, mu1 } => {
                let p = coords(payload);
                Classification::Label(sqdist(&p, mu1) < sqdist(&p, mu0))
            }
            BaselineInner::Affine(model) => match model.membership(payload) {
                Ok(m) => Classification::Label(!m),
                Err(_) => Classification::Abstain,
            },
            BaselineInner::Stump { coord, mu0, mu1 } => {
                let p = coords(payload);
                if *coord >= p.len() {
                    return Classification::Abstain;
                }
                let d0 = (p[*coord].0 - mu0.0).powi(2) + (p[*coord].1 - mu0.1).powi(2);
                let d1 = (p[*coord].0 - mu1.0).powi(2) + (p[*coord].1 - mu1.1).powi(2);
                Classification::Label(d1 < d0)
            }
        }
    }
}

impl BaselineClassifier {
    pub fn kind(&self) -> BaselineKind {
        self.kind
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf2::Gf2Vec;
    use crate::algebra::rng::RngStream;

    fn point_mass_samples() -> Vec<TaskInstance> {
        let a = Gf2Vec::from_uint(0b0000_1111, 8);
        let b = Gf2Vec::from_uint(0b1111_0000, 8);
        vec![
            TaskInstance { label: false, payload: Payload::Bits(a.clone()) },
            TaskInstance { label: false, payload: Payload::Bits(a.clone()) },
            TaskInstance { label: true, payload: Payload::Bits(b.clone()) },
            TaskInstance { label: true, payload: Payload::Bits(b.clone()) },
        ]
    }

    #[test]
    fn nearest_centroid_exact_on_point_masses() {
        let samples = point_mass_samples();
        let c = train_baseline(BaselineKind::NearestCentroid, &samples).unwrap();
        for s in &samples {
            assert_eq!(c.classify(&s.payload), Classification::Label(s.label));
        }
    }

    #[test]
    fn insufficient_data_signals() {
        let samples = vec![TaskInstance {
            label: false,
            payload: Payload::Bits(Gf2Vec::zeros(4)),
        }];
        assert!(matches!(
            train_baseline(BaselineKind::MajorityBit, &samples),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn stump_finds_a_perfect_coordinate() {
        // Coordinate 0 equals the label; the rest is noise.
        let mut rng = RngStream::from_seed_u64(80).rng();
        let mut samples = Vec::new();
        for i in 0..40 {
            let label = i % 2 == 1;
            let mut v = Gf2Vec::random(16, &mut rng);
            v.set(0, label);
            samples.push(TaskInstance { label, payload: Payload::Bits(v) });
        }
        let c = train_baseline(BaselineKind::MajorityBit, &samples).unwrap();
        let mut correct = 0;
        for i in 0..200 {
            let label = i % 2 == 0;
            let mut v = Gf2Vec::random(16, &mut rng);
            v.set(0, label);
            if c.classify(&Payload::Bits(v)) == Classification::Label(label) {
                correct += 1;
            }
        }
        assert_eq!(correct, 200);
    }

    #[test]
    fn affine_baseline_learns_membership() {
        let mut rng = RngStream::from_seed_u64(81).rng();
        let a = crate::algebra::gf2::Gf2Mat::random(5, 20, &mut rng);
        let ones = Gf2Vec::ones(20);
        if crate::algebra::gf2::gf2_rowspan_contains(&a, &ones).unwrap() {
            return; // astronomically unlikely with this seed
        }
        let mut samples = Vec::new();
        for _ in 0..24 {
            let s = Gf2Vec::random(5, &mut rng);
            samples.push(TaskInstance {
                label: false,
                payload: Payload::Bits(a.combine_rows(&s).unwrap()),
            });
            let s = Gf2Vec::random(5, &mut rng);
            samples.push(TaskInstance {
                label: true,
                payload: Payload::Bits(a.combine_rows(&s).unwrap().xored(&ones)),
            });
        }
        let c = train_baseline(BaselineKind::Gf2Affine, &samples).unwrap();
        for s in &samples {
            assert_eq!(c.classify(&s.payload), Classification::Label(s.label));
        }
    }
}
