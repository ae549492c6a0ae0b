//! The span learner: recovers the linear class-0 support of an
//! LPN/LWE-style family from samples, then classifies by membership,
//! generates fresh uniform samples, and evaluates the density.

use super::task::{Classification, Classifier, Payload, TaskInstance};
use crate::algebra::gf2::{Gf2Mat, RowBasis};
use crate::algebra::zq::{ZqMat, ZqRowBasis};
use crate::error::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone)]
enum SpanInner {
    Bits(RowBasis),
    Mod(ZqRowBasis),
}

/// Learned span model. `saturated` flags whether the basis reached the
/// family's expected rank; generation and density evaluation require it.
#[derive(Debug, Clone)]
pub struct LearnedSpanModel {
    inner: SpanInner,
    shift: Payload,
    expected_rank: usize,
    samples_consumed: usize,
}

/// Learn the class-0 span from labeled samples. Label-1 samples first
/// have the family's public shift removed. `expected_rank` is the rank
/// at which the family's class-0 support is fully learned.
pub fn span_learner(
    samples: &[TaskInstance],
    shift: &Payload,
    expected_rank: usize,
) -> Result<LearnedSpanModel> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let mut model = LearnedSpanModel::empty(shift.clone(), expected_rank)?;
    for s in samples {
        model.absorb(s)?;
    }
    Ok(model)
}

impl LearnedSpanModel {
    pub fn empty(shift: Payload, expected_rank: usize) -> Result<Self> {
        let inner = match &shift {
            Payload::Bits(v) => SpanInner::Bits(RowBasis::new(v.len())),
            Payload::Mod(v) => SpanInner::Mod(ZqRowBasis::new(v.len(), v.modulus())),
        };
        Ok(LearnedSpanModel { inner, shift, expected_rank, samples_consumed: 0 })
    }

    /// Insert one labeled sample; rank never decreases.
    pub fn absorb(&mut self, sample: &TaskInstance) -> Result<()> {
        self.samples_consumed += 1;
        match (&mut self.inner, &sample.payload, &self.shift) {
            (SpanInner::Bits(basis), Payload::Bits(v), Payload::Bits(shift)) => {
                let v = if sample.label { v.xored(shift) } else { v.clone() };
                basis.insert(&v);
                Ok(())
            }
            (SpanInner::Mod(basis), Payload::Mod(v), Payload::Mod(shift)) => {
                let v = if sample.label { v.sub(shift) } else { v.clone() };
                basis.insert(&v);
                Ok(())
            }
            _ => Err(Error::DimensionMismatch("sample/model payload kind".into())),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            SpanInner::Bits(b) => b.rank(),
            SpanInner::Mod(b) => b.rank(),
        }
    }

    pub fn saturated(&self) -> bool {
        self.rank() == self.expected_rank
    }

    pub fn samples_consumed(&self) -> usize {
        self.samples_consumed
    }

    pub fn membership(&self, payload: &Payload) -> Result<bool> {
        match (&self.inner, payload) {
            (SpanInner::Bits(b), Payload::Bits(v)) => Ok(b.contains(v)),
            (SpanInner::Mod(b), Payload::Mod(v)) => Ok(b.contains(v)),
            _ => Err(Error::DimensionMismatch("payload kind".into())),
        }
    }

    /// Draw a fresh sample of D_label from the learned model.
    pub fn generator_sample(&self, label: bool, rng: &mut impl Rng) -> Result<Payload> {
        if !self.saturated() {
            return Err(Error::Unsaturated { rank: self.rank(), expected: self.expected_rank });
        }
        Ok(match (&self.inner, &self.shift) {
            (SpanInner::Bits(b), Payload::Bits(shift)) => {
                let mut v = b.sample_uniform(rng);
                if label {
                    v.xor_assign(shift);
                }
                Payload::Bits(v)
            }
            (SpanInner::Mod(b), Payload::Mod(shift)) => {
                let v = b.sample_uniform(rng);
                Payload::Mod(if label { v.add(shift) } else { v })
            }
            _ => unreachable!("shift kind fixed at construction"),
        })
    }

    /// Density of the learned D_label at `y`: uniform over the span (or
    /// its shift), zero elsewhere.
    pub fn evaluator_pdf(&self, label: bool, y: &Payload) -> Result<f64> {
        if !self.saturated() {
            return Err(Error::Unsaturated { rank: self.rank(), expected: self.expected_rank });
        }
        let centered = match (y, &self.shift) {
            (Payload::Bits(v), Payload::Bits(shift)) => {
                Payload::Bits(if label { v.xored(shift) } else { v.clone() })
            }
            (Payload::Mod(v), Payload::Mod(shift)) => {
                Payload::Mod(if label { v.sub(shift) } else { v.clone() })
            }
            _ => return Err(Error::DimensionMismatch("payload kind".into())),
        };
        if !self.membership(&centered)? {
            return Ok(0.0);
        }
        Ok(match &self.inner {
            SpanInner::Bits(b) => 0.5f64.powi(b.rank() as i32),
            SpanInner::Mod(b) => {
                let q = match &self.shift {
                    Payload::Mod(s) => s.modulus(),
                    _ => unreachable!(),
                };
                (1.0 / q as f64).powi(b.rank() as i32)
            }
        })
    }

    /// Mutual containment against the true span (rows of `a`).
    pub fn span_equals_gf2(&self, a: &Gf2Mat) -> Result<bool> {
        let SpanInner::Bits(basis) = &self.inner else {
            return Err(Error::DimensionMismatch("not a GF(2) model".into()));
        };
        let truth = RowBasis::from_matrix(a);
        let learned_in_truth = basis.basis_rows().iter().all(|r| truth.contains(r));
        let truth_in_learned = (0..a.rows()).all(|r| basis.contains(&a.row(r)));
        Ok(learned_in_truth && truth_in_learned)
    }

    pub fn span_equals_zq(&self, a: &ZqMat) -> Result<bool> {
        let SpanInner::Mod(basis) = &self.inner else {
            return Err(Error::DimensionMismatch("not a Z_q model".into()));
        };
        let mut truth = ZqRowBasis::new(a.cols(), a.modulus());
        for r in 0..a.rows() {
            truth.insert(&a.row(r));
        }
        let learned_in_truth = basis.basis_rows().iter().all(|r| truth.contains(r));
        let truth_in_learned = (0..a.rows()).all(|r| basis.contains(&a.row(r)));
        Ok(learned_in_truth && truth_in_learned)
    }
}

impl Classifier for LearnedSpanModel {
    fn name(&self) -> String {
        format!("span-rank{}", self.rank())
    }

    /// Members of the learned span are class 0, everything else class 1.
    fn classify(&self, payload: &Payload) -> Classification {
        match self.membership(payload) {
            Ok(true) => Classification::Label(false),
            Ok(false) => Classification::Label(true),
            Err(_) => Classification::Abstain,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf2::Gf2Vec;
    use crate::algebra::rng::RngStream;

    fn toy_samples(
        a: &Gf2Mat,
        count: usize,
        label: bool,
        shift: &Gf2Vec,
        rng: &mut impl Rng,
    ) -> Vec<TaskInstance> {
        (0..count)
            .map(|_| {
                let s = Gf2Vec::random(a.rows(), rng);
                let mut v = a.combine_rows(&s).unwrap();
                if label {
                    v.xor_assign(shift);
                }
                TaskInstance { label, payload: Payload::Bits(v) }
            })
            .collect()
    }

    #[test]
    fn zero_samples_rank_zero_flagged() {
        let shift = Payload::Bits(Gf2Vec::ones(8));
        let samples = vec![
            TaskInstance { label: false, payload: Payload::Bits(Gf2Vec::zeros(8)) };
            5
        ];
        let m = span_learner(&samples, &shift, 3).unwrap();
        assert_eq!(m.rank(), 0);
        assert!(!m.saturated());
        assert!(m.generator_sample(false, &mut RngStream::from_seed_u64(1).rng()).is_err());
    }

    #[test]
    fn rank_monotone_under_absorption() {
        let mut rng = RngStream::from_seed_u64(70).rng();
        let a = Gf2Mat::random(6, 24, &mut rng);
        let shift = Payload::Bits(Gf2Vec::ones(24));
        let mut model = LearnedSpanModel::empty(shift, 6).unwrap();
        let mut prev = 0;
        for s in toy_samples(&a, 40, false, &Gf2Vec::ones(24), &mut rng) {
            model.absorb(&s).unwrap();
            assert!(model.rank() >= prev);
            prev = model.rank();
        }
    }

    #[test]
    fn learns_span_and_classifies_mixed_labels() {
        let mut rng = RngStream::from_seed_u64(71).rng();
        let a = Gf2Mat::random(8, 32, &mut rng);
        let ones = Gf2Vec::ones(32);
        // well-formed: shift outside the span
        assert!(!crate::algebra::gf2::gf2_rowspan_contains(&a, &ones).unwrap());
        let shift = Payload::Bits(ones.clone());
        let mut samples = toy_samples(&a, 16, false, &ones, &mut rng);
        samples.extend(toy_samples(&a, 16, true, &ones, &mut rng));
        let model = span_learner(&samples, &shift, 8).unwrap();
        assert!(model.saturated());
        assert!(model.span_equals_gf2(&a).unwrap());
        // membership splits the labels exactly
        for s in toy_samples(&a, 200, false, &ones, &mut rng) {
            assert_eq!(model.classify(&s.payload), Classification::Label(false));
        }
        for s in toy_samples(&a, 200, true, &ones, &mut rng) {
            assert_eq!(model.classify(&s.payload), Classification::Label(true));
        }
    }

    #[test]
    fn generator_members_and_density_sum() {
        // n = 4, m = 16: full enumeration of the learned span.
        let mut rng = RngStream::from_seed_u64(72).rng();
        let a = loop {
            let cand = Gf2Mat::random(4, 16, &mut rng);
            let e = crate::algebra::gf2::gf2_eliminate(&cand, None).unwrap();
            if e.rank == 4
                && !crate::algebra::gf2::gf2_rowspan_contains(&cand, &Gf2Vec::ones(16)).unwrap()
            {
                break cand;
            }
        };
        let ones = Gf2Vec::ones(16);
        let samples = toy_samples(&a, 32, false, &ones, &mut rng);
        let model = span_learner(&samples, &Payload::Bits(ones.clone()), 4).unwrap();
        assert!(model.saturated());
        // every generated sample is a member
        for _ in 0..200 {
            let g = model.generator_sample(false, &mut rng).unwrap();
            assert!(model.membership(&g).unwrap());
        }
        // evaluator sums to 1 over the enumerated span
        let mut total = 0.0;
        for mask in 0u64..16 {
            let s = Gf2Vec::from_uint(mask, 4);
            let v = a.combine_rows(&s).unwrap();
            total += model.evaluator_pdf(false, &Payload::Bits(v)).unwrap();
        }
        assert!((total - 1.0).abs() < 1e-12);
        // and label-1 density lives on the shifted span
        let v1 = a.combine_rows(&Gf2Vec::from_uint(5, 4)).unwrap().xored(&ones);
        assert_eq!(model.evaluator_pdf(true, &Payload::Bits(v1.clone())).unwrap(), 0.0625);
        assert_eq!(model.evaluator_pdf(false, &Payload::Bits(v1)).unwrap(), 0.0);
    }

    #[test]
    fn generator_exactly_uniform_chi_square() {
        // Full enumeration at n = 4, m = 16 with a chi-square test
        // against the uniform distribution over the 16 span elements.
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let mut rng = RngStream::from_seed_u64(73).rng();
        let a = loop {
            let cand = Gf2Mat::random(4, 16, &mut rng);
            if crate::algebra::gf2::gf2_eliminate(&cand, None).unwrap().rank == 4 {
                break cand;
            }
        };
        let ones = Gf2Vec::ones(16);
        let samples = toy_samples(&a, 32, false, &ones, &mut rng);
        let model = span_learner(&samples, &Payload::Bits(ones), 4).unwrap();
        let draws = 160_000usize;
        let mut counts: std::collections::HashMap<Vec<u64>, usize> = Default::default();
        for _ in 0..draws {
            let Payload::Bits(v) = model.generator_sample(false, &mut rng).unwrap() else {
                unreachable!()
            };
            *counts.entry(v.words().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 16);
        let expected = draws as f64 / 16.0;
        let stat: f64 =
            counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - ChiSquared::new(15.0).unwrap().cdf(stat);
        assert!(p > 0.01, "chi-square stat {stat}, p {p}");
    }
}
