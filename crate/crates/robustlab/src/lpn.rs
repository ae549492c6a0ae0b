//! Parity-with-noise task families: samplers, the computational trapdoor
//! sampler H = [A; SA + E], the dual and uniform tasks, their adversaries,
//! the sparse-trapdoor robust classifier, and exhaustive micro-scale
//! oracles (maximum-likelihood classification, exact total variation).

use crate::algebra::gf2::{
    gf2_eliminate, gf2_rowspan_contains, gf2_sample_fixed_weight, Gf2Mat, Gf2Vec,
};
use crate::error::{Error, Result};
use crate::framework::task::{
    Adversary, Classification, Classifier, Norm, Payload, TaskFamily, TaskInstance,
};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpnRegime {
    /// High noise: no efficient robust classifier exists.
    NoEfficient,
    /// Low noise with a sparse trapdoor: a robust classifier exists but
    /// is hard to learn.
    Trapdoor,
}

impl LpnRegime {
    pub fn id(&self) -> &'static str {
        match self {
            LpnRegime::NoEfficient => "lpn-uniform",
            LpnRegime::Trapdoor => "lpn-trapdoor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpnParams {
    pub n: usize,
    pub m: usize,
    /// Error weight (rows of E; also the hardness-side adversary weight).
    pub t: usize,
    /// Perturbation budget of the family.
    pub eps: usize,
    pub regime: LpnRegime,
}

impl LpnParams {
    /// High-noise regime: m = 8n, t = 2n - 1, eps = 2n.
    pub fn no_efficient(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        Ok(LpnParams { n, m: 8 * n, t: 2 * n - 1, eps: 2 * n, regime: LpnRegime::NoEfficient })
    }

    /// Trapdoor regime: t = 2*floor(sqrt(n)/6) - 1 (odd), eps = floor(sqrt(n)).
    /// The formula needs n >= 36 to give t >= 1.
    pub fn trapdoor(n: usize) -> Result<Self> {
        if n < 36 {
            return Err(Error::InvalidParameter(format!(
                "trapdoor regime needs n >= 36 (t formula positive); got {n}"
            )));
        }
        let sqrt_n = (n as f64).sqrt().floor() as usize;
        let t = 2 * (sqrt_n / 6) - 1;
        let eps = sqrt_n;
        Self::custom(n, 8 * n, t, eps, LpnRegime::Trapdoor)
    }

    /// Explicit parameters, for micro instances and tests.
    pub fn custom(n: usize, m: usize, t: usize, eps: usize, regime: LpnRegime) -> Result<Self> {
        if n < 1 || m < n || t > m || eps > m {
            return Err(Error::InvalidParameter("inconsistent LPN dimensions".into()));
        }
        if regime == LpnRegime::Trapdoor {
            if t < 1 || t % 2 == 0 {
                return Err(Error::InvalidParameter(format!("trapdoor t = {t} must be odd >= 1")));
            }
            if 3 * t * eps > n {
                return Err(Error::InvalidParameter(format!(
                    "trapdoor regime needs t*eps <= n/3: {t}*{eps} > {n}/3"
                )));
            }
        }
        Ok(LpnParams { n, m, t, eps, regime })
    }

    pub fn echo(&self) -> String {
        format!("n={};m={};t={};eps={}", self.n, self.m, self.t, self.eps)
    }
}

/// One LPN sample: s^T A + e^T with wt(e) = t exactly.
pub fn lpn_sample(a: &Gf2Mat, t: usize, rng: &mut impl Rng) -> Result<Gf2Vec> {
    let s = Gf2Vec::random(a.rows(), rng);
    let mut y = a.combine_rows(&s)?;
    let e = gf2_sample_fixed_weight(a.cols(), t, rng)?;
    y.xor_assign(&e);
    Ok(y)
}

/// Row matrix with every row of Hamming weight exactly t. No column
/// constraint; used raw by the concentration test and filtered by the
/// trapdoor sampler.
pub fn sample_error_matrix(
    rows: usize,
    cols: usize,
    t: usize,
    rng: &mut impl Rng,
) -> Result<Gf2Mat> {
    let mut e = Gf2Mat::zeros(rows, cols);
    for r in 0..rows {
        e.set_row(r, &gf2_sample_fixed_weight(cols, t, rng)?);
    }
    Ok(e)
}

pub fn max_column_weight(e: &Gf2Mat) -> usize {
    (0..e.cols())
        .map(|c| (0..e.rows()).filter(|&r| e.get(r, c)).count())
        .max()
        .unwrap_or(0)
}

/// Sparse trapdoor for a dual task: every row weight exactly t, every
/// column weight at most t (enforced by resampling), rows inside
/// rowspan(H).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpnTrapdoor {
    e: Gf2Mat,
    pub row_weight: usize,
    pub max_col_weight: usize,
}

impl LpnTrapdoor {
    pub fn matrix(&self) -> &Gf2Mat {
        &self.e
    }

    pub fn from_matrix(e: Gf2Mat, t: usize) -> Result<Self> {
        for r in 0..e.rows() {
            if e.row(r).weight() != t {
                return Err(Error::InvalidParameter(format!("row {r} weight != {t}")));
            }
        }
        let max_col_weight = max_column_weight(&e);
        if max_col_weight > t {
            return Err(Error::InvalidParameter("column weight exceeds t".into()));
        }
        Ok(LpnTrapdoor { e, row_weight: t, max_col_weight })
    }

    /// Columns of maximal weight, heaviest first; the worst-case
    /// perturbation support for the robust classifier.
    pub fn heaviest_columns(&self, count: usize) -> Vec<usize> {
        let mut cols: Vec<(usize, usize)> = (0..self.e.cols())
            .map(|c| ((0..self.e.rows()).filter(|&r| self.e.get(r, c)).count(), c))
            .collect();
        cols.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        cols.into_iter().take(count).map(|(_, c)| c).collect()
    }
}

const TRAPSAMP_ATTEMPTS: usize = 10_000;

/// Sample H = [A; SA + E] with the sparse-row trapdoor E. Every row of E
/// lies in rowspan(H) by construction; the column bound <= t is enforced
/// by resampling E.
pub fn lpn_trapsamp(n: usize, t: usize, rng: &mut impl Rng) -> Result<(Gf2Mat, LpnTrapdoor)> {
    if t % 2 == 0 || t == 0 {
        return Err(Error::InvalidParameter(format!("t = {t} must be odd >= 1")));
    }
    let m = 8 * n;
    let a = Gf2Mat::random(n, m, rng);
    let s = Gf2Mat::random(n, n, rng);
    let sa = s.mul(&a)?;
    for _ in 0..TRAPSAMP_ATTEMPTS {
        let e = sample_error_matrix(n, m, t, rng)?;
        let max_col = max_column_weight(&e);
        if max_col > t {
            continue;
        }
        let mut lower = sa.clone();
        for r in 0..n {
            let mut row = lower.row(r);
            row.xor_assign(&e.row(r));
            lower.set_row(r, &row);
        }
        let h = a.stack(&lower)?;
        return Ok((h, LpnTrapdoor { e, row_weight: t, max_col_weight: max_col }));
    }
    Err(Error::ResampleExhausted { what: "lpn trapdoor column bound".into(), attempts: TRAPSAMP_ATTEMPTS })
}

/// Dual task: D_0 uniform over the kernel of H, D_1 its all-ones shift.
#[derive(Debug, Clone)]
pub struct LpnDualTask {
    params: LpnParams,
    h: Gf2Mat,
    kernel: Gf2Mat,
}

impl LpnDualTask {
    pub fn new(params: LpnParams, h: Gf2Mat) -> Result<Self> {
        if h.cols() != params.m {
            return Err(Error::DimensionMismatch("H width".into()));
        }
        // Well-formedness: the shift vector lies outside the kernel.
        // For odd-t trapdoors this holds automatically (E*1 = 1 forces
        // H*1 != 0); verify rather than trust.
        if h.mul_vec(&Gf2Vec::ones(params.m))?.is_zero() {
            return Err(Error::InvalidParameter("all-ones vector inside the code".into()));
        }
        let kernel = h.kernel_basis();
        Ok(LpnDualTask { params, h, kernel })
    }

    pub fn params(&self) -> LpnParams {
        self.params
    }

    pub fn parity_check(&self) -> &Gf2Mat {
        &self.h
    }

    pub fn kernel_basis(&self) -> &Gf2Mat {
        &self.kernel
    }

    pub fn shift(&self) -> Payload {
        Payload::Bits(Gf2Vec::ones(self.params.m))
    }

    pub fn class0_rank(&self) -> usize {
        self.kernel.rows()
    }
}

impl TaskFamily for LpnDualTask {
    fn family_id(&self) -> &'static str {
        "lpn-trapdoor"
    }

    fn params_echo(&self) -> String {
        self.params.echo()
    }

    fn payload_len(&self) -> usize {
        self.params.m
    }

    fn norm(&self) -> Norm {
        Norm::Hamming
    }

    fn robust_radius(&self) -> u64 {
        self.params.eps as u64
    }

    fn sample(&self, label: bool, rng: &mut ChaCha20Rng) -> TaskInstance {
        let coeff = Gf2Vec::random(self.kernel.rows(), rng);
        let mut y = self.kernel.combine_rows(&coeff).expect("kernel shape");
        if label {
            y.xor_assign(&Gf2Vec::ones(self.params.m));
        }
        TaskInstance { label, payload: Payload::Bits(y) }
    }
}

/// Uniform task: D_0 = {s^T A}, D_1 its all-ones shift.
#[derive(Debug, Clone)]
pub struct LpnUniformTask {
    params: LpnParams,
    a: Gf2Mat,
}

const WELLFORMED_ATTEMPTS: usize = 1000;

impl LpnUniformTask {
    /// Sample A uniformly, resampling until the all-ones shift lies
    /// outside rowspan(A).
    pub fn generate(params: LpnParams, rng: &mut impl Rng) -> Result<Self> {
        for _ in 0..WELLFORMED_ATTEMPTS {
            let a = Gf2Mat::random(params.n, params.m, rng);
            if !gf2_rowspan_contains(&a, &Gf2Vec::ones(params.m))? {
                return Ok(LpnUniformTask { params, a });
            }
        }
        Err(Error::ResampleExhausted {
            what: "uniform LPN well-formedness".into(),
            attempts: WELLFORMED_ATTEMPTS,
        })
    }

    pub fn from_matrix(params: LpnParams, a: Gf2Mat) -> Result<Self> {
        if a.rows() != params.n || a.cols() != params.m {
            return Err(Error::DimensionMismatch("A shape".into()));
        }
        if gf2_rowspan_contains(&a, &Gf2Vec::ones(params.m))? {
            return Err(Error::InvalidParameter("all-ones vector inside rowspan(A)".into()));
        }
        Ok(LpnUniformTask { params, a })
    }

    pub fn params(&self) -> LpnParams {
        self.params
    }

    pub fn matrix(&self) -> &Gf2Mat {
        &self.a
    }

    pub fn shift(&self) -> Payload {
        Payload::Bits(Gf2Vec::ones(self.params.m))
    }

    pub fn class0_rank(&self) -> usize {
        gf2_eliminate(&self.a, None).map(|e| e.rank).unwrap_or(0)
    }
}

impl TaskFamily for LpnUniformTask {
    fn family_id(&self) -> &'static str {
        "lpn-uniform"
    }

    fn params_echo(&self) -> String {
        self.params.echo()
    }

    fn payload_len(&self) -> usize {
        self.params.m
    }

    fn norm(&self) -> Norm {
        Norm::Hamming
    }

    fn robust_radius(&self) -> u64 {
        self.params.eps as u64
    }

    fn sample(&self, label: bool, rng: &mut ChaCha20Rng) -> TaskInstance {
        let s = Gf2Vec::random(self.params.n, rng);
        let mut y = self.a.combine_rows(&s).expect("A shape");
        if label {
            y.xor_assign(&Gf2Vec::ones(self.params.m));
        }
        TaskInstance { label, payload: Payload::Bits(y) }
    }
}

/// The fixed-weight perturbation adversary of the family; weight must
/// stay within the family budget.
pub fn adversary_fixed_weight(params: &LpnParams, weight: usize) -> Result<Adversary> {
    if weight > params.eps {
        return Err(Error::BudgetExceeded { requested: weight as u64, allowed: params.eps as u64 });
    }
    Ok(Adversary::FixedWeight { weight })
}

/// Worst-case adversary: flips concentrated on the heaviest trapdoor
/// columns (requires trapdoor knowledge; a stress test, not a player).
pub fn adversary_column_concentrated(
    params: &LpnParams,
    trapdoor: &LpnTrapdoor,
    weight: usize,
) -> Result<Adversary> {
    if weight > params.eps {
        return Err(Error::BudgetExceeded { requested: weight as u64, allowed: params.eps as u64 });
    }
    Ok(Adversary::FixedPositions { positions: trapdoor.heaviest_columns(weight) })
}

/// Robust classifier R_E: compute z = E*y and threshold its weight.
///
/// Class 0 gives wt(z) <= t*eps <= n/3; class 1 gives wt(z) >= n - n/3
/// because E*1 = 1 for odd row weight. Any threshold strictly between
/// works; n/2 sits in the middle, so correctness is deterministic for
/// every perturbation within the budget.
#[derive(Debug, Clone)]
pub struct LpnRobustClassifier {
    e: Gf2Mat,
}

impl LpnRobustClassifier {
    pub fn new(trapdoor: &LpnTrapdoor) -> Self {
        LpnRobustClassifier { e: trapdoor.matrix().clone() }
    }

    pub fn classify_bits(&self, y: &Gf2Vec) -> Result<bool> {
        let z = self.e.mul_vec(y)?;
        Ok(2 * z.weight() > self.e.rows())
    }
}

impl Classifier for LpnRobustClassifier {
    fn name(&self) -> String {
        "robust-E".into()
    }

    fn classify(&self, payload: &Payload) -> Classification {
        match payload.bits().and_then(|y| self.classify_bits(y)) {
            Ok(b) => Classification::Label(b),
            Err(_) => Classification::Abstain,
        }
    }
}

/// Exhaustive-enumeration guards for the micro oracles.
const ORACLE_MAX_RANK: usize = 20;
const ORACLE_MAX_COLS: usize = 48;

/// Exact maximum-likelihood classifier for a fixed-weight perturbation
/// of a (code, code + 1) task, by enumerating the whole code. Only for
/// micro instances.
pub struct BruteForceOracle {
    codewords: Vec<u64>,
    width: usize,
    t_adv: usize,
}

impl BruteForceOracle {
    /// `basis`: rows spanning the class-0 code; `t_adv`: the exact
    /// perturbation weight applied by the adversary.
    pub fn new(basis: &Gf2Mat, t_adv: usize) -> Result<Self> {
        let elim = gf2_eliminate(basis, None)?;
        if elim.rank > ORACLE_MAX_RANK || basis.cols() > ORACLE_MAX_COLS {
            return Err(Error::SizeGuard(format!(
                "oracle limits: rank {} <= {ORACLE_MAX_RANK}, cols {} <= {ORACLE_MAX_COLS}",
                elim.rank,
                basis.cols()
            )));
        }
        let rank = elim.rank;
        let rows: Vec<u64> = (0..rank).map(|r| elim.basis.row(r).to_uint()).collect();
        let mut codewords = Vec::with_capacity(1 << rank);
        for mask in 0u64..(1u64 << rank) {
            let mut v = 0u64;
            for (i, &row) in rows.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    v ^= row;
                }
            }
            codewords.push(v);
        }
        Ok(BruteForceOracle { codewords, width: basis.cols(), t_adv })
    }

    fn count_at_distance(&self, y: u64, d: usize) -> u64 {
        self.codewords.iter().filter(|&&c| (c ^ y).count_ones() as usize == d).count() as u64
    }

    /// Exact ML label for observed y; ties go to class 0.
    pub fn classify_word(&self, y: u64) -> bool {
        let ones = ones_mask(self.width);
        let c0 = self.count_at_distance(y, self.t_adv);
        let c1 = self.count_at_distance(y ^ ones, self.t_adv);
        c1 > c0
    }

    /// Exact accuracy of the ML rule: (1 + d_TV)/2.
    pub fn exact_accuracy(&self) -> Result<f64> {
        Ok((1.0 + exact_tv_from_codewords(&self.codewords, self.width, self.t_adv)?) / 2.0)
    }
}

impl Classifier for BruteForceOracle {
    fn name(&self) -> String {
        format!("brute-ml-t{}", self.t_adv)
    }

    fn classify(&self, payload: &Payload) -> Classification {
        match payload.bits() {
            Ok(v) if v.len() == self.width => Classification::Label(self.classify_word(v.to_uint())),
            _ => Classification::Abstain,
        }
    }
}

fn ones_mask(width: usize) -> u64 {
    if width == 64 {
        !0
    } else {
        (1u64 << width) - 1
    }
}

/// Exact total variation distance between the two perturbed classes of a
/// (code, code + 1) task under exact-weight-t noise, by support
/// enumeration. Micro instances only.
pub fn exact_tv_fixed_weight(basis: &Gf2Mat, t_adv: usize) -> Result<f64> {
    let elim = gf2_eliminate(basis, None)?;
    if elim.rank > ORACLE_MAX_RANK || basis.cols() > ORACLE_MAX_COLS {
        return Err(Error::SizeGuard("exact TV enumeration too large".into()));
    }
    let rows: Vec<u64> = (0..elim.rank).map(|r| elim.basis.row(r).to_uint()).collect();
    let mut codewords = Vec::with_capacity(1 << elim.rank);
    for mask in 0u64..(1u64 << elim.rank) {
        let mut v = 0u64;
        for (i, &row) in rows.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                v ^= row;
            }
        }
        codewords.push(v);
    }
    exact_tv_from_codewords(&codewords, basis.cols(), t_adv)
}

fn exact_tv_from_codewords(codewords: &[u64], width: usize, t_adv: usize) -> Result<f64> {
    let combos = binomial(width as u64, t_adv as u64);
    let total = codewords.len() as u128 * combos as u128;
    if total > 1 << 28 {
        return Err(Error::SizeGuard(format!("support enumeration of {total} points")));
    }
    let ones = ones_mask(width);
    let mut support: std::collections::HashMap<u64, u64> = Default::default();
    for &c in codewords {
        for e in WeightMasks::new(width, t_adv) {
            *support.entry(c ^ e).or_default() += 1;
        }
    }
    // D~_1(v) = D~_0(v ^ ones); iterate the union of both supports.
    let mut keys: std::collections::HashSet<u64> = support.keys().copied().collect();
    keys.extend(support.keys().map(|&k| k ^ ones).collect::<Vec<_>>());
    let mut diff_sum = 0u64;
    for k in keys {
        let p0 = support.get(&k).copied().unwrap_or(0);
        let p1 = support.get(&(k ^ ones)).copied().unwrap_or(0);
        diff_sum += p0.abs_diff(p1);
    }
    Ok(diff_sum as f64 / (2.0 * total as f64))
}

/// Exact maximum-likelihood classifier for dual tasks. The perturbed
/// payload is uniform within its H-coset, so the likelihood depends only
/// on the syndrome; comparing noise-pattern counts per syndrome gives
/// the exact ML rule without enumerating the kernel.
pub struct DualSyndromeOracle {
    h: Gf2Mat,
    columns: Vec<u64>,
    shift_syndrome: u64,
    t_adv: usize,
}

impl DualSyndromeOracle {
    pub fn new(h: &Gf2Mat, t_adv: usize) -> Result<Self> {
        if h.rows() > 63 || h.cols() > 63 {
            return Err(Error::SizeGuard("syndrome oracle needs <= 63-bit words".into()));
        }
        if binomial(h.cols() as u64, t_adv as u64) > 1 << 22 {
            return Err(Error::SizeGuard("too many noise patterns per query".into()));
        }
        let columns: Vec<u64> = (0..h.cols())
            .map(|c| {
                let mut unit = Gf2Vec::zeros(h.cols());
                unit.set(c, true);
                h.mul_vec(&unit).map(|v| v.to_uint())
            })
            .collect::<Result<_>>()?;
        let shift_syndrome = h.mul_vec(&Gf2Vec::ones(h.cols()))?.to_uint();
        Ok(DualSyndromeOracle { h: h.clone(), columns, shift_syndrome, t_adv })
    }

    fn pattern_count_with_syndrome(&self, target: u64) -> u64 {
        let mut count = 0u64;
        for e in WeightMasks::new(self.columns.len(), self.t_adv) {
            let mut s = 0u64;
            let mut mask = e;
            while mask != 0 {
                let i = mask.trailing_zeros() as usize;
                s ^= self.columns[i];
                mask &= mask - 1;
            }
            if s == target {
                count += 1;
            }
        }
        count
    }

    pub fn classify_word(&self, y: &Gf2Vec) -> Result<bool> {
        let s = self.h.mul_vec(y)?.to_uint();
        let c0 = self.pattern_count_with_syndrome(s);
        let c1 = self.pattern_count_with_syndrome(s ^ self.shift_syndrome);
        Ok(c1 > c0)
    }
}

impl Classifier for DualSyndromeOracle {
    fn name(&self) -> String {
        format!("brute-syndrome-t{}", self.t_adv)
    }

    fn classify(&self, payload: &Payload) -> Classification {
        match payload.bits().and_then(|y| self.classify_word(y)) {
            Ok(b) => Classification::Label(b),
            Err(_) => Classification::Abstain,
        }
    }
}

/// Exact TV for a dual task (kernel code) under exact-weight noise, via
/// the syndrome distribution: a perturbed payload determines and is
/// uniform within its H-coset, so the payload TV equals the TV between
/// the syndrome distributions H*e and H*1 + H*e.
pub fn exact_tv_dual_fixed_weight(h: &Gf2Mat, t_adv: usize) -> Result<f64> {
    if h.rows() > 63 {
        return Err(Error::SizeGuard("syndrome wider than 63 bits".into()));
    }
    let combos = binomial(h.cols() as u64, t_adv as u64);
    if combos > 1 << 26 || h.cols() > 63 {
        return Err(Error::SizeGuard(format!("{combos} error patterns")));
    }
    let columns: Vec<u64> = (0..h.cols())
        .map(|c| {
            let mut unit = Gf2Vec::zeros(h.cols());
            unit.set(c, true);
            h.mul_vec(&unit).map(|v| v.to_uint())
        })
        .collect::<Result<_>>()?;
    let shift_syndrome = h.mul_vec(&Gf2Vec::ones(h.cols()))?.to_uint();
    let mut w0: std::collections::HashMap<u64, u64> = Default::default();
    for e in WeightMasks::new(h.cols(), t_adv) {
        let mut s = 0u64;
        let mut mask = e;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            s ^= columns[i];
            mask &= mask - 1;
        }
        *w0.entry(s).or_default() += 1;
    }
    let mut keys: std::collections::HashSet<u64> = w0.keys().copied().collect();
    keys.extend(w0.keys().map(|&k| k ^ shift_syndrome).collect::<Vec<_>>());
    let mut diff_sum = 0u64;
    for k in keys {
        let p0 = w0.get(&k).copied().unwrap_or(0);
        let p1 = w0.get(&(k ^ shift_syndrome)).copied().unwrap_or(0);
        diff_sum += p0.abs_diff(p1);
    }
    Ok(diff_sum as f64 / (2.0 * combos as f64))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// All masks of the given weight within `width` bits (Gosper's hack).
struct WeightMasks {
    cur: u64,
    limit: u64,
    done: bool,
}

impl WeightMasks {
    fn new(width: usize, weight: usize) -> Self {
        assert!(width <= 63 && weight <= width);
        if weight == 0 {
            return WeightMasks { cur: 0, limit: 1u64 << width, done: false };
        }
        WeightMasks { cur: (1u64 << weight) - 1, limit: 1u64 << width, done: false }
    }
}

impl Iterator for WeightMasks {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.done || self.cur >= self.limit {
            self.done = true;
            return None;
        }
        let out = self.cur;
        if out == 0 {
            self.done = true;
            return Some(0);
        }
        let c = self.cur & self.cur.wrapping_neg();
        let r = self.cur + c;
        self.cur = (((r ^ self.cur) >> 2) / c) | r;
        Some(out)
    }
}
