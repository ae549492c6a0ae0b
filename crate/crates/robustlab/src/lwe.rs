//! Learning-with-errors task families over Z_q for q a power of two:
//! samplers, gadget-based trapdoor generation with a small-entry kernel
//! trapdoor, both labeled tasks, the noise adversary, and the trapdoor
//! robust classifier.
//!
//! Trapdoor construction: A = [A_bar | G - A_bar * R] with R a random
//! 0/1 matrix and G the power-of-two gadget. The kernel trapdoor is
//! T = [R; I] * S_G where S_G is the exact integer basis of the gadget
//! kernel, so A * T = G * S_G = 0 (mod q) identically and every entry of
//! T is bounded by beta <= 3 in centered absolute value.

use crate::algebra::gauss::TruncGaussParams;
use crate::algebra::zq::{add_mod, centered_lift, mul_mod, sub_mod, zq_solve, ZqMat, ZqVec};
use crate::error::{Error, Result};
use crate::framework::task::{
    Adversary, Classification, Classifier, Norm, Payload, TaskFamily, TaskInstance,
};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LweRegime {
    NoEfficient,
    Trapdoor,
}

impl LweRegime {
    pub fn id(&self) -> &'static str {
        match self {
            LweRegime::NoEfficient => "lwe-uniform",
            LweRegime::Trapdoor => "lwe-trapdoor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LweParams {
    pub n: usize,
    /// log2 of the modulus.
    pub k: usize,
    pub q: u64,
    /// m = n*k + 2n.
    pub m: usize,
    pub chi: TruncGaussParams,
    pub regime: LweRegime,
}

impl LweParams {
    /// Modulus 2^ceil(3 log2 n), the power of two nearest the cubic
    /// schedule, so the gadget kernel basis is exact.
    fn modulus_for(n: usize) -> (usize, u64) {
        let k = (3.0 * (n as f64).log2()).ceil() as usize;
        (k, 1u64 << k)
    }

    pub fn trapdoor(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("n must be >= 2".into()));
        }
        let (k, q) = Self::modulus_for(n);
        let m = n * k + 2 * n;
        let chi = TruncGaussParams::new(q as f64 / (n * n) as f64, q / (2 * n as u64), q)?;
        Ok(LweParams { n, k, q, m, chi, regime: LweRegime::Trapdoor })
    }

    pub fn no_efficient(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("n must be >= 2".into()));
        }
        let (k, q) = Self::modulus_for(n);
        let m = n * k + 2 * n;
        let chi = TruncGaussParams::new(q as f64 / 100.0, q / 10, q)?;
        Ok(LweParams { n, k, q, m, chi, regime: LweRegime::NoEfficient })
    }

    /// Explicit parameters for micro instances; q must be a power of two.
    pub fn custom(n: usize, q: u64, m: usize, chi: TruncGaussParams, regime: LweRegime) -> Result<Self> {
        if !q.is_power_of_two() || q < 4 {
            return Err(Error::InvalidParameter("q must be a power of two >= 4".into()));
        }
        if m < n {
            return Err(Error::InvalidParameter("m < n".into()));
        }
        Ok(LweParams { n, k: q.trailing_zeros() as usize, q, m, chi, regime })
    }

    pub fn echo(&self) -> String {
        format!(
            "n={};m={};q={};sigma={:.4};bound={}",
            self.n, self.m, self.q, self.chi.sigma, self.chi.bound
        )
    }

    pub fn shift(&self) -> u64 {
        self.q / 2
    }
}

/// One LWE sample s^T A + e^T with e i.i.d. from chi.
pub fn lwe_sample(a: &ZqMat, chi: &TruncGaussParams, rng: &mut ChaCha20Rng) -> Result<ZqVec> {
    let s = ZqVec::random(a.rows(), a.modulus(), rng);
    let y = a.combine_rows(&s)?;
    let e = crate::algebra::gauss::trunc_gauss_vec(chi, a.cols(), rng)?;
    Ok(y.add(&e))
}

/// Small-entry kernel trapdoor: A * T = 0 (mod q), |entries| <= beta,
/// with the set of odd-column-sum indices the classifier listens on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LweTrapdoor {
    t: ZqMat,
    pub odd_cols: Vec<usize>,
    pub beta: u64,
}

impl LweTrapdoor {
    pub fn matrix(&self) -> &ZqMat {
        &self.t
    }

    pub fn from_matrix(t: ZqMat) -> Result<Self> {
        let beta = t.max_centered_abs();
        let odd_cols = odd_sum_columns(&t);
        if odd_cols.is_empty() {
            return Err(Error::InvalidParameter("no odd-sum columns".into()));
        }
        Ok(LweTrapdoor { t, odd_cols, beta })
    }

    /// Worst-case perturbation radius the classifier is deterministic
    /// within: floor((q/4 - 1) / (beta * m)).
    pub fn robust_radius(&self) -> u64 {
        let q = self.t.modulus();
        (q / 4 - 1) / (self.beta * self.t.rows() as u64)
    }
}

/// Parity of each column sum. Residue parity equals centered parity
/// because q is even.
fn odd_sum_columns(t: &ZqMat) -> Vec<usize> {
    (0..t.cols())
        .filter(|&c| {
            let sum: u64 = (0..t.rows()).map(|r| t.get(r, c) & 1).sum();
            sum % 2 == 1
        })
        .collect()
}

const TRAPSAMP_ATTEMPTS: usize = 1000;

/// Gadget trapdoor sampling for q = 2^k.
pub fn lwe_trapdoor_sample(
    params: &LweParams,
    rng: &mut impl Rng,
) -> Result<(ZqMat, LweTrapdoor)> {
    let (n, k, q, m) = (params.n, params.k, params.q, params.m);
    let nk = n * k;
    let mbar = m - nk; // 2n
    for _ in 0..TRAPSAMP_ATTEMPTS {
        let abar = ZqMat::random(n, mbar, q, rng);
        // R in {0,1}^(mbar x nk)
        let mut r = ZqMat::zeros(mbar, nk, q);
        for i in 0..mbar {
            for j in 0..nk {
                if rng.gen::<bool>() {
                    r.set(i, j, 1);
                }
            }
        }
        // A = [Abar | G - Abar R]
        let abar_r = abar.mul(&r)?;
        let mut a = ZqMat::zeros(n, m, q);
        for row in 0..n {
            for c in 0..mbar {
                a.set(row, c, abar.get(row, c));
            }
            for c in 0..nk {
                let g = gadget_entry(row, c, k, q);
                a.set(row, mbar + c, sub_mod(g, abar_r.get(row, c), q));
            }
        }
        // T = [R * S_G ; S_G]
        let mut t = ZqMat::zeros(m, nk, q);
        for i in 0..mbar {
            for j in 0..nk {
                // (R * S_G)[i][j] = 2 R[i][j] - R[i][j+1 within block]
                let mut v = mul_mod(2, r.get(i, j), q);
                if (j % k) + 1 < k {
                    v = sub_mod(v, r.get(i, j + 1), q);
                }
                t.set(i, j, v);
            }
        }
        for j in 0..nk {
            t.set(mbar + j, j, 2 % q);
            if (j % k) + 1 < k {
                t.set(mbar + j + 1, j, q - 1);
            }
        }
        let odd_cols = odd_sum_columns(&t);
        if odd_cols.is_empty() {
            continue;
        }
        let beta = t.max_centered_abs();
        debug_assert!(beta <= 3);
        return Ok((a, LweTrapdoor { t, odd_cols, beta }));
    }
    Err(Error::ResampleExhausted { what: "lwe trapdoor odd columns".into(), attempts: TRAPSAMP_ATTEMPTS })
}

fn gadget_entry(row: usize, col: usize, k: usize, q: u64) -> u64 {
    if col / k == row {
        (1u64 << (col % k)) % q
    } else {
        0
    }
}

/// The labeled task: D_0 = {s^T A}, D_1 = D_0 + (q/2) * 1.
#[derive(Debug, Clone)]
pub struct LweTask {
    params: LweParams,
    a: ZqMat,
}

const WELLFORMED_ATTEMPTS: usize = 1000;

impl LweTask {
    /// Wrap a matrix, verifying the shift vector is outside its row
    /// module. When the task comes from a trapdoor with odd columns this
    /// always holds; the check also covers uniform matrices, where a
    /// non-unit-pivot pathology means "resample".
    pub fn new(params: LweParams, a: ZqMat) -> Result<Self> {
        if a.rows() != params.n || a.cols() != params.m || a.modulus() != params.q {
            return Err(Error::DimensionMismatch("A shape/modulus".into()));
        }
        let shift = ZqVec::constant(params.m, params.shift(), params.q);
        let at = transpose(&a);
        match zq_solve(&at, &shift) {
            Ok(_) => Err(Error::InvalidParameter("shift vector inside the row module".into())),
            Err(Error::InconsistentSystem) => Ok(LweTask { params, a }),
            Err(Error::NonUnitPivot) => Err(Error::NonUnitPivot),
            Err(e) => Err(e),
        }
    }

    /// Uniform-A task, resampling on ill-formed draws.
    pub fn generate_uniform(params: LweParams, rng: &mut impl Rng) -> Result<Self> {
        for _ in 0..WELLFORMED_ATTEMPTS {
            let a = ZqMat::random(params.n, params.m, params.q, rng);
            match Self::new(params, a) {
                Ok(t) => return Ok(t),
                Err(Error::InvalidParameter(_)) | Err(Error::NonUnitPivot) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::ResampleExhausted {
            what: "uniform LWE well-formedness".into(),
            attempts: WELLFORMED_ATTEMPTS,
        })
    }

    pub fn params(&self) -> LweParams {
        self.params
    }

    pub fn matrix(&self) -> &ZqMat {
        &self.a
    }

    pub fn shift(&self) -> Payload {
        Payload::Mod(ZqVec::constant(self.params.m, self.params.shift(), self.params.q))
    }

    pub fn class0_rank(&self) -> usize {
        self.params.n
    }
}

fn transpose(a: &ZqMat) -> ZqMat {
    let mut out = ZqMat::zeros(a.cols(), a.rows(), a.modulus());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out.set(c, r, a.get(r, c));
        }
    }
    out
}

impl TaskFamily for LweTask {
    fn family_id(&self) -> &'static str {
        self.params.regime.id()
    }

    fn params_echo(&self) -> String {
        self.params.echo()
    }

    fn payload_len(&self) -> usize {
        self.params.m
    }

    fn norm(&self) -> Norm {
        Norm::CenteredLinf
    }

    fn robust_radius(&self) -> u64 {
        self.params.chi.bound
    }

    fn sample(&self, label: bool, rng: &mut ChaCha20Rng) -> TaskInstance {
        let s = ZqVec::random(self.params.n, self.params.q, rng);
        let mut y = self.a.combine_rows(&s).expect("A shape");
        if label {
            let shift = ZqVec::constant(self.params.m, self.params.shift(), self.params.q);
            y = y.add(&shift);
        }
        TaskInstance { label, payload: Payload::Mod(y) }
    }
}

/// Robust classifier R_T: z = y^T T restricted to the odd-sum columns;
/// class 0 iff every centered |z_j| < q/4.
///
/// Class 0 gives |z_j| <= beta * m * ||e||_inf; class 1 adds q/2 on odd
/// columns. Within the radius floor((q/4 - 1)/(beta m)) both sides clear
/// their thresholds deterministically. Under the family's chi adversary
/// the bound can exceed that radius and correctness is statistical.
#[derive(Debug, Clone)]
pub struct LweRobustClassifier {
    t: ZqMat,
    odd_cols: Vec<usize>,
}

impl LweRobustClassifier {
    pub fn new(trapdoor: &LweTrapdoor) -> Self {
        LweRobustClassifier { t: trapdoor.matrix().clone(), odd_cols: trapdoor.odd_cols.clone() }
    }

    pub fn classify_vec(&self, y: &ZqVec) -> Result<bool> {
        if y.len() != self.t.rows() || y.modulus() != self.t.modulus() {
            return Err(Error::DimensionMismatch("payload vs trapdoor".into()));
        }
        let q = self.t.modulus();
        let quarter = (q / 4) as i64;
        for &j in &self.odd_cols {
            let mut acc: u64 = 0;
            for i in 0..self.t.rows() {
                acc = add_mod(acc, mul_mod(y.get(i), self.t.get(i, j), q), q);
            }
            if centered_lift(acc, q).abs() >= quarter {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl Classifier for LweRobustClassifier {
    fn name(&self) -> String {
        "robust-T".into()
    }

    fn classify(&self, payload: &Payload) -> Classification {
        match payload.modq().and_then(|y| self.classify_vec(y)) {
            Ok(b) => Classification::Label(b),
            Err(_) => Classification::Abstain,
        }
    }
}

/// The family's noise adversary.
pub fn adversary_chi(chi: TruncGaussParams) -> Adversary {
    Adversary::Chi { params: chi }
}

/// Worst-case within-radius adversary: a fixed offset of magnitude eps
/// sign-aligned with the heaviest odd trapdoor column.
pub fn adversary_sign_aligned(trapdoor: &LweTrapdoor, eps: u64) -> Result<Adversary> {
    if eps > trapdoor.robust_radius() {
        return Err(Error::BudgetExceeded { requested: eps, allowed: trapdoor.robust_radius() });
    }
    let t = trapdoor.matrix();
    let q = t.modulus();
    let target = *trapdoor
        .odd_cols
        .iter()
        .max_by_key(|&&j| {
            (0..t.rows()).map(|i| centered_lift(t.get(i, j), q).unsigned_abs()).sum::<u64>()
        })
        .ok_or_else(|| Error::InvalidParameter("no odd columns".into()))?;
    let mut offset = ZqVec::zeros(t.rows(), q);
    for i in 0..t.rows() {
        let sign = centered_lift(t.get(i, target), q).signum();
        let v = match sign {
            1 => eps % q,
            -1 => (q - eps % q) % q,
            _ => eps % q, // zero entry: any direction, contributes nothing
        };
        offset.set(i, v);
    }
    Ok(Adversary::FixedOffset { offset })
}

/// Certificate from re-checking a trapdoor against its matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrapdoorCertificate {
    pub ok: bool,
    pub violations: Vec<String>,
    pub beta: u64,
    pub odd_cols: usize,
    pub robust_radius: u64,
}

/// Recompute A*T, the entry bound, and the odd-column set.
pub fn verify_trapdoor(a: &ZqMat, trapdoor: &LweTrapdoor) -> TrapdoorCertificate {
    let mut violations = Vec::new();
    let t = trapdoor.matrix();
    if a.cols() != t.rows() || a.modulus() != t.modulus() {
        violations.push("shape/modulus mismatch".to_string());
    } else {
        match a.mul(t) {
            Ok(prod) => {
                for r in 0..prod.rows() {
                    for c in 0..prod.cols() {
                        if prod.get(r, c) != 0 {
                            violations.push(format!("A*T nonzero at ({r},{c})"));
                        }
                    }
                }
            }
            Err(e) => violations.push(format!("product failed: {e}")),
        }
    }
    let beta = t.max_centered_abs();
    if beta > 3 {
        violations.push(format!("entry bound {beta} exceeds 3"));
    }
    if beta != trapdoor.beta {
        violations.push(format!("stored beta {} != recomputed {beta}", trapdoor.beta));
    }
    let odd = odd_sum_columns(t);
    if odd != trapdoor.odd_cols {
        violations.push("odd-column set mismatch".to_string());
    }
    if odd.is_empty() {
        violations.push("no odd-sum columns".to_string());
    }
    TrapdoorCertificate {
        ok: violations.is_empty(),
        violations,
        beta,
        odd_cols: odd.len(),
        robust_radius: trapdoor.robust_radius(),
    }
}
