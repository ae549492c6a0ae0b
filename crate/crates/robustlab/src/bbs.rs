//! Quadratic-residue PRG over a Blum modulus, its factorization-trapdoor
//! distinguisher, the derived labeled task, and the constant-radius
//! ball-search classifier.
//!
//! The generator iterates x -> x^2 mod N for N = p*q with p = q = 3
//! (mod 4) and emits the parity of each state plus the final state. With
//! the factorization, square roots can be walked backwards (the unique
//! square-root-that-is-a-square via CRT), which distinguishes genuine
//! outputs from random strings.

use crate::algebra::gf2::Gf2Vec;
use crate::error::{Error, Result};
use crate::framework::task::{Norm, Payload, TaskFamily, TaskInstance};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use std::sync::atomic::{AtomicU64, Ordering};

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn mod_pow_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        exp >>= 1;
    }
    acc
}

const KEYGEN_ATTEMPTS: usize = 100_000;

/// Blum modulus with its secret factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbsKey {
    n: u64,
    p: u64,
    q: u64,
    bitlen: usize,
}

/// Generate a key whose modulus has roughly `bits` bits (each prime gets
/// half). Both primes are 3 mod 4 and distinct.
pub fn bbs_keygen(bits: usize, rng: &mut impl Rng) -> Result<BbsKey> {
    if !(16..=64).contains(&bits) {
        return Err(Error::InvalidParameter(format!("bbs modulus bits {bits} outside 16..=64")));
    }
    let half = bits / 2;
    let sample_prime = |rng: &mut dyn rand::RngCore| -> Result<u64> {
        for _ in 0..KEYGEN_ATTEMPTS {
            let mut c: u64 = rng.gen_range(0..(1u64 << (half - 1)));
            c |= 1 << (half - 1); // top bit
            c |= 3; // force c = 3 mod 4
            let c = (c & !3) | 3;
            if is_prime_u64(c) {
                return Ok(c);
            }
        }
        Err(Error::PrimeSearchExhausted)
    };
    let p = sample_prime(rng)?;
    let mut q = sample_prime(rng)?;
    let mut guard = 0;
    while q == p {
        q = sample_prime(rng)?;
        guard += 1;
        if guard > KEYGEN_ATTEMPTS {
            return Err(Error::PrimeSearchExhausted);
        }
    }
    let n = p * q;
    let bitlen = 64 - n.leading_zeros() as usize;
    Ok(BbsKey { n, p, q, bitlen })
}

impl BbsKey {
    pub fn from_parts(p: u64, q: u64) -> Result<Self> {
        if !is_prime_u64(p) || !is_prime_u64(q) || p == q || p % 4 != 3 || q % 4 != 3 {
            return Err(Error::InvalidParameter(
                "p, q must be distinct primes = 3 mod 4".into(),
            ));
        }
        let n = p.checked_mul(q).ok_or_else(|| Error::InvalidParameter("modulus overflow".into()))?;
        let bitlen = 64 - n.leading_zeros() as usize;
        Ok(BbsKey { n, p, q, bitlen })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn primes(&self) -> (u64, u64) {
        (self.p, self.q)
    }

    pub fn bitlen(&self) -> usize {
        self.bitlen
    }

    /// Is x a square mod N? (Euler criterion modulo both primes; 0
    /// counts as a square.)
    pub fn is_square(&self, x: u64) -> bool {
        let xp = x % self.p;
        let xq = x % self.q;
        let ep = xp == 0 || mod_pow_u64(xp, (self.p - 1) / 2, self.p) == 1;
        let eq = xq == 0 || mod_pow_u64(xq, (self.q - 1) / 2, self.q) == 1;
        ep && eq
    }

    /// The unique square root of a square x that is itself a square
    /// (the principal root of the squaring permutation on QR(N)).
    pub fn sqrt_principal(&self, x: u64) -> u64 {
        let rp = mod_pow_u64(x % self.p, (self.p + 1) / 4, self.p);
        let rq = mod_pow_u64(x % self.q, (self.q + 1) / 4, self.q);
        // CRT combine
        let p_inv_mod_q = mod_pow_u64(self.p % self.q, self.q - 2, self.q);
        let diff = (rq + self.q - rp % self.q) % self.q;
        let t = mul_mod_u64(diff, p_inv_mod_q, self.q);
        (rp as u128 + self.p as u128 * t as u128) as u64 % self.n
    }
}

/// Parity hard bit of a state.
#[inline]
pub fn hcb(x: u64) -> bool {
    x & 1 == 1
}

/// Output of the generator: m-1 parity bits and the final state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbsOutput {
    pub bits: Vec<bool>,
    pub final_state: u64,
}

/// Iterated squaring from x0: emit parities of x_1 .. x_{m-1} and the
/// final state x_m.
pub fn bbs_prg(n: u64, x0: u64, m: usize) -> Result<BbsOutput> {
    if x0 >= n {
        return Err(Error::OutOfDomain);
    }
    if m < 2 {
        return Err(Error::InvalidParameter("m must be >= 2".into()));
    }
    let mut bits = Vec::with_capacity(m - 1);
    let mut x = x0;
    for i in 1..=m {
        x = mul_mod_u64(x, x, n);
        if i < m {
            bits.push(hcb(x));
        }
    }
    Ok(BbsOutput { bits, final_state: x })
}

impl BbsOutput {
    /// Wire layout: y bits first, then the final state big-endian at
    /// `bitlen` bits.
    pub fn serialize(&self, bitlen: usize) -> Gf2Vec {
        let m1 = self.bits.len();
        let mut v = Gf2Vec::zeros(m1 + bitlen);
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        for i in 0..bitlen {
            if (self.final_state >> (bitlen - 1 - i)) & 1 == 1 {
                v.set(m1 + i, true);
            }
        }
        v
    }

    pub fn deserialize(v: &Gf2Vec, m: usize, bitlen: usize) -> Result<BbsOutput> {
        if v.len() != (m - 1) + bitlen {
            return Err(Error::Parse(format!(
                "bbs payload length {} != {}",
                v.len(),
                (m - 1) + bitlen
            )));
        }
        let bits = (0..m - 1).map(|i| v.get(i)).collect();
        let mut final_state = 0u64;
        for i in 0..bitlen {
            final_state = (final_state << 1) | v.get(m - 1 + i) as u64;
        }
        Ok(BbsOutput { bits, final_state })
    }
}

/// Trapdoor distinguisher: accepts iff the final state is a square and
/// the backward principal-root chain reproduces every parity bit.
pub fn bbs_trapdoor_distinguish(key: &BbsKey, z: &BbsOutput) -> bool {
    let x_m = z.final_state;
    if x_m >= key.modulus() || !key.is_square(x_m) {
        return false;
    }
    let mut x = x_m;
    for i in (0..z.bits.len()).rev() {
        x = key.sqrt_principal(x); // x_{i+1}
        if hcb(x) != z.bits[i] {
            return false;
        }
    }
    true
}

/// The labeled task: class 0 is a serialized generator output on a
/// random seed, class 1 is a uniform string of the same length. Sampling
/// needs only the public modulus; the factorization lives with the
/// classifier.
#[derive(Debug, Clone)]
pub struct BlprTask {
    modulus: u64,
    bitlen: usize,
    m: usize,
}

impl BlprTask {
    pub fn new(modulus: u64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter("m must be >= 2".into()));
        }
        if modulus < 4 {
            return Err(Error::InvalidParameter("modulus too small".into()));
        }
        let bitlen = 64 - modulus.leading_zeros() as usize;
        Ok(BlprTask { modulus, bitlen, m })
    }

    pub fn from_key(key: &BbsKey, m: usize) -> Result<Self> {
        Self::new(key.modulus(), m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn bitlen(&self) -> usize {
        self.bitlen
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Payload length without the leading label bit.
    pub fn body_len(&self) -> usize {
        (self.m - 1) + self.bitlen
    }
}

impl TaskFamily for BlprTask {
    fn family_id(&self) -> &'static str {
        "bbs-blpr"
    }

    fn params_echo(&self) -> String {
        format!("N={};m={};bitlen={}", self.modulus, self.m, self.bitlen)
    }

    fn payload_len(&self) -> usize {
        1 + self.body_len()
    }

    fn norm(&self) -> Norm {
        Norm::Hamming
    }

    fn robust_radius(&self) -> u64 {
        // constant-radius regime; see ball_search_classify
        2
    }

    fn sample(&self, label: bool, rng: &mut ChaCha20Rng) -> TaskInstance {
        let body = if label {
            Gf2Vec::random(self.body_len(), rng)
        } else {
            let x0 = rng.gen_range(0..self.modulus);
            let out = bbs_prg(self.modulus, x0, self.m).expect("x0 < N by construction");
            out.serialize(self.bitlen)
        };
        let mut payload = Gf2Vec::zeros(self.payload_len());
        payload.set(0, label);
        for i in 0..body.len() {
            if body.get(i) {
                payload.set(1 + i, true);
            }
        }
        // The task swaps the usual roles: the PRG class is "accept" for
        // the distinguisher, so label 0 carries the generator output.
        TaskInstance { label, payload: Payload::Bits(payload) }
    }
}

/// Distinguisher as a classifier on task bodies (label bit stripped).
pub fn distinguish_body(key: &BbsKey, m: usize, body: &Gf2Vec) -> Result<bool> {
    let out = BbsOutput::deserialize(body, m, key.bitlen())?;
    Ok(bbs_trapdoor_distinguish(key, &out))
}

pub const BALL_SEARCH_MAX_RADIUS: usize = 2;

/// Number of distinguisher invocations during the latest ball search.
pub static BALL_SEARCH_PROBES: AtomicU64 = AtomicU64::new(0);

/// Accept (class 0, generator output) iff some word within Hamming
/// distance c of the body makes the trapdoor distinguisher accept.
/// Correct for any <= c bit flips of a genuine sample; cost grows with
/// the ball volume.
pub fn ball_search_classify(key: &BbsKey, m: usize, c: usize, body: &Gf2Vec) -> Result<bool> {
    if c > BALL_SEARCH_MAX_RADIUS {
        return Err(Error::SizeGuard(format!(
            "ball radius {c} > {BALL_SEARCH_MAX_RADIUS} is combinatorially infeasible here"
        )));
    }
    BALL_SEARCH_PROBES.store(0, Ordering::Relaxed);
    let len = body.len();
    let probe = |candidate: &Gf2Vec| -> Result<bool> {
        BALL_SEARCH_PROBES.fetch_add(1, Ordering::Relaxed);
        distinguish_body(key, m, candidate)
    };
    if probe(body)? {
        return Ok(true);
    }
    if c >= 1 {
        for i in 0..len {
            let mut cand = body.clone();
            cand.flip(i);
            if probe(&cand)? {
                return Ok(true);
            }
        }
    }
    if c >= 2 {
        for i in 0..len {
            for j in (i + 1)..len {
                let mut cand = body.clone();
                cand.flip(i);
                cand.flip(j);
                if probe(&cand)? {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// The trapdoor distinguisher packaged as a classifier over task
/// payloads: strip the label bit, search the (optional) Hamming ball,
/// and map "accept" to class 0. Holds the secret factorization.
#[derive(Debug, Clone)]
pub struct TrapdoorClassifier {
    pub key: BbsKey,
    pub m: usize,
    /// None: plain distinguisher. Some(c): ball search of radius c.
    pub ball_radius: Option<usize>,
}

impl TrapdoorClassifier {
    pub fn new(key: BbsKey, m: usize, ball_radius: Option<usize>) -> Self {
        TrapdoorClassifier { key, m, ball_radius }
    }

    fn payload_len(&self) -> usize {
        1 + (self.m - 1) + self.key.bitlen()
    }
}

impl crate::framework::task::Classifier for TrapdoorClassifier {
    fn name(&self) -> String {
        match self.ball_radius {
            None => "bbs-trapdoor".into(),
            Some(c) => format!("bbs-ball-{c}"),
        }
    }

    fn classify(&self, payload: &Payload) -> crate::framework::task::Classification {
        use crate::framework::task::Classification;
        let Ok(bits) = payload.bits() else { return Classification::Abstain };
        if bits.len() != self.payload_len() {
            return Classification::Abstain;
        }
        let body = bits.slice(1, bits.len() - 1);
        let accepted = match self.ball_radius {
            None => distinguish_body(&self.key, self.m, &body),
            Some(c) => ball_search_classify(&self.key, self.m, c, &body),
        };
        match accepted {
            Ok(a) => Classification::Label(!a),
            Err(_) => Classification::Abstain,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rng::RngStream;

    fn toy_key(seed: u64) -> BbsKey {
        let mut rng = RngStream::from_seed_u64(seed).rng();
        bbs_keygen(32, &mut rng).unwrap()
    }

    #[test]
    fn keygen_produces_blum_primes() {
        let mut rng = RngStream::from_seed_u64(90).rng();
        for _ in 0..100 {
            let key = bbs_keygen(24, &mut rng).unwrap();
            let (p, q) = key.primes();
            assert_eq!(p % 4, 3);
            assert_eq!(q % 4, 3);
            assert_ne!(p, q);
            assert_eq!(p * q, key.modulus());
        }
    }

    #[test]
    fn keygen_deterministic_given_seed() {
        let a = toy_key(91);
        let b = toy_key(91);
        assert_eq!(a, b);
    }

    #[test]
    fn modulus_has_exactly_two_prime_factors_toy() {
        // trial-division factoring oracle at 24-bit scale
        let mut rng = RngStream::from_seed_u64(92).rng();
        let key = bbs_keygen(24, &mut rng).unwrap();
        let n = key.modulus();
        let mut m = n;
        let mut factors = Vec::new();
        let mut d = 2u64;
        while d * d <= m {
            while m % d == 0 {
                factors.push(d);
                m /= d;
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        assert_eq!(factors.len(), 2, "N = {n} factored as {factors:?}");
    }

    #[test]
    fn prg_fixed_points() {
        let key = toy_key(93);
        let n = key.modulus();
        let one = bbs_prg(n, 1, 8).unwrap();
        assert!(one.bits.iter().all(|&b| b), "1 squares to 1, parity 1");
        assert_eq!(one.final_state, 1);
        let zero = bbs_prg(n, 0, 8).unwrap();
        assert!(zero.bits.iter().all(|&b| !b));
        assert_eq!(zero.final_state, 0);
    }

    #[test]
    fn prg_suffix_recomputable_from_intermediate_state() {
        let key = toy_key(94);
        let n = key.modulus();
        let m = 12;
        let x0 = 0xABCDEF % n;
        let full = bbs_prg(n, x0, m).unwrap();
        // State after k steps:
        let mut x = x0;
        let k = 5;
        for _ in 0..k {
            x = mul_mod_u64(x, x, n);
        }
        let suffix = bbs_prg(n, x, m - k).unwrap();
        assert_eq!(&full.bits[k..], &suffix.bits[..]);
        assert_eq!(full.final_state, suffix.final_state);
    }

    #[test]
    fn principal_root_inverts_squaring_on_squares() {
        let key = toy_key(95);
        let n = key.modulus();
        let mut rng = RngStream::from_seed_u64(95).rng();
        for _ in 0..1000 {
            let r: u64 = rng.gen_range(1..n);
            let x = mul_mod_u64(r, r, n); // a square
            let y = mul_mod_u64(x, x, n);
            assert_eq!(key.sqrt_principal(y), x);
        }
    }

    #[test]
    fn distinguisher_complete_on_genuine_outputs() {
        let key = toy_key(96);
        let mut rng = RngStream::from_seed_u64(96).rng();
        for _ in 0..100 {
            let x0 = rng.gen_range(0..key.modulus());
            let out = bbs_prg(key.modulus(), x0, 16).unwrap();
            assert!(bbs_trapdoor_distinguish(&key, &out));
        }
    }

    #[test]
    fn distinguisher_rejects_random_strings() {
        let key = toy_key(97);
        let mut rng = RngStream::from_seed_u64(97).rng();
        let m = 16;
        let trials = 10_000;
        let mut accepts = 0u64;
        for _ in 0..trials {
            let body = Gf2Vec::random((m - 1) + key.bitlen(), &mut rng);
            let out = BbsOutput::deserialize(&body, m, key.bitlen()).unwrap();
            if bbs_trapdoor_distinguish(&key, &out) {
                accepts += 1;
            }
        }
        // analytic acceptance rate ~ (1/4) * 2^-(m-1); 3-sigma band
        let p = 0.25 * 0.5f64.powi((m - 1) as i32);
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        let upper = trials as f64 * p + 3.0 * sigma;
        assert!((accepts as f64) <= upper, "{accepts} accepts vs bound {upper}");
        assert!(accepts as f64 / trials as f64 <= 0.01);
    }

    #[test]
    fn blpr_first_bit_is_exact_and_lengths_match() {
        let key = toy_key(98);
        let task = BlprTask::from_key(&key, 12).unwrap();
        let mut rng = RngStream::from_seed_u64(98).rng();
        for i in 0..500 {
            let inst = task.sample(i % 2 == 0, &mut rng);
            let bits = inst.payload.bits().unwrap();
            assert_eq!(bits.len(), task.payload_len());
            assert_eq!(bits.get(0), inst.label);
        }
    }

    #[test]
    fn blpr_trapdoor_classifier_accurate_unperturbed() {
        let key = toy_key(99);
        let task = BlprTask::from_key(&key, 16).unwrap();
        let classifier = TrapdoorClassifier::new(key, 16, None);
        let report = crate::framework::eval::evaluate(
            &classifier,
            &task,
            None,
            2000,
            &RngStream::from_seed_u64(100),
        )
        .unwrap();
        assert!(report.estimate >= 0.99, "estimate {}", report.estimate);
    }

    #[test]
    fn ball_search_zero_radius_equals_distinguisher() {
        let key = toy_key(101);
        let task = BlprTask::from_key(&key, 10).unwrap();
        let mut rng = RngStream::from_seed_u64(101).rng();
        for i in 0..200 {
            let inst = task.sample(i % 2 == 0, &mut rng);
            let bits = inst.payload.bits().unwrap();
            let body = bits.slice(1, bits.len() - 1);
            assert_eq!(
                ball_search_classify(&key, 10, 0, &body).unwrap(),
                distinguish_body(&key, 10, &body).unwrap()
            );
        }
    }

    #[test]
    fn ball_search_radius_guard() {
        let key = toy_key(102);
        let task = BlprTask::from_key(&key, 10).unwrap();
        let body = Gf2Vec::zeros(task.body_len());
        assert!(matches!(
            ball_search_classify(&key, 10, 3, &body),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn ball_search_probe_count_monotone_in_radius() {
        let key = toy_key(103);
        let task = BlprTask::from_key(&key, 10).unwrap();
        let mut rng = RngStream::from_seed_u64(103).rng();
        // Find a body whose whole radius-2 ball is rejected, so every
        // search explores its full ball (deterministic given the seed).
        let body = loop {
            let cand = Gf2Vec::random(task.body_len(), &mut rng);
            if !ball_search_classify(&key, 10, 2, &cand).unwrap() {
                break cand;
            }
        };
        let mut counts = Vec::new();
        for c in 0..=2 {
            assert!(!ball_search_classify(&key, 10, c, &body).unwrap());
            counts.push(BALL_SEARCH_PROBES.load(Ordering::Relaxed));
        }
        let l = task.body_len() as u64;
        assert_eq!(counts, vec![1, 1 + l, 1 + l + l * (l - 1) / 2]);
    }
}
