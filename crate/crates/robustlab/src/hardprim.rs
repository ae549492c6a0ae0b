//! Hard-function primitives consumed by the encoded-bit task families: a
//! length-doubling expansion, the tree-walk PRF built from it, a
//! secret-table function, and the discrete-exponentiation permutation
//! with its most-significant-bit predicate.

use crate::algebra::gf2::Gf2Vec;
use crate::algebra::rng::RngStream;
use crate::error::{Error, Result};
use rand::Rng;
use sha2::{Digest, Sha256};
use std::sync::atomic::{AtomicU64, Ordering};

/// Length-doubling expansion of an n-bit seed into 2n bits, backed by a
/// fixed keyed hash. Treated as a black box everywhere.
pub fn prg_double(seed: &Gf2Vec) -> Gf2Vec {
    let n = seed.len();
    let bytes = seed.to_bytes();
    let mut out = Gf2Vec::zeros(2 * n);
    let blocks = (2 * n).div_ceil(256);
    let mut pos = 0usize;
    for ctr in 0..blocks {
        let mut h = Sha256::new();
        h.update(b"robustlab.prg.v1");
        h.update((n as u64).to_le_bytes());
        h.update((ctr as u64).to_le_bytes());
        h.update(&bytes);
        let digest = h.finalize();
        for byte in digest.iter() {
            for bit in 0..8 {
                if pos == 2 * n {
                    break;
                }
                if (byte >> bit) & 1 == 1 {
                    out.set(pos, true);
                }
                pos += 1;
            }
        }
    }
    out
}

/// Key for the tree-walk PRF family F_k : {0,1}^(n-1) -> {0,1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrfKey {
    key: Gf2Vec,
}

impl PrfKey {
    pub fn generate(n: usize, rng: &mut impl Rng) -> Self {
        PrfKey { key: Gf2Vec::random(n, rng) }
    }

    pub fn from_bits(key: Gf2Vec) -> Self {
        PrfKey { key }
    }

    pub fn n(&self) -> usize {
        self.key.len()
    }

    /// Input length of the family member, n - 1.
    pub fn input_len(&self) -> usize {
        self.key.len() - 1
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.key.to_bytes())
    }

    pub fn from_hex(s: &str, n: usize) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(PrfKey { key: Gf2Vec::from_bytes(&bytes, n)? })
    }

    pub fn key_bytes(&self) -> Vec<u8> {
        self.key.to_bytes()
    }

    #[cfg(test)]
    fn key_bits(&self) -> &Gf2Vec {
        &self.key
    }
}

/// Tree-walk evaluation: consume input bits left to right, keeping the
/// left or right half of the doubled state; output bit 0 of the leaf.
pub fn prf_eval(k: &PrfKey, x: &Gf2Vec) -> Result<bool> {
    if x.len() != k.input_len() {
        return Err(Error::DimensionMismatch(format!(
            "prf input length {} != {}",
            x.len(),
            k.input_len()
        )));
    }
    let mut state = k.key.clone();
    let n = state.len();
    for i in 0..x.len() {
        let doubled = prg_double(&state);
        state = if x.get(i) { doubled.slice(n, n) } else { doubled.slice(0, n) };
    }
    Ok(state.get(0))
}

/// Internal states visited during evaluation, for prefix-sharing checks.
pub fn prf_eval_trace(k: &PrfKey, x: &Gf2Vec) -> Result<Vec<Gf2Vec>> {
    if x.len() != k.input_len() {
        return Err(Error::DimensionMismatch("trace input length".into()));
    }
    let mut state = k.key.clone();
    let n = state.len();
    let mut trace = vec![state.clone()];
    for i in 0..x.len() {
        let doubled = prg_double(&state);
        state = if x.get(i) { doubled.slice(n, n) } else { doubled.slice(0, n) };
        trace.push(state.clone());
    }
    Ok(trace)
}

pub const TABLE_FN_MAX_N: usize = 24;

/// A secret uniformly random table g : {0,1}^n -> {0,1}, materialized
/// from a seed. Only (seed, n) ever serialize; the table stays inside.
/// Evaluations are counted so tests can confirm how much of the secret
/// a sampler touches.
pub struct TableFunction {
    seed: RngStream,
    n: usize,
    table: Vec<u64>,
    accesses: AtomicU64,
}

impl std::fmt::Debug for TableFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TableFunction").field("n", &self.n).finish_non_exhaustive()
    }
}

impl Clone for TableFunction {
    fn clone(&self) -> Self {
        TableFunction {
            seed: self.seed.clone(),
            n: self.n,
            table: self.table.clone(),
            accesses: AtomicU64::new(0),
        }
    }
}

impl TableFunction {
    pub fn new(seed: RngStream, n: usize) -> Result<Self> {
        if n == 0 || n > TABLE_FN_MAX_N {
            return Err(Error::InvalidParameter(format!(
                "table function n={n} outside 1..={TABLE_FN_MAX_N}"
            )));
        }
        let words = (1usize << n).div_ceil(64);
        let mut rng = seed.derive("table").rng();
        let mut table = vec![0u64; words];
        for w in table.iter_mut() {
            *w = rng.gen();
        }
        Ok(TableFunction { seed, n, table, accesses: AtomicU64::new(0) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &Gf2Vec) -> Result<bool> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "table input length {} != {}",
                z.len(),
                self.n
            )));
        }
        self.accesses.fetch_add(1, Ordering::Relaxed);
        let idx = z.to_uint() as usize;
        Ok((self.table[idx / 64] >> (idx % 64)) & 1 == 1)
    }

    pub fn access_count(&self) -> u64 {
        self.accesses.load(Ordering::Relaxed)
    }

    pub fn reset_access_count(&self) {
        self.accesses.store(0, Ordering::Relaxed);
    }

    /// Fraction of ones over the full table.
    pub fn bias(&self) -> f64 {
        let total = 1u64 << self.n;
        let ones: u64 = self.table.iter().map(|w| w.count_ones() as u64).sum();
        ones as f64 / total as f64
    }

    /// Fraction of inputs where two tables agree.
    pub fn agreement(&self, other: &TableFunction) -> f64 {
        assert_eq!(self.n, other.n);
        let total = 1u64 << self.n;
        let diff: u64 = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum();
        1.0 - diff as f64 / total as f64
    }

    pub fn seed(&self) -> &RngStream {
        &self.seed
    }
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Discrete exponentiation x -> g^x mod p on the domain {1, .., p-1},
/// with the most significant bit of x as the hard predicate. The
/// generator is found by factoring p - 1, so the map is a genuine
/// permutation of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwpInstance {
    p: u64,
    g: u64,
    /// Bit width of domain values: bits of p - 2, i.e. enough for x - 1.
    width: usize,
}

impl OwpInstance {
    /// Build the instance for a prime p, locating the smallest generator.
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !crate::bbs::is_prime_u64(p) {
            return Err(Error::InvalidParameter(format!("p = {p} must be a prime >= 5")));
        }
        let factors = prime_factors(p - 1);
        let g = (2..p)
            .find(|&g| factors.iter().all(|&f| mod_pow(g, (p - 1) / f, p) != 1))
            .ok_or(Error::PrimeSearchExhausted)?;
        let width = 64 - (p - 2).leading_zeros() as usize;
        Ok(OwpInstance { p, g, width })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Bits needed to write any x - 1 for x in the domain.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn domain_size(&self) -> u64 {
        self.p - 1
    }

    pub fn eval(&self, x: u64) -> Result<u64> {
        if x == 0 || x >= self.p {
            return Err(Error::OutOfDomain);
        }
        Ok(mod_pow(self.g, x, self.p))
    }

    /// Hard predicate: most significant bit (at the domain width) of the
    /// canonical representative x - 1.
    pub fn hardcore_bit(&self, x: u64) -> Result<bool> {
        if x == 0 || x >= self.p {
            return Err(Error::OutOfDomain);
        }
        Ok(((x - 1) >> (self.width - 1)) & 1 == 1)
    }

    /// Baby-step giant-step discrete log; the desk-scale realization of
    /// the inefficient classifier. O(sqrt(p)) time and space.
    pub fn invert(&self, y: u64) -> Result<u64> {
        if y == 0 || y >= self.p {
            return Err(Error::OutOfDomain);
        }
        let m = ((self.p as f64).sqrt().ceil() as u64).max(1);
        let mut baby = std::collections::HashMap::with_capacity(m as usize);
        let mut cur = 1u64;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = (cur as u128 * self.g as u128 % self.p as u128) as u64;
        }
        let gm_inv = mod_pow(mod_pow(self.g, m, self.p), self.p - 2, self.p);
        let mut gamma = y;
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma) {
                let mut x = (i * m + j) % (self.p - 1);
                if x == 0 {
                    x = self.p - 1; // g^(p-1) = g^0 = 1; the domain excludes 0
                }
                return Ok(x);
            }
            gamma = (gamma as u128 * gm_inv as u128 % self.p as u128) as u64;
        }
        Err(Error::OutOfDomain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rng::RngStream;

    #[test]
    fn prg_deterministic_and_expanding() {
        let seed = Gf2Vec::from_uint(0xDEADBEEF, 32);
        let a = prg_double(&seed);
        let b = prg_double(&seed);
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
        // wide state crosses the 256-bit digest boundary
        let wide = Gf2Vec::ones(200);
        assert_eq!(prg_double(&wide).len(), 400);
    }

    #[test]
    fn prg_halves_differ_for_most_seeds() {
        let mut rng = RngStream::from_seed_u64(31).rng();
        let mut differ = 0;
        for _ in 0..1000 {
            let seed = Gf2Vec::random(32, &mut rng);
            let out = prg_double(&seed);
            if out.slice(0, 32) != out.slice(32, 32) {
                differ += 1;
            }
        }
        assert!(differ >= 990, "only {differ} of 1000 seeds gave distinct halves");
    }

    #[test]
    fn prg_output_bias_small() {
        let mut rng = RngStream::from_seed_u64(32).rng();
        let mut ones = 0u64;
        let mut total = 0u64;
        for _ in 0..2000 {
            let seed = Gf2Vec::random(25, &mut rng);
            let out = prg_double(&seed);
            ones += out.weight() as u64;
            total += out.len() as u64;
        }
        let bias = (ones as f64 / total as f64 - 0.5).abs();
        assert!(bias <= 0.01, "bias {bias}");
    }

    #[test]
    fn prf_deterministic() {
        let mut rng = RngStream::from_seed_u64(33).rng();
        let k = PrfKey::generate(16, &mut rng);
        let x = Gf2Vec::random(15, &mut rng);
        assert_eq!(prf_eval(&k, &x).unwrap(), prf_eval(&k, &x).unwrap());
        assert!(prf_eval(&k, &Gf2Vec::zeros(9)).is_err());
    }

    #[test]
    fn prf_nearby_keys_agree_half_the_time() {
        let mut rng = RngStream::from_seed_u64(34).rng();
        let trials = 10_000;
        let mut agree = 0u32;
        for _ in 0..trials {
            let k1 = PrfKey::generate(16, &mut rng);
            let mut bits = k1.key_bits().clone();
            bits.flip(7);
            let k2 = PrfKey::from_bits(bits);
            let x = Gf2Vec::random(15, &mut rng);
            if prf_eval(&k1, &x).unwrap() == prf_eval(&k2, &x).unwrap() {
                agree += 1;
            }
        }
        let rate = agree as f64 / trials as f64;
        assert!((rate - 0.5).abs() <= 0.03, "agreement rate {rate}");
    }

    #[test]
    fn prf_output_balanced() {
        let mut rng = RngStream::from_seed_u64(35).rng();
        let k = PrfKey::generate(16, &mut rng);
        let trials = 10_000;
        let mut ones = 0u32;
        for _ in 0..trials {
            let x = Gf2Vec::random(15, &mut rng);
            if prf_eval(&k, &x).unwrap() {
                ones += 1;
            }
        }
        let rate = ones as f64 / trials as f64;
        assert!((rate - 0.5).abs() <= 0.02, "bias {rate}");
    }

    #[test]
    fn prf_prefix_sharing() {
        // Inputs with a common prefix must reuse the same internal states
        // up to the divergence point.
        let mut rng = RngStream::from_seed_u64(36).rng();
        let k = PrfKey::generate(12, &mut rng);
        let mut x1 = Gf2Vec::random(11, &mut rng);
        let mut x2 = x1.clone();
        x1.set(6, false);
        x2.set(6, true);
        let t1 = prf_eval_trace(&k, &x1).unwrap();
        let t2 = prf_eval_trace(&k, &x2).unwrap();
        for i in 0..=6 {
            assert_eq!(t1[i], t2[i], "states diverged before the differing bit");
        }
        assert_ne!(t1[7], t2[7]);
    }

    #[test]
    fn table_fn_stable_and_balanced() {
        let seed = RngStream::from_seed_u64(37);
        let g1 = TableFunction::new(seed.clone(), 16).unwrap();
        let g2 = TableFunction::new(seed, 16).unwrap();
        let z = Gf2Vec::from_uint(12345, 16);
        assert_eq!(g1.eval(&z).unwrap(), g2.eval(&z).unwrap());
        assert!((g1.bias() - 0.5).abs() <= 0.01, "table bias {}", g1.bias());
    }

    #[test]
    fn independent_tables_agree_about_half() {
        let a = TableFunction::new(RngStream::from_seed_u64(38), 16).unwrap();
        let b = TableFunction::new(RngStream::from_seed_u64(39), 16).unwrap();
        let agree = a.agreement(&b);
        assert!((agree - 0.5).abs() <= 0.02, "agreement {agree}");
    }

    #[test]
    fn table_access_counting() {
        let g = TableFunction::new(RngStream::from_seed_u64(40), 12).unwrap();
        assert_eq!(g.access_count(), 0);
        g.eval(&Gf2Vec::zeros(12)).unwrap();
        g.eval(&Gf2Vec::ones(12)).unwrap();
        assert_eq!(g.access_count(), 2);
        g.reset_access_count();
        assert_eq!(g.access_count(), 0);
    }

    #[test]
    fn owp_bijective_exhaustive_p251() {
        let owp = OwpInstance::new(251).unwrap();
        let mut seen = std::collections::HashSet::new();
        for x in 1..251u64 {
            let y = owp.eval(x).unwrap();
            assert!(y >= 1 && y < 251);
            assert!(seen.insert(y), "collision at x={x}");
        }
        assert_eq!(seen.len(), 250);
    }

    #[test]
    fn owp_bijective_exhaustive_16bit() {
        let owp = OwpInstance::new(65521).unwrap();
        let mut seen = vec![false; 65521];
        for x in 1..65521u64 {
            let y = owp.eval(x).unwrap() as usize;
            assert!(!seen[y]);
            seen[y] = true;
        }
    }

    #[test]
    fn owp_double_application_injective() {
        let owp = OwpInstance::new(251).unwrap();
        let a = owp.eval(owp.eval(17).unwrap()).unwrap();
        let b = owp.eval(owp.eval(18).unwrap()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn owp_brute_force_inversion_toy() {
        let owp = OwpInstance::new(251).unwrap();
        for x in [1u64, 5, 100, 249, 250] {
            let y = owp.eval(x).unwrap();
            // exhaustive preimage search (functional sanity, not security)
            let found = (1..251u64).find(|&c| owp.eval(c).unwrap() == y).unwrap();
            assert_eq!(found, x);
        }
    }

    #[test]
    fn owp_bsgs_inverts() {
        let owp = OwpInstance::new(65521).unwrap();
        let mut rng = RngStream::from_seed_u64(41).rng();
        use rand::Rng;
        for _ in 0..200 {
            let x = rng.gen_range(1..65521u64);
            let y = owp.eval(x).unwrap();
            assert_eq!(owp.invert(y).unwrap(), x);
        }
    }

    #[test]
    fn owp_rejects_out_of_domain() {
        let owp = OwpInstance::new(251).unwrap();
        assert!(matches!(owp.eval(0), Err(Error::OutOfDomain)));
        assert!(matches!(owp.eval(251), Err(Error::OutOfDomain)));
        assert!(matches!(owp.hardcore_bit(0), Err(Error::OutOfDomain)));
    }
}
