//! Shortened Reed-Solomon codes over GF(64) with errors-and-erasures
//! decoding (Berlekamp-Massey, Chien search, Forney).
//!
//! Codewords are polynomials with roots alpha^1 .. alpha^(n-k); message
//! symbols sit in the high coefficient positions (systematic encoding).
//! The decoder corrects any pattern with 2*errors + erasures <= n - k.

use super::gf64::Gf64;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RsCode {
    pub n: usize,
    pub k: usize,
    field: Gf64,
    generator: Vec<u8>,
}

impl RsCode {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n || n > super::gf64::ORDER {
            return Err(Error::InvalidParameter(format!("rs dimensions n={n} k={k}")));
        }
        let field = Gf64::new();
        // g(x) = prod_{i=1..n-k} (x - alpha^i)
        let mut generator = vec![1u8];
        for i in 1..=(n - k) {
            let root = field.alpha_pow(i);
            let mut next = vec![0u8; generator.len() + 1];
            for (j, &c) in generator.iter().enumerate() {
                next[j + 1] ^= c;
                next[j] ^= field.mul(c, root);
            }
            generator = next;
        }
        Ok(RsCode { n, k, field, generator })
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn min_distance(&self) -> usize {
        self.n - self.k + 1
    }

    /// Systematic encode: message symbols become coefficients of
    /// x^(n-k) .. x^(n-1); parity fills the low positions.
    pub fn encode(&self, msg: &[u8]) -> Vec<u8> {
        assert_eq!(msg.len(), self.k);
        let r = self.redundancy();
        let mut cw = vec![0u8; self.n];
        cw[r..].copy_from_slice(msg);
        // Remainder of msg(x) * x^r modulo g(x).
        let mut rem = vec![0u8; r];
        for &m in msg.iter().rev() {
            let feedback = m ^ rem[r - 1];
            for j in (1..r).rev() {
                rem[j] = rem[j - 1] ^ self.field.mul(feedback, self.generator[j]);
            }
            rem[0] = self.field.mul(feedback, self.generator[0]);
        }
        cw[..r].copy_from_slice(&rem);
        debug_assert!(self.syndromes(&cw).iter().all(|&s| s == 0));
        cw
    }

    fn syndromes(&self, word: &[u8]) -> Vec<u8> {
        (1..=self.redundancy())
            .map(|i| self.field.poly_eval(word, self.field.alpha_pow(i)))
            .collect()
    }

    /// Decode with known erasure positions. Erased symbols of `word` may
    /// hold any value. Returns the message on success.
    pub fn decode_erasures(&self, word: &[u8], erasures: &[usize]) -> Result<Vec<u8>> {
        assert_eq!(word.len(), self.n);
        let two_t = self.redundancy();
        if erasures.len() > two_t {
            return Err(Error::DecodeFailure);
        }
        let f = &self.field;
        let mut received = word.to_vec();
        for &p in erasures {
            received[p] = 0;
        }
        let synd = self.syndromes(&received);
        let s = erasures.len();

        // Erasure locator Gamma(x) = prod (1 - X_j x).
        let mut psi = vec![1u8];
        for &p in erasures {
            let xj = f.alpha_pow(p);
            let mut next = vec![0u8; psi.len() + 1];
            for (i, &c) in psi.iter().enumerate() {
                next[i] ^= c;
                next[i + 1] ^= f.mul(c, xj);
            }
            psi = next;
        }

        if synd.iter().all(|&x| x == 0) {
            // Nothing to correct beyond (possibly) the erasures, which
            // zero-filling already made consistent.
            return Ok(received[two_t..].to_vec());
        }

        // Berlekamp-Massey seeded with the erasure locator (Massey form
        // with discrepancy normalizer b and gap counter m).
        let mut lambda = psi.clone();
        let mut prev = psi.clone();
        let mut b = 1u8;
        let mut m = 1usize;
        let mut errors = 0usize;
        for r in (s + 1)..=two_t {
            // discrepancy = sum_j lambda_j * S_{r-j} over valid syndromes
            let mut delta = 0u8;
            for (j, &lj) in lambda.iter().enumerate() {
                if j < r {
                    delta ^= f.mul(lj, synd[r - j - 1]);
                }
            }
            if delta == 0 {
                m += 1;
                continue;
            }
            // t(x) = lambda(x) - (delta/b) x^m prev(x)
            let scale = f.div(delta, b);
            let mut t = lambda.clone();
            t.resize(t.len().max(prev.len() + m), 0);
            for (i, &c) in prev.iter().enumerate() {
                t[i + m] ^= f.mul(scale, c);
            }
            if 2 * errors <= r - s - 1 {
                prev = lambda;
                b = delta;
                errors = r - s - errors;
                m = 1;
                lambda = t;
            } else {
                lambda = t;
                m += 1;
            }
        }
        while lambda.last() == Some(&0) && lambda.len() > 1 {
            lambda.pop();
        }
        let total = lambda.len() - 1; // erasures + errors located

        // Chien search over the shortened support.
        let mut positions = Vec::with_capacity(total);
        for p in 0..self.n {
            let x_inv = f.alpha_pow((super::gf64::ORDER - p % super::gf64::ORDER) % super::gf64::ORDER);
            if f.poly_eval(&lambda, x_inv) == 0 {
                positions.push(p);
            }
        }
        if positions.len() != total {
            return Err(Error::DecodeFailure);
        }

        // Forney: Omega(x) = S(x) Lambda(x) mod x^{2t}.
        let mut omega = vec![0u8; two_t];
        for (i, om) in omega.iter_mut().enumerate() {
            let mut acc = 0u8;
            for (j, &lj) in lambda.iter().enumerate() {
                if j <= i {
                    acc ^= f.mul(synd[i - j], lj);
                }
            }
            *om = acc;
        }
        // Formal derivative of Lambda: odd-degree terms shift down.
        let mut dlambda = vec![0u8; lambda.len().saturating_sub(1).max(1)];
        for (i, &c) in lambda.iter().enumerate() {
            if i % 2 == 1 {
                dlambda[i - 1] = c;
            }
        }

        let mut corrected = received;
        for &p in &positions {
            let x_inv = f.alpha_pow((super::gf64::ORDER - p % super::gf64::ORDER) % super::gf64::ORDER);
            let denom = f.poly_eval(&dlambda, x_inv);
            if denom == 0 {
                return Err(Error::DecodeFailure);
            }
            let num = f.poly_eval(&omega, x_inv);
            let magnitude = f.div(num, denom);
            corrected[p] ^= magnitude;
        }
        if self.syndromes(&corrected).iter().any(|&x| x != 0) {
            return Err(Error::DecodeFailure);
        }
        Ok(corrected[two_t..].to_vec())
    }

    pub fn decode(&self, word: &[u8]) -> Result<Vec<u8>> {
        self.decode_erasures(word, &[])
    }
}
