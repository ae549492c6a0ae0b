//! Truncated discrete Gaussian sampling by rejection from a two-sided
//! geometric proposal.
//!
//! The target is w(z) proportional to exp(-z^2 / 2 sigma^2) restricted to
//! |z| <= bound. The proposal draws |z| geometric with rate 1/sigma; the
//! acceptance ratio exp(-(|z| - sigma)^2 / 2 sigma^2) is at most one, so
//! the loop terminates quickly. A hard cap guards against parameter
//! pathologies.

use crate::error::{Error, Result};
use rand::Rng;

const MAX_REJECTIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncGaussParams {
    pub sigma: f64,
    /// Truncation radius: every sample z satisfies |z| <= bound.
    pub bound: u64,
    pub modulus: u64,
}

impl TruncGaussParams {
    pub fn new(sigma: f64, bound: u64, modulus: u64) -> Result<Self> {
        if sigma < 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidParameter("sigma must be finite and >= 0".into()));
        }
        if modulus < 2 || bound > modulus / 2 {
            return Err(Error::InvalidParameter(format!(
                "bound {bound} must be <= modulus/2 = {}",
                modulus / 2
            )));
        }
        Ok(TruncGaussParams { sigma, bound, modulus })
    }

    /// Point mass at zero (used for identity adversaries).
    pub fn zero(modulus: u64) -> Self {
        TruncGaussParams { sigma: 0.0, bound: 0, modulus }
    }
}

/// One centered sample, returned as a residue in [0, q).
pub fn trunc_gauss_sample<R: Rng>(p: &TruncGaussParams, rng: &mut R) -> Result<u64> {
    let z = trunc_gauss_sample_i64(p, rng)?;
    Ok(z.rem_euclid(p.modulus as i64) as u64)
}

/// One centered sample as a signed integer in [-bound, bound].
pub fn trunc_gauss_sample_i64<R: Rng>(p: &TruncGaussParams, rng: &mut R) -> Result<i64> {
    if p.bound == 0 || p.sigma == 0.0 {
        return Ok(0);
    }
    // With sigma this small the mass at |z| >= 1 is below any f64, so the
    // rejection loop would only ever accept 0.
    if p.sigma < 1e-3 {
        return Ok(0);
    }
    let geo_p = 1.0 - (-1.0 / p.sigma).exp();
    for _ in 0..MAX_REJECTIONS {
        // Geometric magnitude: count failures before first success.
        let u: f64 = rng.gen::<f64>();
        let k = if geo_p >= 1.0 {
            0u64
        } else {
            ((1.0 - u).ln() / (1.0 - geo_p).ln()).floor() as u64
        };
        let negative = rng.gen::<bool>();
        if k == 0 && negative {
            continue; // avoid double-counting zero
        }
        if k > p.bound {
            continue;
        }
        let d = k as f64 - p.sigma;
        let accept = (-(d * d) / (2.0 * p.sigma * p.sigma)).exp();
        if rng.gen::<f64>() < accept {
            let z = k as i64;
            return Ok(if negative { -z } else { z });
        }
    }
    Err(Error::RejectionExhausted(MAX_REJECTIONS))
}

/// A length-`len` vector of i.i.d. truncated-Gaussian entries mod q.
pub fn trunc_gauss_vec<R: Rng>(
    p: &TruncGaussParams,
    len: usize,
    rng: &mut R,
) -> Result<crate::algebra::zq::ZqVec> {
    let mut v = crate::algebra::zq::ZqVec::zeros(len, p.modulus);
    for i in 0..len {
        v.set(i, trunc_gauss_sample(p, rng)?);
    }
    Ok(v)
}
