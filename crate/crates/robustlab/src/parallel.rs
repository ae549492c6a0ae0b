//! Data-parallel trial execution with a sequential fallback.
//!
//! Every Monte-Carlo loop in the crate derives an independent RNG per
//! trial index, so trials commute and can run on any number of workers
//! without changing results. With the `parallel` feature (default) the
//! loops run on rayon; without it they run sequentially. `Parallelism`
//! lets callers and benchmarks pick a mode explicitly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

impl Default for Parallelism {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Parallelism::Rayon
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Parallelism::Sequential
    }
}

/// Sum `f(i)` over `i in 0..count`. The reduction is commutative, so the
/// mode only affects wall time, never the result.
pub fn sum_over<F>(count: u64, mode: Parallelism, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..count).map(f).sum(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => (0..count).into_par_iter().map(f).sum(),
    }
}

/// Run `f(i)` for `i in 0..count` and collect whether each returned true,
/// in index order.
pub fn map_bools<F>(count: u64, mode: Parallelism, f: F) -> Vec<bool>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => (0..count).into_par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_default_agree() {
        let f = |i: u64| i.wrapping_mul(2654435761) % 7;
        let seq = sum_over(1000, Parallelism::Sequential, f);
        let def = sum_over(1000, Parallelism::default(), f);
        assert_eq!(seq, def);
    }
}
