//! Finite-field and modular linear algebra plus the seeded samplers that
//! every task construction consumes.

pub mod gauss;
pub mod gf2;
pub mod rng;
pub mod serial;
pub mod zq;

pub use gauss::{trunc_gauss_sample, trunc_gauss_vec, TruncGaussParams};
pub use gf2::{gf2_eliminate, gf2_rowspan_contains, gf2_sample_fixed_weight, Gf2Elimination, Gf2Mat, Gf2Vec};
pub use rng::RngStream;
pub use zq::{zq_solve, ZqMat, ZqVec};
