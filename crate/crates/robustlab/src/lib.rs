//! Desk-scale laboratory for hard-to-robustly-classify learning tasks.
//!
//! The crate builds labeled-sample task families over GF(2) and Z_q
//! (parity/code tasks, lattice tasks, encoded hard-bit tasks, a
//! quadratic-residue PRG task), the perturbation adversaries that make
//! them hard, the trapdoor-based robust classifiers that solve them, and
//! a seeded Monte-Carlo evaluation engine with Hoeffding confidence
//! bands. Everything is deterministic given a master seed; trials are
//! independently seeded so parallel and sequential runs agree bit for
//! bit.

pub mod algebra;
pub mod bbs;
pub mod converse;
pub mod ecc;
pub mod error;
pub mod files;
pub mod framework;
pub mod hardfn;
pub mod hardprim;
pub mod lpn;
pub mod lwe;
pub mod parallel;

pub use error::{Error, Result};
