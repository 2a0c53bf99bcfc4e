//! Exact Hodge p-spectra, singular-strata censuses, Krawtchouk polynomials and
//! leading heat-trace invariants of closed flat orbifolds `Σ\Rᵈ`.
//!
//! Everything is computed in lattice coordinates over exact integers and
//! rationals; floating point only enters through phases `e^{2πi r}` and the
//! numeric heat-trace check.

#![no_std]
extern crate alloc;

pub mod error;
pub mod heat;
pub mod isometry;
pub mod krawtchouk;
pub mod lattice;
pub mod linalg;
pub mod orbifold;
pub mod spectrum;
pub mod surd;

pub use error::{Error, Result};
