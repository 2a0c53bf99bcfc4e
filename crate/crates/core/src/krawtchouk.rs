//! Binary Krawtchouk polynomials `K_p^d(x) = Σ_j (−1)^j C(x, j) C(d − x, p − j)`.
//!
//! `K_p^d(k)` is the trace of the `p`-th exterior power of an involution whose
//! `−1`-eigenspace has dimension `k`, which is why integer zeros matter: they
//! make that trace vanish.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::binomial;

/// A single evaluation `K_p^d(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukEval {
    pub d: u32,
    pub p: u32,
    pub x: i64,
    pub value: BigInt,
}

impl KrawtchoukEval {
    pub fn new(d: u32, p: u32, x: i64) -> Result<Self> {
        let value = krawtchouk_eval(d, p, x)?;
        Ok(KrawtchoukEval { d, p, x, value })
    }
}

/// Exact value of `K_p^d(x)`.
pub fn krawtchouk_eval(d: u32, p: u32, x: i64) -> Result<BigInt> {
    if d == 0 || p > d {
        return Err(Error::DegreeOutOfRange { p: p as usize, d: d as usize });
    }
    let (d, p) = (i64::from(d), i64::from(p));
    let mut total = BigInt::zero();
    for j in 0..=p {
        let term = binomial(x, j) * binomial(d - x, p - j);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Integers `k ∈ [1, d−1]` with `K_p^d(k) = 0`, ascending.
pub fn krawtchouk_zeros(d: u32, p: u32) -> Result<Vec<i64>> {
    let mut zeros = Vec::new();
    for k in 1..i64::from(d) {
        if krawtchouk_eval(d, p, k)?.is_zero() {
            zeros.push(k);
        }
    }
    Ok(zeros)
}

/// For every odd `d ∈ [3, d_max]`, all `(p, k)` with `p, k ∈ [1, d−1]` and `K_p^d(k) = 0`.
///
/// `p = 0` and `p = d` are skipped since `K_0^d ≡ 1` and `K_d^d = ±1`.
pub fn odd_dimension_zero_scan(d_max: u32) -> Result<BTreeMap<u32, Vec<(u32, i64)>>> {
    if d_max < 3 {
        return Err(Error::InvalidParameters(alloc::format!(
            "odd-dimension scan needs d_max >= 3, got {d_max}"
        )));
    }
    let mut table = BTreeMap::new();
    for d in (3..=d_max).step_by(2) {
        let mut hits = Vec::new();
        for p in 1..d {
            for k in krawtchouk_zeros(d, p)? {
                hits.push((p, k));
            }
        }
        table.insert(d, hits);
    }
    Ok(table)
}
