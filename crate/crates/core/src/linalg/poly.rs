//! Integer polynomials, determinants and characteristic polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// Coefficients in ascending degree order: `p[i]` multiplies `xⁱ`.
pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient `a / b` when `b` is monic and divides `a` exactly.
pub fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let b = trim(b.to_vec());
    let a = trim(a.to_vec());
    if !b.last().is_some_and(One::is_one) {
        return None;
    }
    if a.len() < b.len() {
        return if a.iter().all(Zero::is_zero) { Some(vec![BigInt::zero()]) } else { None };
    }
    let mut rem = a;
    let n = b.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - n];
    for k in (0..q.len()).rev() {
        let c = rem[k + n].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    rem.iter().all(Zero::is_zero).then(|| trim(q))
}

pub fn poly_eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// The `n`-th cyclotomic polynomial, via `xⁿ − 1 = ∏_{k | n} Φ_k`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let divisors: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    let mut cache: alloc::collections::BTreeMap<u64, IntPoly> = alloc::collections::BTreeMap::new();
    for &m in &divisors {
        let mut p = vec![BigInt::zero(); m as usize + 1];
        p[0] = -BigInt::one();
        p[m as usize] = BigInt::one();
        for (_, phi) in cache.iter().filter(|(&k, _)| m % k == 0) {
            p = poly_div_exact(&p, phi).expect("Φ_k divides xᵐ−1");
        }
        cache.insert(m, p);
    }
    cache.remove(&n).expect("n divides itself")
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num.div_floor(&prev);
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Monic `det(x·I − M)` by the Faddeev–LeVerrier recursion.
///
/// For integer `M` every intermediate matrix is integral and every division
/// by `k` is exact.
pub fn char_poly(m: &IntMatrix) -> Result<IntPoly> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("characteristic polynomial of non-square matrix".into()));
    }
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut acc = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // acc ← M·acc + c_{n−k+1}·I
        let mut next = m.mul_checked(&acc)?;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        let tr = m.mul_checked(&next)?.trace();
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev–LeVerrier division must be exact");
        coeffs[n - k] = -q;
        acc = next;
    }
    Ok(coeffs)
}

/// Sum of all `p×p` principal minors, i.e. the trace of the `p`-th exterior power.
pub fn principal_minor_sum(m: &IntMatrix, p: usize) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("principal minors of non-square matrix".into()));
    }
    let d = m.rows();
    if p > d {
        return Err(Error::DegreeOutOfRange { p, d });
    }
    if p == 0 {
        return Ok(BigInt::one());
    }
    let mut idx: Vec<usize> = (0..p).collect();
    let mut total = BigInt::zero();
    loop {
        total += determinant(&m.principal_submatrix(&idx))?;
        // next p-subset in lexicographic order
        let Some(i) = (0..p).rev().find(|&i| idx[i] != i + d - p) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..p {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(total)
}
