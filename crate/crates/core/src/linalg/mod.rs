//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] and [`BigRational`], so results are
//! exact regardless of dimension. Matrices are dense and row-major.

mod matrix;
mod normal_form;
mod poly;

pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use normal_form::{hermite_normal_form, integer_kernel, smith_normal_form, Smith};
pub use poly::{
    char_poly, cyclotomic, determinant, poly_div_exact, poly_eval, poly_mul,
    principal_minor_sum, IntPoly,
};

use alloc::string::ToString;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: Int) -> Rational {
    BigRational::from_integer(n)
}

/// Parses `"p/q"`, `"-p/q"` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| err())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Lossy conversion, adequate for the magnitudes that appear in reports.
pub fn rat_to_f64(x: &Rational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(60);
    let n = (n >> shift as usize).to_string();
    let d = (d >> shift as usize).to_string();
    parse_f64(&n) / parse_f64(&d)
}

fn parse_f64(s: &str) -> f64 {
    // `str::parse::<f64>` is available in core
    s.parse::<f64>().unwrap_or(f64::NAN)
}

pub fn int_to_f64(x: &Int) -> f64 {
    rat_to_f64(&rat_int(x.clone()))
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Binomial coefficient with the convention `C(m, n) = 0` for `n < 0` or `n > m`
/// (and for negative `m`).
pub fn binomial(m: i64, n: i64) -> Int {
    if n < 0 || m < 0 || n > m {
        return BigInt::zero();
    }
    let n = n.min(m - n);
    let mut acc = BigInt::one();
    for i in 0..n {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}
