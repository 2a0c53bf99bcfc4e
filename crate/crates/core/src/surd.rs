//! Finite sums `Σ cᵢ·√nᵢ` with rational `cᵢ` and square-free-reduced integer `nᵢ`.
//!
//! Volumes of flat subtori are square roots of rational Gram determinants, so
//! keeping them in this form lets volumes and heat coefficients be compared
//! exactly.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{int_to_f64, rat_to_f64, Rational};

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Surd {
    terms: BTreeMap<BigInt, Rational>,
}

/// Splits `n > 0` as `s²·m`, removing square factors up to the trial-division limit.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut m = n.clone();
    let mut s = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        let pp = BigInt::from(p * p);
        if pp > m {
            break;
        }
        let bp = BigInt::from(p);
        while (&m % &pp).is_zero() {
            m /= &pp;
            s *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, m)
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn rational(c: Rational) -> Self {
        Surd::scaled_sqrt(c, &BigRational::one())
    }

    /// `c·√r` for a nonnegative rational `r`.
    pub fn scaled_sqrt(c: Rational, r: &Rational) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        let mut out = Surd::zero();
        if c.is_zero() || r.is_zero() {
            return out;
        }
        // √(a/b) = √(a·b)/b
        let n = r.numer() * r.denom();
        let (s, m) = square_split(&n);
        let coeff = c * BigRational::new(s, r.denom().clone());
        out.terms.insert(m, coeff);
        out
    }

    pub fn sqrt(r: &Rational) -> Self {
        Surd::scaled_sqrt(BigRational::one(), r)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, when there is no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(n, c)| rat_to_f64(c) * libm::sqrt(int_to_f64(n)))
            .sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Surd::zero();
        if c.is_zero() {
            return out;
        }
        for (n, x) in &self.terms {
            out.terms.insert(n.clone(), x * c);
        }
        out
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            let v = out.terms.get(n).cloned().unwrap_or_else(BigRational::zero) + c;
            if v.is_zero() {
                out.terms.remove(n);
            } else {
                out.terms.insert(n.clone(), v);
            }
        }
        out
    }
}

impl Mul<&Rational> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Rational) -> Surd {
        self.scale(rhs)
    }
}

impl core::iter::Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        iter.fold(Surd::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if n.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "sqrt({n})")?;
            } else {
                write!(f, "{c}*sqrt({n})")?;
            }
        }
        Ok(())
    }
}
