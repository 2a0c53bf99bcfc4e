//! Affine isometries of Rᵈ written in lattice coordinates.
//!
//! An isometry is stored as `x ↦ M·x + t` where `M` is the integer matrix of
//! the point part in the lattice basis and `t` a rational translation. The
//! `γ ∘ L_a` convention (`x ↦ γ(x + a)`) is available through
//! [`AffineIsometry::from_point_and_shift`] and [`AffineIsometry::a_of`];
//! the two are related by `t = M·a`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    char_poly, cyclotomic, determinant, frac, int_to_f64, integer_kernel, is_integer,
    poly_div_exact, poly_eval, principal_minor_sum, IntMatrix, IntPoly, RatMatrix, Rational,
};

/// Default cap on the holonomy group order.
pub const DEFAULT_MAX_ORDER: usize = 2048;

/// Angles and `−1`-multiplicity of an orthogonal map: `E(θ₁,…,θ_s; r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueType {
    angles: Vec<f64>,
    minus_one: usize,
    dim: usize,
}

impl EigenvalueType {
    pub fn new(mut angles: Vec<f64>, minus_one: usize, dim: usize) -> Result<Self> {
        if angles.iter().any(|&a| !(a > 0.0 && a < PI)) {
            return Err(Error::InvalidParameters("rotation angles must lie in (0, π)".into()));
        }
        if 2 * angles.len() + minus_one > dim {
            return Err(Error::InvalidParameters(format!(
                "2s + r = {} exceeds dimension {dim}",
                2 * angles.len() + minus_one
            )));
        }
        angles.sort_by(f64::total_cmp);
        Ok(EigenvalueType { angles, minus_one, dim })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `r`, the dimension of the `−1`-eigenspace.
    pub fn minus_one(&self) -> usize {
        self.minus_one
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the `+1`-eigenspace, `d − 2s − r`.
    pub fn plus_one(&self) -> usize {
        self.dim - 2 * self.angles.len() - self.minus_one
    }

    /// Codimension of the fixed space, `2s + r`.
    pub fn codim(&self) -> usize {
        2 * self.angles.len() + self.minus_one
    }
}

/// Multiplicities of the cyclotomic factors `Φ_n` of a characteristic polynomial.
///
/// For a finite-order integer matrix this determines the eigenvalue type
/// exactly and is totally ordered, so it doubles as an isotropy-type key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclotomicProfile(pub BTreeMap<u64, usize>);

impl CyclotomicProfile {
    pub fn of_poly(poly: &IntPoly) -> Result<Self> {
        let mut rest = poly.clone();
        let mut exps = BTreeMap::new();
        let mut n = 1u64;
        while rest.len() > 1 {
            let remaining = (rest.len() - 1) as u64;
            // φ(n) ≥ √(n/2), so no factor of degree ≤ remaining has n beyond this
            if n > 2 * remaining * remaining {
                return Err(Error::NotFiniteOrder);
            }
            if euler_phi(n) <= remaining {
                let phi = cyclotomic(n);
                while let Some(q) = poly_div_exact(&rest, &phi) {
                    rest = q;
                    *exps.entry(n).or_insert(0) += 1;
                }
            }
            n += 1;
        }
        if !rest[0].is_one() {
            return Err(Error::NotFiniteOrder);
        }
        Ok(CyclotomicProfile(exps))
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|(&n, &e)| euler_phi(n) as usize * e).sum()
    }

    /// Eigenvalue angles as exact fractions `j/n` of a full turn, with `0 < j/n < 1/2`.
    pub fn turns(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (&n, &e) in &self.0 {
            if n <= 2 {
                continue;
            }
            for j in (1..n).filter(|&j| 2 * j < n && j.gcd(&n) == 1) {
                out.extend(core::iter::repeat_n((j, n), e));
            }
        }
        out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        out
    }

    pub fn eigenvalue_type(&self) -> EigenvalueType {
        let angles = self
            .turns()
            .into_iter()
            .map(|(j, n)| 2.0 * PI * j as f64 / n as f64)
            .collect();
        let minus_one = self.0.get(&2).copied().unwrap_or(0);
        EigenvalueType::new(angles, minus_one, self.dim()).expect("cyclotomic angles lie in (0, π)")
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `x ↦ M·x + t` in lattice coordinates, orthogonal for the Gram matrix `G`.
#[derive(Clone, Debug)]
pub struct AffineIsometry {
    linear: IntMatrix,
    translation: Vec<Rational>,
    gram: Arc<RatMatrix>,
}

impl PartialEq for AffineIsometry {
    fn eq(&self, other: &Self) -> bool {
        self.linear == other.linear
            && self.translation == other.translation
            && (Arc::ptr_eq(&self.gram, &other.gram) || self.gram == other.gram)
    }
}

impl AffineIsometry {
    /// Checks `Mᵀ·G·M = G` exactly.
    pub fn new(linear: IntMatrix, translation: Vec<Rational>, gram: Arc<RatMatrix>) -> Result<Self> {
        let d = gram.rows();
        if linear.rows() != d || linear.cols() != d || translation.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "isometry of shape {}x{} / {} for dimension {d}",
                linear.rows(),
                linear.cols(),
                translation.len()
            )));
        }
        let m = linear.to_rational();
        if m.transpose().mul_checked(&gram)?.mul_checked(&m)? != *gram {
            return Err(Error::NotOrthogonal { index: 0 });
        }
        Ok(AffineIsometry { linear, translation, gram })
    }

    /// `γ ∘ L_a`, i.e. `x ↦ M·(x + a)`.
    pub fn from_point_and_shift(linear: IntMatrix, a: &[Rational], gram: Arc<RatMatrix>) -> Result<Self> {
        if a.len() != linear.cols() {
            return Err(Error::DimensionMismatch("shift length".into()));
        }
        let t = linear.to_rational().mul_vec(a);
        Self::new(linear, t, gram)
    }

    pub fn identity(gram: Arc<RatMatrix>) -> Self {
        let d = gram.rows();
        AffineIsometry {
            linear: IntMatrix::identity(d),
            translation: alloc::vec![BigRational::zero(); d],
            gram,
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn linear(&self) -> &IntMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    pub fn gram(&self) -> &Arc<RatMatrix> {
        &self.gram
    }

    pub fn is_identity(&self) -> bool {
        self.linear == IntMatrix::identity(self.dim()) && self.translation.iter().all(Zero::is_zero)
    }

    /// Same map with the translation reduced into `[0, 1)ᵈ`.
    pub fn reduced(&self) -> Self {
        AffineIsometry {
            linear: self.linear.clone(),
            translation: self.translation.iter().map(frac).collect(),
            gram: self.gram.clone(),
        }
    }

    /// `self ∘ other`: `x ↦ M_f·(M_g·x + t_g) + t_f`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !(Arc::ptr_eq(&self.gram, &other.gram) || self.gram == other.gram) {
            return Err(Error::GramMismatch);
        }
        let linear = self.linear.mul_checked(&other.linear)?;
        let mf = self.linear.to_rational();
        let translation = mf
            .mul_vec(&other.translation)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AffineIsometry { linear, translation, gram: self.gram.clone() })
    }

    /// Applies the map to a point in lattice coordinates.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.linear
            .to_rational()
            .mul_vec(x)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `a = M⁻¹·t` reduced into `[0, 1)ᵈ`.
    pub fn a_of(&self) -> Vec<Rational> {
        let inv = self.linear.to_rational().inverse().expect("isometries are invertible");
        inv.mul_vec(&self.translation).iter().map(frac).collect()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.linear).expect("square")
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.determinant().is_positive()
    }

    /// `tr_p(γ)`: trace of the induced action on `Λᵖ Rᵈ`.
    pub fn exterior_trace(&self, p: usize) -> Result<BigInt> {
        principal_minor_sum(&self.linear, p)
    }

    /// `M − I`.
    pub fn fixed_equation(&self) -> IntMatrix {
        self.linear.sub_checked(&IntMatrix::identity(self.dim())).expect("square")
    }

    /// Z-basis (columns) of the lattice vectors fixed by `M`.
    pub fn fixed_lattice(&self) -> IntMatrix {
        integer_kernel(&self.fixed_equation())
    }

    /// Dimension of the `+1`-eigenspace, computed exactly.
    pub fn fixed_dimension(&self) -> usize {
        self.fixed_lattice().cols()
    }

    pub fn char_poly(&self) -> IntPoly {
        char_poly(&self.linear).expect("square")
    }

    pub fn cyclotomic_profile(&self) -> Result<CyclotomicProfile> {
        CyclotomicProfile::of_poly(&self.char_poly())
    }

    /// Eigenvalue type from the exact cyclotomic factorization, cross-checked
    /// numerically against the trace and exactly against the fixed-space dimension.
    pub fn eigenvalue_type(&self) -> Result<EigenvalueType> {
        let ty = self.cyclotomic_profile()?.eigenvalue_type();
        let fixed = self.fixed_dimension();
        if ty.plus_one() != fixed {
            return Err(Error::EigenvalueCheck(format!(
                "+1 multiplicity {} differs from fixed-space dimension {fixed}",
                ty.plus_one()
            )));
        }
        let numeric = ty.plus_one() as f64 - ty.minus_one() as f64
            + ty.angles().iter().map(|&a| 2.0 * libm::cos(a)).sum::<f64>();
        let trace = int_to_f64(&self.linear.trace());
        if (numeric - trace).abs() > 1e-9 {
            return Err(Error::EigenvalueCheck(format!(
                "eigenvalue sum {numeric} differs from trace {trace}"
            )));
        }
        Ok(ty)
    }

    /// `|det(Id − A_γ)|` where `A_γ` is the restriction to the orthogonal
    /// complement of the fixed space.
    pub fn det_complement(&self) -> Rational {
        let mut q = self.char_poly();
        let x_minus_one = alloc::vec![-BigInt::one(), BigInt::one()];
        for _ in 0..self.fixed_dimension() {
            q = poly_div_exact(&q, &x_minus_one)
                .expect("finite-order maps have equal algebraic and geometric +1 multiplicity");
        }
        BigRational::from_integer(poly_eval(&q, &BigInt::one()).abs())
    }

    /// Order of the point part (smallest `n ≥ 1` with `Mⁿ = I`).
    pub fn point_order(&self) -> usize {
        let id = IntMatrix::identity(self.dim());
        let mut acc = self.linear.clone();
        let mut n = 1;
        while acc != id {
            acc = acc.mul_checked(&self.linear).expect("square");
            n += 1;
        }
        n
    }
}

/// Closes `gens` into coset representatives of the holonomy group `F = Σ/Λ`.
///
/// Translations are reduced mod Zᵈ; the identity comes first, the rest are
/// sorted by point matrix.
pub fn group_closure(
    gram: &Arc<RatMatrix>,
    gens: &[AffineIsometry],
    max_order: usize,
) -> Result<Vec<AffineIsometry>> {
    for g in gens {
        if !(Arc::ptr_eq(g.gram(), gram) || **g.gram() == **gram) {
            return Err(Error::GramMismatch);
        }
    }
    let gens: Vec<AffineIsometry> = gens.iter().map(AffineIsometry::reduced).collect();
    let identity = AffineIsometry::identity(gram.clone());
    let mut seen: BTreeMap<IntMatrix, AffineIsometry> = BTreeMap::new();
    seen.insert(identity.linear.clone(), identity.clone());
    let mut queue = VecDeque::from([identity.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.compose(&x)?.reduced();
            match seen.get(&y.linear) {
                Some(existing) => {
                    if existing.translation != y.translation {
                        return Err(Error::NonIntegralIdentityTranslation);
                    }
                }
                None => {
                    if seen.len() == max_order {
                        return Err(Error::ClosureOverflow { max_order });
                    }
                    seen.insert(y.linear.clone(), y.clone());
                    queue.push_back(y);
                }
            }
        }
    }
    let id_key = identity.linear.clone();
    let mut out = alloc::vec![seen.remove(&id_key).expect("identity present")];
    out.extend(seen.into_values());
    Ok(out)
}

/// Whether every translation coordinate is an integer.
pub fn is_integral_translation(t: &[Rational]) -> bool {
    t.iter().all(is_integer)
}
