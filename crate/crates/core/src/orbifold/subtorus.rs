//! Affine subtori of `Rᵈ/Zᵈ` and solutions of linear congruences mod 1.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::isometry::AffineIsometry;
use crate::linalg::{frac, hermite_normal_form, is_integer, smith_normal_form, IntMatrix, Rational};

/// `{x₀ + K·s : s ∈ Rᵐ} mod Zᵈ`, stored in a canonical form so that equal
/// sets compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subtorus {
    // HNF-reduced columns spanning the saturated direction lattice
    basis: IntMatrix,
    // x ↦ A·x mod 1 identifies Rᵈ/(span K + Zᵈ)
    coset: Vec<Rational>,
    annihilator: IntMatrix,
    point: Vec<Rational>,
}

fn rat_mul_vec(m: &IntMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .fold(BigRational::zero(), |acc, (a, x)| acc + BigRational::from_integer(a.clone()) * x)
        })
        .collect()
}

impl Subtorus {
    /// `direction` must have saturated, independent columns.
    pub fn new(direction: &IntMatrix, point: &[Rational]) -> Self {
        let d = direction.rows();
        let m = direction.cols();
        let (h, _) = hermite_normal_form(&direction.transpose());
        let rows: Vec<Vec<BigInt>> = (0..m).map(|i| h.row(i).to_vec()).collect();
        let basis = IntMatrix::from_columns(d, &rows).expect("rows of length d");
        let smith = smith_normal_form(&basis);
        let annihilator =
            IntMatrix::from_vec(d - m, d, (m..d).flat_map(|i| smith.u.row(i).to_vec()).collect())
                .expect("rows of length d");
        let coset: Vec<Rational> = rat_mul_vec(&annihilator, point).iter().map(frac).collect();
        // canonical point: U⁻¹·(0, …, 0, coset)
        let mut y = alloc::vec![BigRational::zero(); d];
        for (i, c) in coset.iter().enumerate() {
            y[m + i] = c.clone();
        }
        let u_inv = smith.u.to_rational().inverse().expect("unimodular");
        let point = u_inv.mul_vec(&y).iter().map(frac).collect();
        Subtorus { basis, coset, annihilator, point }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Columns form a Z-basis of the direction lattice.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn annihilator(&self) -> &IntMatrix {
        &self.annihilator
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        rat_mul_vec(&self.annihilator, x).iter().map(frac).eq(self.coset.iter().cloned())
    }

    pub fn contains(&self, other: &Subtorus) -> bool {
        self.annihilator.mul_checked(&other.basis).expect("shapes agree").is_zero()
            && self.contains_point(&other.point)
    }

    pub fn image(&self, f: &AffineIsometry) -> Subtorus {
        let dir = f.linear().mul_checked(&self.basis).expect("shapes agree");
        Subtorus::new(&dir, &f.apply(&self.point))
    }

    /// Whether `f` fixes every point of the subtorus.
    pub fn is_fixed_pointwise_by(&self, f: &AffineIsometry) -> bool {
        f.fixed_equation().mul_checked(&self.basis).expect("shapes agree").is_zero()
            && f.apply(&self.point).iter().zip(&self.point).all(|(a, b)| is_integer(&(a - b)))
    }

    /// The subtorus as a congruence system `A·x ≡ b (mod 1)`.
    pub fn congruences(&self) -> (IntMatrix, Vec<Rational>) {
        (self.annihilator.clone(), self.coset.clone())
    }
}

/// Connected components of `{x ∈ Rᵈ/Zᵈ : A·x ≡ b (mod 1)}`, ascending.
///
/// With `U·A·V = D` and `x = V·y`, the congruence splits into `dᵢ·yᵢ ≡ (U·b)ᵢ`
/// for the nonzero invariant factors and `(U·b)ᵢ ∈ Z` for the rest; the
/// remaining coordinates of `y` are free.
pub fn solve_mod_one(a: &IntMatrix, b: &[Rational]) -> Vec<Subtorus> {
    let d = a.cols();
    let smith = smith_normal_form(a);
    let factors = smith.invariant_factors();
    let r = factors.len();
    let ub = rat_mul_vec(&smith.u, b);
    if ub[r..].iter().any(|x| !is_integer(x)) {
        return Vec::new();
    }
    let direction = smith.v.columns(r..d);
    let counts: Vec<u64> = factors.iter().map(|f| f.to_u64().expect("small invariant factor")).collect();
    let total: u64 = counts.iter().product();
    let v = smith.v.to_rational();
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut y = alloc::vec![BigRational::zero(); d];
        for i in 0..r {
            let j = idx % counts[i];
            idx /= counts[i];
            y[i] = (&ub[i] + BigRational::from_integer(BigInt::from(j)))
                / BigRational::from_integer(factors[i].clone());
        }
        out.push(Subtorus::new(&direction, &v.mul_vec(&y)));
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use alloc::vec;

    fn zero(d: usize) -> Vec<Rational> {
        vec![rat(0, 1); d]
    }

    #[test]
    fn fixed_set_of_involution() {
        // (−2x₁, −2x₂, 0) ≡ 0 → x₁, x₂ ∈ {0, ½}, x₃ free
        let a = IntMatrix::from_i64(&[&[-2, 0, 0], &[0, -2, 0], &[0, 0, 0]]);
        let sols = solve_mod_one(&a, &zero(3));
        assert_eq!(sols.len(), 4);
        for s in &sols {
            assert_eq!(s.dim(), 1);
            assert_eq!(s.basis(), &IntMatrix::from_i64(&[&[0], &[0], &[1]]));
        }
        let pts: Vec<Vec<Rational>> = sols.iter().map(|s| s.point().to_vec()).collect();
        assert!(pts.contains(&vec![rat(1, 2), rat(1, 2), rat(0, 1)]));
    }

    #[test]
    fn inconsistent_system_is_empty() {
        // x ↦ (x₁ + ½, −x₂) has no fixed points
        let a = IntMatrix::from_i64(&[&[0, 0], &[0, -2]]);
        assert!(solve_mod_one(&a, &[rat(-1, 2), rat(0, 1)]).is_empty());
    }

    #[test]
    fn canonical_form_ignores_representation() {
        let k1 = IntMatrix::from_i64(&[&[1], &[1]]);
        let k2 = IntMatrix::from_i64(&[&[-1], &[-1]]);
        let a = Subtorus::new(&k1, &[rat(1, 4), rat(0, 1)]);
        let b = Subtorus::new(&k2, &[rat(5, 4), rat(1, 1)]);
        assert_eq!(a, b);
        assert!(a.contains_point(&[rat(3, 4), rat(1, 2)]));
        assert!(!a.contains_point(&[rat(0, 1), rat(0, 1)]));
        let p = Subtorus::new(&IntMatrix::zeros(2, 0), &[rat(1, 2), rat(1, 4)]);
        assert!(a.contains(&p));
        assert_eq!(p.point(), &[rat(1, 2), rat(1, 4)]);
    }

    #[test]
    fn diagonal_circle_matches_brute_force() {
        // (M − I)x ≡ 0 for the swap of coordinates: x₂ − x₁ ∈ Z, one circle
        let a = IntMatrix::from_i64(&[&[-1, 1], &[1, -1]]);
        let sols = solve_mod_one(&a, &zero(2));
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].dim(), 1);
        // 17×17 grid points on the circle are exactly those with x₁ = x₂
        for i in 0..17 {
            for j in 0..17 {
                let x = [rat(i, 17), rat(j, 17)];
                assert_eq!(sols[0].contains_point(&x), i == j);
            }
        }
    }
}
