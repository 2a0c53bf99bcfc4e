//! Lattices given by rational Gram matrices, and exact shell enumeration of
//! their duals.
//!
//! Coordinates: lattice vectors are integer vectors in the lattice basis, dual
//! vectors are integer vectors `n` in the dual basis. Then `‖v‖² = nᵀG⁻¹n`,
//! `v·a = n·q` for a point `a` with lattice coordinates `q`, and a point map
//! `M` fixes `v` exactly when `Mᵀn = n`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::isometry::AffineIsometry;
use crate::linalg::{rat_to_f64, IntMatrix, RatMatrix, Rational};
use crate::surd::Surd;

/// Full-rank lattice with positive-definite Gram matrix `G` and cached dual Gram `G⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    gram: Arc<RatMatrix>,
    dual_gram: RatMatrix,
    // q(n) = Σᵢ diag[i]·(nᵢ + Σ_{j>i} mu[i][j]·n_j)² for the dual form
    diag: Vec<Rational>,
    mu: RatMatrix,
}

/// All dual vectors of one exact squared norm `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shell {
    pub q: Rational,
    pub vectors: Vec<Vec<i64>>,
}

impl Shell {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Exact `LDLᵀ`-style decomposition used for enumeration bounds.
fn quadratic_decomposition(q: &RatMatrix) -> Result<(Vec<Rational>, RatMatrix)> {
    let d = q.rows();
    let mut diag: Vec<Rational> = Vec::with_capacity(d);
    let mut mu = RatMatrix::zeros(d, d);
    for i in 0..d {
        let mut h = q[(i, i)].clone();
        for k in 0..i {
            h -= &diag[k] * &mu[(k, i)] * &mu[(k, i)];
        }
        if !h.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for j in i + 1..d {
            let mut v = q[(i, j)].clone();
            for k in 0..i {
                v -= &diag[k] * &mu[(k, i)] * &mu[(k, j)];
            }
            mu[(i, j)] = v / &h;
        }
        diag.push(h);
    }
    Ok((diag, mu))
}

impl Lattice {
    pub fn new(gram: RatMatrix) -> Result<Self> {
        if !gram.is_symmetric() || gram.rows() == 0 {
            return Err(Error::NotPositiveDefinite);
        }
        // leading principal minors are the running products of the pivots
        quadratic_decomposition(&gram)?;
        let dual_gram = gram.inverse()?;
        let (diag, mu) = quadratic_decomposition(&dual_gram)?;
        Ok(Lattice { gram: Arc::new(gram), dual_gram, diag, mu })
    }

    /// `Zᵈ` with the standard inner product.
    pub fn standard(d: usize) -> Self {
        Lattice::new(RatMatrix::identity(d)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Arc<RatMatrix> {
        &self.gram
    }

    pub fn dual_gram(&self) -> &RatMatrix {
        &self.dual_gram
    }

    /// Exact `nᵀG⁻¹n`.
    pub fn dual_norm(&self, n: &[i64]) -> Rational {
        let d = self.dim();
        let mut acc = BigRational::zero();
        for i in 0..d {
            if n[i] == 0 {
                continue;
            }
            for j in 0..d {
                if n[j] != 0 {
                    acc += &self.dual_gram[(i, j)] * BigRational::from_integer(BigInt::from(n[i] * n[j]));
                }
            }
        }
        acc
    }

    /// `vol(Rᵈ/Λ)` as an exact surd.
    pub fn covolume(&self) -> Surd {
        Surd::sqrt(&self.gram.determinant().expect("square"))
    }

    /// Every dual shell with `q ≤ cutoff`, ascending, vectors sorted lexicographically.
    pub fn shells_up_to(&self, cutoff: &Rational) -> Result<Vec<Shell>> {
        if cutoff.is_negative() {
            return Err(Error::NegativeCutoff(alloc::format!("{cutoff}")));
        }
        let d = self.dim();
        let mut found: BTreeMap<Rational, Vec<Vec<i64>>> = BTreeMap::new();
        let mut x = alloc::vec![0i64; d];
        self.enumerate(d, &mut x, cutoff.clone(), cutoff, &mut found);
        Ok(found
            .into_iter()
            .map(|(q, mut vectors)| {
                vectors.sort();
                Shell { q, vectors }
            })
            .collect())
    }

    // Fixes coordinates from the last one down; `level` coordinates remain free.
    fn enumerate(
        &self,
        level: usize,
        x: &mut Vec<i64>,
        remaining: Rational,
        cutoff: &Rational,
        out: &mut BTreeMap<Rational, Vec<Vec<i64>>>,
    ) {
        if level == 0 {
            out.entry(cutoff - &remaining).or_default().push(x.clone());
            return;
        }
        let i = level - 1;
        let d = self.dim();
        let mut center = BigRational::zero();
        for j in i + 1..d {
            if x[j] != 0 {
                center -= &self.mu[(i, j)] * BigRational::from_integer(BigInt::from(x[j]));
            }
        }
        let h = &self.diag[i];
        let budget = &remaining / h;
        let Some((lo, hi)) = integer_window(&center, &budget) else {
            return;
        };
        for v in lo..=hi {
            let off = BigRational::from_integer(BigInt::from(v)) - &center;
            let rest = &remaining - h * &off * &off;
            x[i] = v;
            self.enumerate(i, x, rest, cutoff, out);
        }
        x[i] = 0;
    }

    /// Vectors `n` of the shell with `Mᵀn = n`.
    pub fn fixed_dual_vectors(&self, f: &AffineIsometry, shell: &Shell) -> Vec<Vec<i64>> {
        let mt = f.linear().transpose().to_i64().expect("point matrices have small entries");
        shell
            .vectors
            .iter()
            .filter(|n| {
                (0..n.len()).all(|i| (0..n.len()).map(|j| mt[(i, j)] * n[j]).sum::<i64>() == n[i])
            })
            .cloned()
            .collect()
    }

    /// Gram determinant `det(KᵀGK)` of the sublattice spanned by the columns of `K`,
    /// and its square root (the covolume).
    pub fn sublattice_covolume(&self, k: &IntMatrix) -> Result<(Rational, f64)> {
        if k.rows() != self.dim() {
            return Err(Error::DimensionMismatch("sublattice basis rows".into()));
        }
        let kr = k.to_rational();
        let det = kr.transpose().mul_checked(&self.gram)?.mul_checked(&kr)?.determinant()?;
        if det.is_zero() {
            return Err(Error::DependentColumns);
        }
        let vol = libm::sqrt(rat_to_f64(&det));
        Ok((det, vol))
    }
}

/// Integers `v` with `(v − c)² ≤ s`, as an inclusive range.
fn integer_window(c: &Rational, s: &Rational) -> Option<(i64, i64)> {
    if s.is_negative() {
        return None;
    }
    let fits = |v: i64| {
        let off = BigRational::from_integer(BigInt::from(v)) - c;
        &off * &off <= *s
    };
    let cf = rat_to_f64(c);
    let sf = libm::sqrt(rat_to_f64(s));
    let mut lo = libm::floor(cf - sf).to_i64().unwrap_or(0);
    let mut hi = libm::ceil(cf + sf).to_i64().unwrap_or(0);
    // the float estimate only seeds the search; membership is decided exactly
    while fits(lo - 1) {
        lo -= 1;
    }
    while lo <= hi && !fits(lo) {
        lo += 1;
    }
    while fits(hi + 1) {
        hi += 1;
    }
    while hi >= lo && !fits(hi) {
        hi -= 1;
    }
    (lo <= hi).then_some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use alloc::vec;

    fn hex() -> Lattice {
        Lattice::new(
            RatMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 2)], vec![rat(1, 2), rat(1, 1)]]).unwrap(),
        )
        .unwrap()
    }

    /// Brute-force shells over the box `|nᵢ| ≤ r`.
    fn box_shells(l: &Lattice, r: i64, cutoff: &Rational) -> BTreeMap<Rational, usize> {
        let d = l.dim();
        let mut counts = BTreeMap::new();
        let side = (2 * r + 1) as usize;
        for idx in 0..side.pow(d as u32) {
            let mut rem = idx;
            let n: Vec<i64> = (0..d)
                .map(|_| {
                    let v = (rem % side) as i64 - r;
                    rem /= side;
                    v
                })
                .collect();
            let q = l.dual_norm(&n);
            if q <= *cutoff {
                *counts.entry(q).or_insert(0) += 1;
            }
        }
        counts
    }

    #[test]
    fn standard_lattice_shells() {
        for d in 1..=4 {
            let shells = Lattice::standard(d).shells_up_to(&rat(1, 1)).unwrap();
            assert_eq!(shells.len(), 2);
            assert_eq!(shells[0].q, rat(0, 1));
            assert_eq!(shells[0].vectors, vec![vec![0i64; d]]);
            assert_eq!(shells[1].len(), 2 * d);
        }
        let z2 = Lattice::standard(2).shells_up_to(&rat(2, 1)).unwrap();
        assert_eq!(z2[2].q, rat(2, 1));
        assert_eq!(z2[2].vectors, vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]);
    }

    #[test]
    fn hexagonal_shells_match_brute_force() {
        let l = hex();
        // the dual form is (4/3)(n₁² − n₁n₂ + n₂²); nothing nonzero has q ≤ 1
        let upto_one = l.shells_up_to(&rat(1, 1)).unwrap();
        assert_eq!(upto_one.len(), 1);
        let shells = l.shells_up_to(&rat(4, 3)).unwrap();
        assert_eq!(shells[1].q, rat(4, 3));
        assert_eq!(shells[1].len(), 6);
        let cutoff = rat(28, 3);
        let counts: BTreeMap<Rational, usize> =
            l.shells_up_to(&cutoff).unwrap().into_iter().map(|s| (s.q, s.vectors.len())).collect();
        assert_eq!(counts, box_shells(&l, 5, &cutoff));
    }

    #[test]
    fn shells_are_negation_closed() {
        for s in hex().shells_up_to(&rat(12, 1)).unwrap() {
            for v in &s.vectors {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                assert!(s.vectors.contains(&neg));
            }
        }
    }

    #[test]
    fn negative_cutoff_is_rejected() {
        assert!(matches!(Lattice::standard(2).shells_up_to(&rat(-1, 1)), Err(Error::NegativeCutoff(_))));
    }

    #[test]
    fn gram_validation() {
        let not_pd = RatMatrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(1, 1)]]).unwrap();
        assert_eq!(Lattice::new(not_pd), Err(Error::NotPositiveDefinite));
        let not_sym = RatMatrix::from_rows(vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 1)]]).unwrap();
        assert_eq!(Lattice::new(not_sym), Err(Error::NotPositiveDefinite));
        let l = hex();
        assert_eq!(l.dual_gram().mul_checked(l.gram()).unwrap(), RatMatrix::identity(2));
    }

    #[test]
    fn fixed_vectors() {
        let l = Lattice::standard(4);
        let shells = l.shells_up_to(&rat(1, 1)).unwrap();
        let id = AffineIsometry::identity(l.gram().clone());
        assert_eq!(l.fixed_dual_vectors(&id, &shells[1]), shells[1].vectors);
        let g2 = AffineIsometry::new(
            IntMatrix::diagonal(&[int(-1), int(-1), int(1), int(1)]),
            vec![rat(0, 1); 4],
            l.gram().clone(),
        )
        .unwrap();
        let fixed = l.fixed_dual_vectors(&g2, &shells[1]);
        assert_eq!(fixed, vec![vec![0, 0, -1, 0], vec![0, 0, 0, -1], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]);
        let neg = AffineIsometry::new(-&IntMatrix::identity(4), vec![rat(0, 1); 4], l.gram().clone()).unwrap();
        assert_eq!(l.fixed_dual_vectors(&neg, &shells[0]).len(), 1);
        assert!(l.fixed_dual_vectors(&neg, &shells[1]).is_empty());
    }

    #[test]
    fn covolumes() {
        let l = Lattice::standard(4);
        let k = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]);
        assert_eq!(l.sublattice_covolume(&k).unwrap(), (rat(1, 1), 1.0));
        let diag = IntMatrix::from_i64(&[&[1], &[1]]);
        let (det, vol) = Lattice::standard(2).sublattice_covolume(&diag).unwrap();
        assert_eq!(det, rat(2, 1));
        assert!((vol - 2f64.sqrt()).abs() < 1e-15);
        let (det, vol) = hex().sublattice_covolume(&IntMatrix::from_i64(&[&[1], &[0]])).unwrap();
        assert_eq!((det, vol), (rat(1, 1), 1.0));
        let dep = IntMatrix::from_i64(&[&[1, 2], &[1, 2]]);
        assert_eq!(Lattice::standard(2).sublattice_covolume(&dep), Err(Error::DependentColumns));
        assert_eq!(hex().covolume(), Surd::sqrt(&rat(3, 4)));
    }
}
