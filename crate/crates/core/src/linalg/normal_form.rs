//! Hermite and Smith normal forms over the integers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ext_gcd, IntMatrix};

/// Replaces rows `(p, r)` of `m` by `(s·p + t·r, -b/g·p + a/g·r)`, a unimodular step.
fn combine_rows(m: &mut IntMatrix, p: usize, r: usize, coeffs: &[BigInt; 4]) {
    let [s, t, u, v] = coeffs;
    for j in 0..m.cols() {
        let x = m[(p, j)].clone();
        let y = m[(r, j)].clone();
        m[(p, j)] = s * &x + t * &y;
        m[(r, j)] = u * &x + v * &y;
    }
}

fn combine_cols(m: &mut IntMatrix, p: usize, c: usize, coeffs: &[BigInt; 4]) {
    let [s, t, u, v] = coeffs;
    for i in 0..m.rows() {
        let x = m[(i, p)].clone();
        let y = m[(i, c)].clone();
        m[(i, p)] = s * &x + t * &y;
        m[(i, c)] = u * &x + v * &y;
    }
}

/// Coefficients of the 2×2 unimodular transform that maps `(a, b)` to `(gcd, 0)`.
fn gcd_step(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    // keep the pivot when it already divides b; a general Bezout pair could
    // swap the two lines back and forth forever
    if !a.is_zero() && b.is_multiple_of(a) {
        return [BigInt::one(), BigInt::zero(), -(b / a), BigInt::one()];
    }
    let (g, s, t) = ext_gcd(a, b);
    [s, t, -(b / &g), a / &g]
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for j in 0..m.cols() {
        let v = &m[(target, j)] + factor * &m[(source, j)];
        m[(target, j)] = v;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -&m[(r, j)];
        m[(r, j)] = v;
    }
}

fn negate_col(m: &mut IntMatrix, c: usize) {
    for i in 0..m.rows() {
        let v = -&m[(i, c)];
        m[(i, c)] = v;
    }
}

/// Row Hermite normal form: returns `(H, U)` with `U·A = H`, `U` unimodular.
///
/// `H` is in row echelon form with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, and zero rows last.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pr = 0;
    for col in 0..n {
        if pr == m {
            break;
        }
        for r in pr + 1..m {
            if h[(r, col)].is_zero() {
                continue;
            }
            let c = gcd_step(&h[(pr, col)], &h[(r, col)]);
            combine_rows(&mut h, pr, r, &c);
            combine_rows(&mut u, pr, r, &c);
        }
        if h[(pr, col)].is_zero() {
            continue;
        }
        if h[(pr, col)].is_negative() {
            negate_row(&mut h, pr);
            negate_row(&mut u, pr);
        }
        let pivot = h[(pr, col)].clone();
        for r in 0..pr {
            let q = h[(r, col)].div_floor(&pivot);
            if !q.is_zero() {
                add_row_multiple(&mut h, r, pr, &-&q);
                add_row_multiple(&mut u, r, pr, &-&q);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// Smith decomposition `U·A·V = D`.
#[derive(Clone, Debug, PartialEq)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero invariant factors `d₁ | d₂ | …`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with unimodular transforms on both sides.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for r in t + 1..m {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let c = gcd_step(&d[(t, t)], &d[(r, t)]);
                combine_rows(&mut d, t, r, &c);
                combine_rows(&mut u, t, r, &c);
                changed = true;
            }
            for c in t + 1..n {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let k = gcd_step(&d[(t, t)], &d[(t, c)]);
                combine_cols(&mut d, t, c, &k);
                combine_cols(&mut v, t, c, &k);
                changed = true;
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_col(&mut d, t);
            negate_col(&mut v, t);
        }
    }
    Smith { d, u, v }
}

/// Columns form a Z-basis of `{n ∈ Zᵈ : A·n = 0}`; zero columns when the kernel is trivial.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let d = a.cols();
    let (h, u) = hermite_normal_form(&a.transpose());
    let basis: Vec<Vec<BigInt>> = (0..d)
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    IntMatrix::from_columns(d, &basis).expect("kernel vectors have length d")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{determinant, int};
    use alloc::vec;

    fn is_unimodular(u: &IntMatrix) -> bool {
        let det = determinant(u).unwrap();
        det == int(1) || det == int(-1)
    }

    fn is_row_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for i in 0..h.rows() {
            let lead = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
            match lead {
                None => seen_zero_row = true,
                Some(j) => {
                    if seen_zero_row || last_pivot.is_some_and(|p| j <= p) || h[(i, j)] <= int(0) {
                        return false;
                    }
                    if (0..i).any(|r| h[(r, j)] < int(0) || h[(r, j)] >= h[(i, j)]) {
                        return false;
                    }
                    last_pivot = Some(j);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity_and_diagonal() {
        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id), (id.clone(), id.clone()));
        let two = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(hermite_normal_form(&two).0, two);
    }

    #[test]
    fn hnf_preserves_solvability() {
        // H·x = b solvable over Z exactly when A·x = U⁻¹b is, so compare via brute force
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(u.mul_checked(&a).unwrap(), h);
        assert!(is_unimodular(&u));
        assert!(is_row_hnf(&h));
        for b0 in -4..=4i64 {
            for b1 in -4..=4i64 {
                let b = vec![int(b0), int(b1)];
                let ub = u.mul_vec(&b);
                let mut solvable_a = false;
                let mut solvable_h = false;
                for x0 in -10..=10i64 {
                    for x1 in -10..=10i64 {
                        let x = vec![int(x0), int(x1)];
                        solvable_a |= a.mul_vec(&x) == b;
                        solvable_h |= h.mul_vec(&x) == ub;
                    }
                }
                assert_eq!(solvable_a, solvable_h, "rhs ({b0},{b1})");
            }
        }
    }

    #[test]
    fn snf_examples() {
        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert!(s.d.is_zero());
        assert!(s.invariant_factors().is_empty());

        let id = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&id).d, id);

        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul_checked(&a).unwrap().mul_checked(&s.v).unwrap(), s.d);
        // gcd of entries is 2, |det| = 8, so factors are 2 and 8/2
        assert_eq!(s.invariant_factors(), vec![int(2), int(4)]);
    }

    #[test]
    fn kernel_examples() {
        let zero = IntMatrix::zeros(3, 3);
        assert_eq!(integer_kernel(&zero).cols(), 3);

        let a = IntMatrix::from_i64(&[&[-2, 0], &[0, 0]]);
        let k = integer_kernel(&a);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![int(0), int(1)]);

        assert_eq!(integer_kernel(&IntMatrix::identity(2)).cols(), 0);
    }

    #[test]
    fn kernel_of_constructed_rank_two_matrix() {
        // A = B·P with B of rank 2 (4×2) and P a 2×4 matrix of rank 2
        let b = IntMatrix::from_i64(&[&[1, 0], &[2, 1], &[0, 3], &[1, 1]]);
        let p = IntMatrix::from_i64(&[&[1, 2, 0, -1], &[0, 1, 1, 3]]);
        let a = b.mul_checked(&p).unwrap();
        let k = integer_kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul_checked(&k).unwrap().is_zero());
    }
}
