use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: alloc::vec![value; rows * cols] }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: core::ops::Range<usize>) -> Self {
        let cols = range.len();
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            for j in range.clone() {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length".into()));
        }
        let mut data = Vec::with_capacity(rows * columns.len());
        for i in 0..rows {
            for c in columns {
                data.push(c[i].clone());
            }
        }
        Ok(Matrix { rows, cols: columns.len(), data })
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: idx.len(), cols: idx.len(), data }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self, zero: T) -> Self {
        let n = self.rows + other.rows;
        let m = self.cols + other.cols;
        let mut out = Matrix::filled(n, m, zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    pub fn mul_checked(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} times {}x{}",
                self.rows,
                self.cols,
                rhs.rows,
                rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.data[i * rhs.cols + j].clone()
                        + a.clone() * rhs.data[k * rhs.cols + j].clone();
                    out.data[i * rhs.cols + j] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }
}

impl<T: Clone + Sub<Output = T>> Matrix<T> {
    pub fn sub_checked(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        })
    }
}

impl<T: Clone + Neg<Output = T>> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Matrix::from_rows(v).expect("rectangular literal")
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn to_i64(&self) -> Option<Matrix<i64>> {
        use num_traits::ToPrimitive;
        let data: Option<Vec<i64>> = self.data.iter().map(ToPrimitive::to_i64).collect();
        data.map(|data| Matrix { rows: self.rows, cols: self.cols, data })
    }
}

impl RatMatrix {
    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(Error::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let x = &a[(r, j)] - &f * &a[(col, j)];
                    a[(r, j)] = x;
                    let y = &inv[(r, j)] - &f * &inv[(col, j)];
                    inv[(r, j)] = y;
                }
            }
        }
        Ok(inv)
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Ok(BigRational::zero());
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &p;
                for j in col..n {
                    let x = &a[(r, j)] - &f * &a[(col, j)];
                    a[(r, j)] = x;
                }
            }
        }
        Ok(det)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul_checked(&b).unwrap(), IntMatrix::from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), IntMatrix::from_i64(&[&[1, 3], &[2, 4]]));
        assert!(a.mul_checked(&IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn rational_inverse_and_determinant() {
        let g = RatMatrix::from_rows(alloc::vec![
            alloc::vec![rat(1, 1), rat(1, 2)],
            alloc::vec![rat(1, 2), rat(1, 1)],
        ])
        .unwrap();
        let inv = g.inverse().unwrap();
        assert_eq!(g.mul_checked(&inv).unwrap(), RatMatrix::identity(2));
        assert_eq!(inv[(0, 0)], rat(4, 3));
        assert_eq!(g.determinant().unwrap(), rat(3, 4));
        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).to_rational();
        assert_eq!(singular.inverse(), Err(Error::Singular));
    }

    #[test]
    fn direct_sum_layout() {
        let a = IntMatrix::from_i64(&[&[2]]);
        let b = IntMatrix::identity(2);
        let s = a.direct_sum(&b, BigInt::zero());
        assert_eq!(s, IntMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }
}
