//! Dense matrices over any [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::polyring::{Field, RatFunc, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Build from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in d.into_iter().enumerate() {
            m[(i, i)] = v;
        }
        m
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// Submatrix with the given row and column index lists (in that order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Leading `k×k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        let idx: Vec<usize> = (0..k).collect();
        self.submatrix(&idx, &idx)
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut m = self.to_rows();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return T::zero();
                };
                m.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = v.div(&prev);
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            d.neg()
        } else {
            d
        }
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for col in 0..n {
            let p = (col..n)
                .filter(|&i| !a[i][col].is_zero())
                .max_by(|&i, &j| {
                    a[i][col]
                        .pivot_weight()
                        .partial_cmp(&a[j][col].pivot_weight())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .ok_or(Error::Singular)?;
            a.swap(col, p);
            inv.swap(col, p);
            let pinv = a[col][col].try_inv().ok_or(Error::Singular)?;
            for j in 0..n {
                a[col][j] = a[col][j].mul(&pinv);
                inv[col][j] = inv[col][j].mul(&pinv);
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = a[col][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                    let t = inv[col][j].mul(&f);
                    inv[i][j] = inv[i][j].sub(&t);
                }
            }
        }
        Ok(Self::from_rows(inv))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.entries().all(|(i, j, v)| j <= i || v.is_zero())
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.entries().all(|(i, j, v)| j >= i || v.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, v)| i == j || v.is_zero())
    }

    pub fn is_unitriangular_upper(&self) -> bool {
        self.is_upper_triangular() && (0..self.rows).all(|i| self[(i, i)].is_one())
    }

    pub fn is_unitriangular_lower(&self) -> bool {
        self.is_lower_triangular() && (0..self.rows).all(|i| self[(i, i)].is_one())
    }
}

impl<F: Scalar> Matrix<RatFunc<F>> {
    /// Entrywise derivative.
    pub fn derivative(&self) -> Self {
        self.map(|x| x.derivative())
    }

    /// Constant matrix lifted to rational functions.
    pub fn from_scalars(m: &Matrix<F>) -> Self {
        m.map(|x| RatFunc::constant(x.clone()))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{q, Poly, Q};

    fn mq(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let m = mq(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), q(18, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        // Needs a pivot swap.
        let p = mq(&[&[0, 1], &[-1, 0]]);
        assert_eq!(p.det(), q(1, 1));
        assert!(mq(&[&[1, 2], &[2, 4]]).inverse().is_err());
        assert_eq!(mq(&[&[1, 2], &[2, 4]]).det(), q(0, 1));
    }

    #[test]
    fn rational_function_det() {
        let z = RatFunc::from_poly(Poly::<Q>::x());
        let one = RatFunc::<Q>::one();
        let m = Matrix::from_rows(vec![vec![z.clone(), one.clone()], vec![one, z.clone()]]);
        // z^2 - 1
        assert_eq!(m.det(), RatFunc::from_poly(Poly::from_i64(&[-1, 0, 1])));
    }
}
