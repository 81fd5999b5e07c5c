//! Dense square matrices stored row-major, and a Cholesky factorization.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged input and non-finite values.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::NotSquare {
                    expected: dim,
                    row: i,
                    found: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
                data.push(x);
            }
        }
        Ok(Self { dim, data })
    }

    /// Row-major constructor; panics if `data.len() != dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim, "row-major buffer has wrong length");
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        let n = self.dim;
        let mut s = self.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                s.data[i * n + j] = avg;
                s.data[j * n + i] = avg;
            }
        }
        s
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: f64, other: &Matrix) {
        debug_assert_eq!(self.dim, other.dim);
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += factor * y;
        }
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += shift;
        }
        m
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(alpha: f64, x: &Matrix, beta: f64, y: &Matrix) -> Self {
        debug_assert_eq!(x.dim, y.dim);
        Self {
            dim: x.dim,
            data: x
                .data
                .iter()
                .zip(&y.data)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        }
    }

    pub fn matmul(&self, rhs: &Matrix) -> Self {
        let n = self.dim;
        debug_assert_eq!(n, rhs.dim);
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `selfᵀ * rhs` without forming the transpose.
    pub fn tr_matmul(&self, rhs: &Matrix) -> Self {
        let n = self.dim;
        debug_assert_eq!(n, rhs.dim);
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            let lrow = &self.data[k * n..(k + 1) * n];
            let rrow = &rhs.data[k * n..(k + 1) * n];
            for (i, &a) in lrow.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = &mut out[i * n..(i + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Largest `|m_ij − m_ji|` relative to the largest `|m_ij|`.
    pub fn relative_asymmetry(&self) -> f64 {
        let n = self.dim;
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i]).abs());
            }
        }
        worst / scale
    }

    pub(crate) fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub(crate) fn set_column(&mut self, j: usize, col: &[f64]) {
        for (i, &x) in col.iter().enumerate() {
            self[(i, j)] = x;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::lin_comb(1.0, self, 1.0, rhs)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::lin_comb(1.0, self, -1.0, rhs)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

/// Lower-triangular factor `L` with `M = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    pub fn factor(m: &Matrix) -> Result<Self> {
        let n = m.dim();
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let mut d = m[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::FactorizationFailure { index: j, pivot: d });
            }
            let ljj = libm::sqrt(d);
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let mut s = m[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor_l(&self) -> &Matrix {
        &self.l
    }

    /// Solves `M X = rhs` for all columns at once.
    pub fn solve(&self, rhs: &Matrix) -> Matrix {
        let n = self.l.dim;
        debug_assert_eq!(n, rhs.dim);
        let l = &self.l.data;
        let mut x = rhs.clone();
        // forward: L Y = rhs, row by row
        for i in 0..n {
            let (done, rest) = x.data.split_at_mut(i * n);
            let row = &mut rest[..n];
            for (k, &lik) in l[i * n..i * n + i].iter().enumerate() {
                if lik != 0.0 {
                    for (v, &y) in row.iter_mut().zip(&done[k * n..(k + 1) * n]) {
                        *v -= lik * y;
                    }
                }
            }
            let d = l[i * n + i];
            row.iter_mut().for_each(|v| *v /= d);
        }
        // backward: Lᵀ X = Y
        for i in (0..n).rev() {
            let (head, done) = x.data.split_at_mut((i + 1) * n);
            let row = &mut head[i * n..];
            for k in (i + 1)..n {
                let lki = l[k * n + i];
                if lki != 0.0 {
                    let off = (k - i - 1) * n;
                    for (v, &y) in row.iter_mut().zip(&done[off..off + n]) {
                        *v -= lki * y;
                    }
                }
            }
            let d = l[i * n + i];
            row.iter_mut().for_each(|v| *v /= d);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_rows_rejects_ragged_and_nan() {
        assert!(matches!(
            Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            Matrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]),
            Err(Error::NonFiniteEntry { row: 0, col: 1 })
        ));
        assert_eq!(Matrix::from_rows::<Vec<f64>>(&[]), Err(Error::Empty));
    }

    #[test]
    fn matmul_and_transpose_products_agree() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[[0.5, -1.0], [2.0, 0.25]]).unwrap();
        assert_eq!(a.tr_matmul(&b), a.transpose().matmul(&b));
        assert_eq!(a.matmul(&b).as_slice(), &[4.5, -0.5, 9.5, -2.0]);
    }

    #[test]
    fn cholesky_solve_recovers_rhs() {
        let m = Matrix::from_rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]]).unwrap();
        let rhs = Matrix::from_rows(&[[1.0, 0.0, 2.0], [0.0, 1.0, -1.0], [3.0, 0.5, 0.0]]).unwrap();
        let x = Cholesky::factor(&m).unwrap().solve(&rhs);
        let back = m.matmul(&x);
        assert!((&back - &rhs).frobenius_norm() < 1e-14);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = Matrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(
            Cholesky::factor(&m),
            Err(Error::FactorizationFailure { index: 1, .. })
        ));
    }
}
