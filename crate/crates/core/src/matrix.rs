//! Dense square matrices and the monomial (permutation times diagonal) factorization.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A dense, row-major `n x n` real matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from its rows. Fails unless the rows form a non-empty square array.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, cols: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Permutation matrix with `M e_i = e_{images[i]}`.
    pub fn permutation(images: &[usize]) -> Self {
        let n = images.len();
        let mut m = Matrix::zeros(n);
        for (col, &row) in images.iter().enumerate() {
            m.data[row * n + col] = 1.0;
        }
        m
    }

    /// Counter-clockwise planar rotation.
    pub fn rotation_2d(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Matrix { n: 2, data: vec![c, -s, s, c] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.n + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut t = Matrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                t.data[c * n + r] = self.data[r * n + c];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "vector length does not match matrix dimension");
        self.rows().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Entrywise map, e.g. the absolute-value homomorphism on monomial matrices.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Max-abs entrywise difference. Returns infinity for mismatched dimensions.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            let p = a[pivot * n + k];
            if p == 0.0 {
                return 0.0;
            }
            if pivot != k {
                for c in 0..n {
                    a.swap(k * n + c, pivot * n + c);
                }
                det = -det;
            }
            det *= p;
            for r in (k + 1)..n {
                let factor = a[r * n + k] / p;
                if factor != 0.0 {
                    for c in k..n {
                        a[r * n + c] -= factor * a[k * n + c];
                    }
                }
            }
        }
        det
    }

    pub fn is_invertible(&self, tol: f64) -> bool {
        self.det().abs() > tol
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// A monomial matrix `M` stored as `M e_i = coeffs[i] * e_{perm[i]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialForm {
    pub perm: Vec<usize>,
    pub coeffs: Vec<f64>,
}

impl MonomialForm {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n);
        for (col, (&row, &a)) in self.perm.iter().zip(&self.coeffs).enumerate() {
            m.set(row, col, a);
        }
        m
    }

    /// Cycles of the permutation part, each starting at its least index, ordered by that index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.perm[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_signed_permutation(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|a| (a.abs() - 1.0).abs() <= tol)
    }

    pub fn is_permutation(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|a| (a - 1.0).abs() <= tol)
    }
}

/// Factors `m` as a permutation with nonzero column coefficients, or returns `None`
/// when some row or column does not carry exactly one entry above `tol` in magnitude.
pub fn monomial_decompose(m: &Matrix, tol: f64) -> Option<MonomialForm> {
    let n = m.dim();
    let mut perm = vec![usize::MAX; n];
    let mut coeffs = vec![0.0; n];
    let mut row_hit = vec![false; n];
    for col in 0..n {
        for row in 0..n {
            let v = m.get(row, col);
            if v.abs() > tol {
                if perm[col] != usize::MAX || row_hit[row] {
                    return None;
                }
                perm[col] = row;
                coeffs[col] = v;
                row_hit[row] = true;
            }
        }
        if perm[col] == usize::MAX {
            return None;
        }
    }
    Some(MonomialForm { perm, coeffs })
}

/// `M 1 = 1`: every row sums to one.
pub fn is_unit_row(m: &Matrix, tol: f64) -> bool {
    m.rows().all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= tol)
}

/// Matrices used as running examples throughout the crate's docs and tests.
pub mod examples {
    use super::Matrix;

    /// The 3-cycle permutation matrix `e1 -> e2 -> e3 -> e1`.
    pub fn p3() -> Matrix {
        Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap()
    }

    /// A signed 3-cycle.
    pub fn s3() -> Matrix {
        Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, -1.0, 0.0]]).unwrap()
    }

    /// A 3-cycle with coefficients `(2, -1/2, 2)`; its cube is `-2 I`.
    pub fn m3() -> Matrix {
        Matrix::from_rows(&[[0.0, -0.5, 0.0], [0.0, 0.0, 2.0], [2.0, 0.0, 0.0]]).unwrap()
    }

    /// The non-trivial element of the two-point representation of Z2 scaled by `diag(1, 2)`.
    pub fn z2_scaled() -> Matrix {
        Matrix::from_rows(&[[0.0, 2.0], [0.5, 0.0]]).unwrap()
    }

    pub fn swap2() -> Matrix {
        Matrix::permutation(&[1, 0])
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<f64> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-9;

    #[test]
    fn decompose_p() {
        let f = monomial_decompose(&p3(), TOL).unwrap();
        assert_eq!(f.perm, vec![1, 2, 0]);
        assert_eq!(f.coeffs, vec![1.0, 1.0, 1.0]);
        assert_eq!(f.cycles(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn decompose_identity() {
        let f = monomial_decompose(&Matrix::identity(3), TOL).unwrap();
        assert_eq!(f.perm, vec![0, 1, 2]);
        assert_eq!(f.coeffs, vec![1.0; 3]);
    }

    #[test]
    fn shear_is_not_monomial() {
        let m = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(monomial_decompose(&m, TOL).is_none());
    }

    #[test]
    fn decompose_m() {
        let f = monomial_decompose(&m3(), TOL).unwrap();
        // e1 -> 2 e3, e2 -> -1/2 e1, e3 -> 2 e2
        assert_eq!(f.perm, vec![2, 0, 1]);
        assert_eq!(f.coeffs, vec![2.0, -0.5, 2.0]);
        assert_eq!(f.cycles().len(), 1);
        assert!(f.to_dense().approx_eq(&m3(), 0.0));
    }

    #[test]
    fn m_cubed_is_minus_two_identity() {
        let m = m3();
        let cube = &(&m * &m) * &m;
        assert!(cube.approx_eq(&Matrix::from_diagonal(&[-2.0; 3]), TOL));
    }

    #[test]
    fn zero_column_is_not_monomial() {
        let m = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1e-12]]).unwrap();
        assert!(monomial_decompose(&m, TOL).is_none());
    }

    #[test]
    fn unit_row_cases() {
        assert!(is_unit_row(&p3(), TOL));
        assert!(!is_unit_row(&Matrix::rotation_2d(std::f64::consts::FRAC_PI_3), TOL));
        let m = Matrix::from_rows(&[[0.5, 0.5], [0.25, 0.75]]).unwrap();
        assert!(is_unit_row(&m, TOL));
    }

    #[test]
    fn rotation_row_sum() {
        let r = Matrix::rotation_2d(std::f64::consts::FRAC_PI_3);
        let s: f64 = r.row(0).iter().sum();
        assert_abs_diff_eq!(s, 0.5 - 3f64.sqrt() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn determinant() {
        assert_abs_diff_eq!(m3().det(), -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap().det(), 0.0);
        assert_abs_diff_eq!(s3().det(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 0.0], vec![1.0]];
        assert!(matches!(Matrix::from_rows(&rows), Err(Error::NotSquare { .. })));
    }
}
