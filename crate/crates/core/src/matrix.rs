//! Dense complex matrices, just large enough for gates, density matrices and
//! correction unitaries.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

// Only needed without std; with std linked the inherent f64 methods win.
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Real-valued 2x2 convenience constructor.
    pub fn real2(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![
                Complex64::new(a, 0.0),
                Complex64::new(b, 0.0),
                Complex64::new(c, 0.0),
                Complex64::new(d, 0.0),
            ],
        }
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                m[(i, j)] = x * y.conj();
            }
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product; `self` occupies the more significant index bits.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        match self.adjoint().matmul(self) {
            Ok(p) => p.max_abs_diff(&Self::identity(self.rows)) <= tol,
            Err(_) => false,
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// First entry in row-major order whose modulus exceeds `tol`.
    pub fn first_nonzero(&self, tol: f64) -> Option<Complex64> {
        self.data.iter().copied().find(|x| x.norm() > tol)
    }

    /// True when `self = e^{i theta} other` for some real theta.
    pub fn equals_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        // <other, self> / |<other, self>| is the best-fitting phase.
        let overlap: Complex64 = other
            .data
            .iter()
            .zip(&self.data)
            .map(|(a, b)| a.conj() * b)
            .sum();
        if overlap.norm() <= tol {
            return self.frobenius_norm() <= tol && other.frobenius_norm() <= tol;
        }
        let phase = overlap / overlap.norm();
        self.max_abs_diff(&other.scale(phase)) <= tol
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// The matrix is embedded as the real symmetric `[[Re, -Im], [Im, Re]]`,
    /// diagonalized with cyclic Jacobi rotations, and every doubled
    /// eigenvalue is reported once.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: self.cols,
            });
        }
        let n = self.rows;
        let dim = 2 * n;
        let mut a = vec![0.0f64; dim * dim];
        for r in 0..n {
            for c in 0..n {
                let z = self[(r, c)];
                a[r * dim + c] = z.re;
                a[(r + n) * dim + (c + n)] = z.re;
                a[r * dim + (c + n)] = -z.im;
                a[(r + n) * dim + c] = z.im;
            }
        }
        jacobi_eigenvalues(&mut a, dim);
        let mut eig: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
        eig.sort_by(|x, y| x.total_cmp(y));
        Ok(eig.into_iter().step_by(2).collect())
    }
}

fn jacobi_eigenvalues(a: &mut [f64], n: usize) {
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * scale {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    /// Panics on mismatched shapes; use [`CMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix shapes must agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_places_left_factor_in_high_bits() {
        let x = CMatrix::real2(0.0, 1.0, 1.0, 0.0);
        let id = CMatrix::identity(2);
        let xi = x.kron(&id);
        // X on the high qubit maps |00> to |10>.
        assert_eq!(xi[(2, 0)], c(1.0, 0.0));
        assert_eq!(xi[(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn eigenvalues_of_pauli_y_and_a_diagonal() {
        let y =
            CMatrix::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let eig = y.hermitian_eigenvalues().unwrap();
        assert!((eig[0] + 1.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);

        let d = CMatrix::real2(0.25, 0.0, 0.0, 0.75);
        let eig = d.hermitian_eigenvalues().unwrap();
        assert!((eig[0] - 0.25).abs() < 1e-12 && (eig[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_complex_hermitian_3x3() {
        // U diag(0.1, 0.3, 0.6) U^dagger for a complex unitary U.
        let h = 1.0 / 2f64.sqrt();
        let u = CMatrix::from_rows(&[
            [c(h, 0.0), c(0.0, h), c(0.0, 0.0)],
            [c(0.0, h), c(h, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        assert!(u.is_unitary(1e-12));
        let mut d = CMatrix::zeros(3, 3);
        d[(0, 0)] = c(0.1, 0.0);
        d[(1, 1)] = c(0.3, 0.0);
        d[(2, 2)] = c(0.6, 0.0);
        let m = &(&u * &d) * &u.adjoint();
        assert!(m.is_hermitian(1e-12));
        let eig = m.hermitian_eigenvalues().unwrap();
        for (e, want) in eig.iter().zip([0.1, 0.3, 0.6]) {
            assert!((e - want).abs() < 1e-12, "{eig:?}");
        }
    }

    #[test]
    fn phase_equality() {
        let x = CMatrix::real2(0.0, 1.0, 1.0, 0.0);
        assert!(x.scale(c(0.0, 1.0)).equals_up_to_phase(&x, 1e-12));
        assert!(!x.equals_up_to_phase(&CMatrix::identity(2), 1e-12));
    }
}
