//! Dense complex matrices sized for few-qubit work.
//!
//! Everything here is row-major `Vec<Complex64>` storage with plain loops;
//! the spaces involved are tiny (dimension 2 to 8), so cache games and
//! blocking would be noise. Arithmetic panics on shape mismatch, while
//! fallible semantic checks (hermiticity, realness of traces) return
//! [`Error`](crate::Error) values.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::Complex64;

/// Imaginary parts below this are discarded when a trace is known to be
/// real for structural reasons; anything larger is reported as an error.
pub const REAL_TRACE_EPS: f64 = 1e-12;

/// Absolute tolerance used when validating operators and certificates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    /// Default validation tolerance.
    pub const DEFAULT_EPS: f64 = 1e-10;

    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::InvalidTolerance);
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// True when a residual is acceptable at this tolerance.
    pub fn accepts(&self, residual: f64) -> bool {
        residual.is_finite() && residual <= self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps: Self::DEFAULT_EPS,
        }
    }
}

/// Row-major dense matrix over `Complex64`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: Vec<Complex64>,
    rows: usize,
    cols: usize,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data, rejecting shape mismatches and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                len: data.len(),
                rows,
                cols,
            });
        }
        let m = Self { data, rows, cols };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: vec![Complex64::ZERO; rows * cols],
            rows,
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Builds from nested row slices; rows must all have the same length.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::ShapeMismatch {
                    len: row.len(),
                    rows: 1,
                    cols: ncols,
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(nrows, ncols, data)
    }

    /// Real-entry convenience used heavily in tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::ShapeMismatch {
                    len: row.len(),
                    rows: 1,
                    cols: ncols,
                });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(nrows, ncols, data)
    }

    /// Rank-one matrix `u v†`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                m.set(i, j, ui * vj.conj());
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// # Panics
    /// Panics when the index is out of bounds.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i * self.cols + j]
    }

    /// # Panics
    /// Panics when the index is out of bounds.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        assert!(j < self.cols, "column out of bounds");
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Matrix product.
    ///
    /// # Panics
    /// Panics when the inner dimensions disagree.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert!(
            self.cols == rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + aik * rhs.get(k, j));
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    ///
    /// # Panics
    /// Panics when the vector length does not match the column count.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert!(v.len() == self.cols, "apply shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Self {
        let factor = factor.into();
        let data = self.data.iter().map(|&z| z * factor).collect();
        Self {
            data,
            rows: self.rows,
            cols: self.cols,
        }
    }

    /// Complex trace.
    ///
    /// # Panics
    /// Panics on non-square matrices.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// `(M + M†) / 2`, the Hermitian part.
    ///
    /// # Panics
    /// Panics on non-square matrices.
    pub fn hermitized(&self) -> Self {
        assert!(self.is_square(), "hermitized part of a non-square matrix");
        let adj = self.adjoint();
        (self + &adj).scale(0.5)
    }

    /// Entrywise max modulus of `M - M†`; zero for exactly Hermitian input.
    pub fn hermiticity_residual(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.get(i, j) - self.get(j, i).conj();
                worst = worst.max(math::cabs(d));
            }
        }
        Ok(worst)
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> Result<bool> {
        Ok(tol.accepts(self.hermiticity_residual()?))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .fold(0.0f64, |acc, &z| acc.max(math::cabs(z)))
    }

    /// Largest entrywise difference modulus.
    ///
    /// # Panics
    /// Panics when the shapes disagree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "max_abs_diff shape mismatch"
        );
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0f64, |acc, (&a, &b)| acc.max(math::cabs(a - b)))
    }
}

/// `tr(a b)` for operators that make the product trace real (for example a
/// Hermitian observable against a density matrix). The product trace is
/// formed directly from entries without materializing `a b`. A residual
/// imaginary part above [`REAL_TRACE_EPS`] is reported instead of silently
/// dropped.
pub fn real_trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let mut t = Complex64::ZERO;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            t += a.get(i, j) * b.get(j, i);
        }
    }
    if t.im.abs() > REAL_TRACE_EPS * (1.0 + t.re.abs()) {
        return Err(Error::NonRealTrace { imaginary: t.im });
    }
    Ok(t.re)
}

impl core::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// # Panics
    /// Panics when the shapes disagree.
    fn add(self, rhs: Self) -> ComplexMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "add shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(rhs.data.iter())
            .map(|(&a, &b)| a + b)
            .collect();
        ComplexMatrix {
            data,
            rows: self.rows,
            cols: self.cols,
        }
    }
}

impl core::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// # Panics
    /// Panics when the shapes disagree.
    fn sub(self, rhs: Self) -> ComplexMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "sub shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(rhs.data.iter())
            .map(|(&a, &b)| a - b)
            .collect();
        ComplexMatrix {
            data,
            rows: self.rows,
            cols: self.cols,
        }
    }
}

impl core::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs)
    }
}
