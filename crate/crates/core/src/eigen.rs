//! Eigendecomposition of Hermitian matrices by cyclic Jacobi rotations.
//!
//! The matrices this crate meets are tiny (dimension 2 to 8), so a classic
//! Jacobi sweep is both fast enough and the most robust choice: every
//! rotation is unitary, eigenvectors come out orthonormal to machine
//! precision, and there is no shift heuristic to tune. Complex entries are
//! handled by factoring the pivot's phase into the rotation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::math;
use crate::Complex64;

const MAX_SWEEPS: usize = 64;

/// Result of [`eig_hermitian`]: eigenvalues ascending, eigenvectors as the
/// matching columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl Eigen {
    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Unitary matrix whose k-th column is the k-th eigenvector.
    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V diag(values) V†`, which reproduces the input up to roundoff.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled.set(i, j, scaled.get(i, j) * self.values[j]);
            }
        }
        &scaled * &self.vectors.adjoint()
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// The input must be Hermitian within `tol` (checked; the strictly
/// Hermitian part is then used so the iteration sees an exactly Hermitian
/// operator). Fails with [`Error::NoConvergence`] if the off-diagonal mass
/// does not fall below roundoff level within a fixed sweep budget, which
/// for these dimensions indicates non-finite input rather than a hard
/// spectrum.
pub fn eig_hermitian(m: &ComplexMatrix, tol: Tolerance) -> Result<Eigen> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let residual = m.hermiticity_residual()?;
    if !tol.accepts(residual) {
        return Err(Error::NotHermitian { residual });
    }

    let n = m.rows();
    let mut a = m.hermitized();
    let mut v = ComplexMatrix::identity(n);
    let threshold = f64::EPSILON * (n as f64) * a.max_abs();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(math::cabs(a.get(p, q)));
            }
        }
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, threshold);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }

    // Diagonal of a Hermitian matrix is real; sort ascending and permute
    // the eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, dst, v.get(i, src));
        }
    }
    Ok(Eigen { values, vectors })
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
///
/// With pivot `b = |b| e^{i beta}`, the plane rotation is the product of the
/// phase matrix diag(e^{i beta}, 1) and a real Jacobi rotation chosen by the
/// usual stable tangent formula, so the transformed pivot is exactly zero.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, threshold: f64) {
    let b = a.get(p, q);
    let absb = math::cabs(b);
    if absb <= threshold {
        a.set(p, q, Complex64::ZERO);
        a.set(q, p, Complex64::ZERO);
        return;
    }
    let phase = b / absb;
    let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * absb);
    let t = if tau >= 0.0 {
        1.0 / (tau + math::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / math::sqrt(1.0 + t * t);
    let s = t * c;

    // Columns p and q of A (rows follow by hermiticity).
    let n = a.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        let new_kp = akp * (phase * c) - akq * s;
        let new_kq = akp * (phase * s) + akq * c;
        a.set(k, p, new_kp);
        a.set(p, k, new_kp.conj());
        a.set(k, q, new_kq);
        a.set(q, k, new_kq.conj());
    }
    let app = a.get(p, p).re - t * absb;
    let aqq = a.get(q, q).re + t * absb;
    a.set(p, p, Complex64::new(app, 0.0));
    a.set(q, q, Complex64::new(aqq, 0.0));
    a.set(p, q, Complex64::ZERO);
    a.set(q, p, Complex64::ZERO);

    // Accumulate V <- V G.
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * (phase * c) - vkq * s);
        v.set(k, q, vkp * (phase * s) + vkq * c);
    }
}

/// Unique positive semidefinite square root `sqrt(M)` of a Hermitian PSD
/// matrix, via the spectral decomposition.
///
/// Eigenvalues within `eps` of zero are treated as exact zeros: negatives
/// beyond `-eps` are rejected, and the rest are snapped to 0 before the
/// root. The snap matters because sqrt has unbounded slope at 0, so a
/// roundoff-sized eigenvalue of order 1e-16 would otherwise surface as a
/// 1e-8 perturbation and spoil the projector fixed point `sqrt(P) = P`.
pub fn principal_sqrt(m: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m, tol)?;
    let min = eig.values().first().copied().unwrap_or(0.0);
    if min < -tol.eps() {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let n = eig.values().len();
    let mut scaled = eig.vectors().clone();
    for j in 0..n {
        let value = eig.values()[j];
        let root = if value <= tol.eps() {
            0.0
        } else {
            math::sqrt(value)
        };
        for i in 0..n {
            scaled.set(i, j, scaled.get(i, j) * root);
        }
    }
    let sqrt = &scaled * &eig.vectors().adjoint();
    Ok(sqrt.hermitized())
}
