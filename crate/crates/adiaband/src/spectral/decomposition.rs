//! Instantaneous eigenstructure: decomposition and degeneracy clustering.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermiticity_defect, spectral_norm, CMatrix};
use num_complex::Complex64 as C64;

/// Eigenvalues ascending, orthonormal eigenvector columns, and the grouping
/// of indices into degeneracy clusters.
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
    /// Contiguous index ranges, each one degeneracy cluster.
    pub clusters: Vec<std::ops::Range<usize>>,
}

/// Default clustering tolerance: 1e-8 of the spectral diameter.
pub fn default_degeneracy_tol(eigenvalues: &[f64]) -> f64 {
    let lo = eigenvalues.first().copied().unwrap_or(0.0);
    let hi = eigenvalues.last().copied().unwrap_or(0.0);
    1e-8 * (hi - lo).abs().max(1e-300)
}

/// Decompose a Hermitian matrix; eigenvalues ascending, clusters grouped by
/// `degeneracy_tol` (chain rule: a gap larger than the tolerance starts a new
/// cluster). Pass `degeneracy_tol <= 0` for the default.
pub fn decompose(h: &CMatrix, degeneracy_tol: f64) -> Result<SpectralDecomposition> {
    let scale = spectral_norm(h).max(1e-300);
    let defect = hermiticity_defect(h);
    if defect > 1e-12 * scale {
        return Err(Error::NonHermitian { defect: defect / scale, tol: 1e-12 });
    }
    let eig = hermitian_eigen(h);
    if eig.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Decomposition("non-finite eigenvalue".into()));
    }
    let tol = if degeneracy_tol > 0.0 { degeneracy_tol } else { default_degeneracy_tol(&eig.values) };
    let mut clusters = Vec::new();
    let n = eig.values.len();
    let mut start = 0usize;
    for i in 1..n {
        if eig.values[i] - eig.values[i - 1] > tol {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters.push(start..n);
    Ok(SpectralDecomposition { eigenvalues: eig.values, eigenvectors: eig.vectors, clusters })
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Sum of lambda_k v_k v_k^dagger over an index range.
    pub fn projector_for(&self, range: std::ops::Range<usize>) -> CMatrix {
        let n = self.dim();
        let mut p = CMatrix::zeros(n, n);
        for k in range {
            let v = self.eigenvectors.column(k);
            p += v * v.adjoint();
        }
        p
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut h = CMatrix::zeros(n, n);
        for k in 0..n {
            let v = self.eigenvectors.column(k);
            h += v * v.adjoint() * C64::new(self.eigenvalues[k], 0.0);
        }
        h
    }
}
