//! Small dense complex-matrix helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Hermitian part (A + A†)/2.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Frobenius distance to the Hermitian part.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm() * 0.5
}

/// Spectral norm by power iteration on A†A with a deterministic start vector.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    // Deterministic, unlikely to be orthogonal to the top singular vector.
    let mut v = CVector::from_fn(cols, |i, _| C64::new(1.0 + 0.37 * (i as f64).sin(), 0.13 * (i as f64 + 1.0).cos()));
    let nv = v.norm();
    if nv == 0.0 {
        return 0.0;
    }
    v /= C64::new(nv, 0.0);
    let mut sigma = 0.0_f64;
    for _ in 0..200 {
        let w = a * &v;
        let mut u = a.adjoint() * w;
        let nu = u.norm();
        if nu == 0.0 {
            return 0.0;
        }
        u /= C64::new(nu, 0.0);
        let s = (a * &u).norm();
        if (s - sigma).abs() <= 1e-12 * s.max(1e-300) {
            return s;
        }
        sigma = s;
        v = u;
    }
    sigma
}

/// Unitary factor of the polar decomposition, via SVD.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    u * v_t
}

/// Result of an ascending Hermitian eigendecomposition.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, same ordering as `values`.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized first; callers are expected to have validated
/// Hermiticity at whatever tolerance their contract demands.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let h = hermitian_part(a);
    let se = h.symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

/// Uniform-grid Catmull-Rom interpolation of a matrix-valued trajectory.
///
/// One-sided cubic stencils are used in the first and last interval. `ts`
/// must be uniform and strictly increasing; values are clamped to the grid
/// range.
pub fn interp_matrix_trajectory(ts: &[f64], ms: &[CMatrix], t: f64) -> CMatrix {
    let n = ts.len();
    assert!(n >= 2 && ms.len() == n);
    let dt = ts[1] - ts[0];
    let x = ((t - ts[0]) / dt).clamp(0.0, (n - 1) as f64);
    let k = (x.floor() as usize).min(n - 2);
    let s = x - k as f64;
    let (i0, i1) = (k, k + 1);
    if n == 2 {
        return &ms[0] * C64::new(1.0 - s, 0.0) + &ms[1] * C64::new(s, 0.0);
    }
    // Hermite cubic with 4th-order tangent estimates in the interior
    // (2nd-order one-sided stencils near the ends).
    let d0 = index_tangent(ms, i0);
    let d1 = index_tangent(ms, i1);
    let h00 = 2.0 * s * s * s - 3.0 * s * s + 1.0;
    let h10 = s * s * s - 2.0 * s * s + s;
    let h01 = -2.0 * s * s * s + 3.0 * s * s;
    let h11 = s * s * s - s * s;
    &ms[i0] * C64::new(h00, 0.0)
        + d0 * C64::new(h10, 0.0)
        + &ms[i1] * C64::new(h01, 0.0)
        + d1 * C64::new(h11, 0.0)
}

/// d(ms)/d(index) at sample j: 4th-order central stencil in the interior,
/// 5-point one-sided stencils near the ends (2nd-order fallback when the
/// trajectory is too short).
pub fn index_tangent(ms: &[CMatrix], j: usize) -> CMatrix {
    let n = ms.len();
    let comb = |idx: &[usize], w: &[f64]| -> CMatrix {
        let mut acc = CMatrix::zeros(ms[0].nrows(), ms[0].ncols());
        for (&i, &c) in idx.iter().zip(w) {
            acc += &ms[i] * C64::new(c, 0.0);
        }
        acc
    };
    if j >= 2 && j + 2 <= n - 1 {
        comb(&[j - 2, j - 1, j + 1, j + 2], &[1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0])
    } else if n >= 5 && j == 0 {
        comb(&[0, 1, 2, 3, 4], &[-25.0 / 12.0, 4.0, -3.0, 16.0 / 12.0, -0.25])
    } else if n >= 5 && j == 1 {
        comb(&[0, 1, 2, 3, 4], &[-0.25, -10.0 / 12.0, 1.5, -0.5, 1.0 / 12.0])
    } else if n >= 5 && j == n - 2 {
        comb(&[n - 1, n - 2, n - 3, n - 4, n - 5], &[0.25, 10.0 / 12.0, -1.5, 0.5, -1.0 / 12.0])
    } else if n >= 5 && j == n - 1 {
        comb(&[n - 1, n - 2, n - 3, n - 4, n - 5], &[25.0 / 12.0, -4.0, 3.0, -16.0 / 12.0, 0.25])
    } else if j == 0 {
        comb(&[0, 1, 2], &[-1.5, 2.0, -0.5])
    } else if j == n - 1 {
        comb(&[n - 1, n - 2, n - 3], &[1.5, -2.0, 0.5])
    } else {
        comb(&[j - 1, j + 1], &[-0.5, 0.5])
    }
}

/// Scalar variant of [`index_tangent`].
pub fn scalar_index_tangent(ys: &[f64], j: usize) -> f64 {
    let n = ys.len();
    let comb = |idx: &[usize], w: &[f64]| -> f64 { idx.iter().zip(w).map(|(&i, &c)| ys[i] * c).sum() };
    if j >= 2 && j + 2 <= n - 1 {
        comb(&[j - 2, j - 1, j + 1, j + 2], &[1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0])
    } else if n >= 5 && j == 0 {
        comb(&[0, 1, 2, 3, 4], &[-25.0 / 12.0, 4.0, -3.0, 16.0 / 12.0, -0.25])
    } else if n >= 5 && j == 1 {
        comb(&[0, 1, 2, 3, 4], &[-0.25, -10.0 / 12.0, 1.5, -0.5, 1.0 / 12.0])
    } else if n >= 5 && j == n - 2 {
        comb(&[n - 1, n - 2, n - 3, n - 4, n - 5], &[0.25, 10.0 / 12.0, -1.5, 0.5, -1.0 / 12.0])
    } else if n >= 5 && j == n - 1 {
        comb(&[n - 1, n - 2, n - 3, n - 4, n - 5], &[25.0 / 12.0, -4.0, 3.0, -16.0 / 12.0, 0.25])
    } else if j == 0 {
        comb(&[0, 1, 2], &[-1.5, 2.0, -0.5])
    } else if j == n - 1 {
        comb(&[n - 1, n - 2, n - 3], &[1.5, -2.0, 0.5])
    } else {
        comb(&[j - 1, j + 1], &[-0.5, 0.5])
    }
}

/// Cumulative integral of a sampled scalar trajectory from ts[0] to t, exact
/// for the piecewise Hermite-cubic interpolant (4th-order tangents).
pub struct CumulativeIntegral {
    ts: Vec<f64>,
    ys: Vec<f64>,
    tangents: Vec<f64>,
    cumulative: Vec<f64>,
}

impl CumulativeIntegral {
    pub fn new(ts: &[f64], ys: &[f64]) -> Self {
        let n = ts.len();
        assert!(n >= 2 && ys.len() == n);
        let dt = ts[1] - ts[0];
        let tangents: Vec<f64> = (0..n).map(|j| scalar_index_tangent(ys, j)).collect();
        let mut cumulative = vec![0.0; n];
        for k in 1..n {
            // Integral of the Hermite cubic over one interval.
            let seg = dt * (0.5 * (ys[k - 1] + ys[k]) + (tangents[k - 1] - tangents[k]) / 12.0);
            cumulative[k] = cumulative[k - 1] + seg;
        }
        CumulativeIntegral { ts: ts.to_vec(), ys: ys.to_vec(), tangents, cumulative }
    }

    pub fn at(&self, t: f64) -> f64 {
        let n = self.ts.len();
        let dt = self.ts[1] - self.ts[0];
        let x = ((t - self.ts[0]) / dt).clamp(0.0, (n - 1) as f64);
        let k = (x.floor() as usize).min(n - 2);
        let s = x - k as f64;
        // Partial integral of the Hermite piece on [t_k, t_k + s dt].
        let i00 = 0.5 * s.powi(4) - s.powi(3) + s;
        let i10 = 0.25 * s.powi(4) - 2.0 * s.powi(3) / 3.0 + 0.5 * s * s;
        let i01 = -0.5 * s.powi(4) + s.powi(3);
        let i11 = 0.25 * s.powi(4) - s.powi(3) / 3.0;
        self.cumulative[k]
            + dt * (self.ys[k] * i00 + self.tangents[k] * i10 + self.ys[k + 1] * i01 + self.tangents[k + 1] * i11)
    }
}

/// Scalar-trajectory variant of [`interp_matrix_trajectory`].
pub fn interp_scalar_trajectory(ts: &[f64], ys: &[f64], t: f64) -> f64 {
    let n = ts.len();
    assert!(n >= 2 && ys.len() == n);
    let dt = ts[1] - ts[0];
    let x = ((t - ts[0]) / dt).clamp(0.0, (n - 1) as f64);
    let k = (x.floor() as usize).min(n - 2);
    let s = x - k as f64;
    if n == 2 {
        return ys[0] * (1.0 - s) + ys[1] * s;
    }
    let d0 = scalar_index_tangent(ys, k);
    let d1 = scalar_index_tangent(ys, k + 1);
    let h00 = 2.0 * s * s * s - 3.0 * s * s + 1.0;
    let h10 = s * s * s - 2.0 * s * s + s;
    let h01 = -2.0 * s * s * s + 3.0 * s * s;
    let h11 = s * s * s - s * s;
    ys[k] * h00 + d0 * h10 + ys[k + 1] * h01 + d1 * h11
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(0.0, -1.0),
            C64::new(0.0, 1.0), C64::new(0.0, 0.0),
        ])
    }

    #[test]
    fn hermitian_eigen_ascending_and_reconstructs() {
        let h = CMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0), C64::new(0.0, 1.0),
            C64::new(0.0, -1.0), C64::new(1.0, 0.0),
        ]);
        let e = hermitian_eigen(&h);
        assert_abs_diff_eq!(e.values[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 2.0, epsilon = 1e-12);
        let mut rec = CMatrix::zeros(2, 2);
        for k in 0..2 {
            let v = e.vectors.column(k);
            rec += v * v.adjoint() * C64::new(e.values[k], 0.0);
        }
        assert!((rec - h).norm() < 1e-12);
    }

    #[test]
    fn spectral_norm_matches_eigenvalue() {
        let y = pauli_y();
        assert_abs_diff_eq!(spectral_norm(&y), 1.0, epsilon = 1e-9);
        let m = &y * C64::new(3.0, 0.0);
        assert_abs_diff_eq!(spectral_norm(&m), 3.0, epsilon = 1e-8);
    }

    #[test]
    fn polar_factor_is_unitary() {
        let m = CMatrix::from_row_slice(2, 2, &[
            C64::new(0.8, 0.1), C64::new(0.1, -0.3),
            C64::new(-0.05, 0.2), C64::new(0.9, 0.0),
        ]);
        let u = polar_unitary(&m);
        let defect = (u.adjoint() * &u - identity(2)).norm();
        assert!(defect < 1e-12, "defect {defect:e}");
    }

    #[test]
    fn cumulative_integral_of_smooth_function() {
        let ts: Vec<f64> = (0..=400).map(|i| i as f64 * 0.005).collect();
        let ys: Vec<f64> = ts.iter().map(|&t| (3.0 * t).cos()).collect();
        let quad = CumulativeIntegral::new(&ts, &ys);
        for &t in &[0.17_f64, 1.0, 1.777, 2.0] {
            let exact = (3.0 * t).sin() / 3.0;
            assert!((quad.at(t) - exact).abs() < 1e-10, "t={t}: {} vs {exact}", quad.at(t));
        }
    }

    #[test]
    fn cubic_interpolation_reproduces_smooth_trajectory() {
        let ts: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        let ms: Vec<CMatrix> = ts
            .iter()
            .map(|&t| CMatrix::from_element(1, 1, C64::new((3.0 * t).sin(), (2.0 * t).cos())))
            .collect();
        for &t in &[0.003, 0.314, 0.77, 0.995] {
            let m = interp_matrix_trajectory(&ts, &ms, t);
            let exact = C64::new((3.0 * t).sin(), (2.0 * t).cos());
            assert!((m[(0, 0)] - exact).norm() < 5e-8, "t={t}");
        }
    }
}
