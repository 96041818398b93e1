//! Spinor-valued grid states and Strang split-step propagation for
//! Hamiltonians of the form p^2/2 + V(q).

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, CVector};
use crate::weyl::grid::PositionGrid;

/// Tolerated mass in the outer 10% of the box.
pub const BOUNDARY_MASS_TOL: f64 = 1e-8;

/// Spinor wavefunction on the grid, point-major layout (index j * d + c),
/// normalized under the dx-weighted inner product.
#[derive(Clone)]
pub struct GridState {
    pub grid: PositionGrid,
    pub components: usize,
    pub data: CVector,
}

impl GridState {
    pub fn zeros(grid: PositionGrid, components: usize) -> Self {
        GridState { grid, components, data: CVector::zeros(grid.n * components) }
    }

    /// Gaussian wavepacket (2 pi sigma^2)^{-1/4} exp(-(x-q0)^2/(4 sigma^2))
    /// exp(i p0 x / eps) carried by a unit spinor; sigma is the position
    /// standard deviation of |psi|^2.
    pub fn gaussian(
        grid: PositionGrid,
        spinor: &CVector,
        q0: f64,
        sigma: f64,
        p0: f64,
        eps: f64,
    ) -> Self {
        let d = spinor.len();
        let mut data = CVector::zeros(grid.n * d);
        for j in 0..grid.n {
            let x = grid.x(j);
            let env = (-(x - q0).powi(2) / (4.0 * sigma * sigma)).exp();
            let phase = C64::from_polar(env, p0 * x / eps);
            for c in 0..d {
                data[j * d + c] = phase * spinor[c];
            }
        }
        let mut state = GridState { grid, components: d, data };
        state.normalize();
        state
    }

    pub fn norm(&self) -> f64 {
        self.data.norm() * self.grid.dx().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.data /= C64::new(n, 0.0);
        }
    }

    pub fn inner(&self, other: &GridState) -> C64 {
        (self.data.adjoint() * &other.data)[(0, 0)] * C64::new(self.grid.dx(), 0.0)
    }

    /// Mass in the outer `frac` of the box (frac = 0.1 checks the outer 10%).
    pub fn boundary_mass(&self, frac: f64) -> f64 {
        let n = self.grid.n;
        let d = self.components;
        let edge = ((n as f64 * frac / 2.0).ceil() as usize).max(1);
        let mut mass = 0.0;
        for j in (0..edge).chain(n - edge..n) {
            for c in 0..d {
                mass += self.data[j * d + c].norm_sqr();
            }
        }
        mass * self.grid.dx()
    }

    /// Mass on dual-grid bins with |k| above (1 - frac) of the Nyquist index.
    pub fn momentum_edge_mass(&self, frac: f64) -> f64 {
        let n = self.grid.n;
        let d = self.components;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let cutoff = ((n / 2) as f64 * (1.0 - frac)) as i64;
        let mut mass = 0.0;
        let mut total = 0.0;
        for c in 0..d {
            let mut buf: Vec<C64> = (0..n).map(|j| self.data[j * d + c]).collect();
            fft.process(&mut buf);
            for (b, z) in buf.iter().enumerate() {
                let k = self.grid.k_of_bin(b).abs();
                total += z.norm_sqr();
                if k >= cutoff {
                    mass += z.norm_sqr();
                }
            }
        }
        if total > 0.0 {
            mass / total
        } else {
            0.0
        }
    }

    pub fn component(&self, c: usize) -> CVector {
        CVector::from_fn(self.grid.n, |j, _| self.data[j * self.components + c])
    }
}

/// Strang split-step propagator for i eps d psi/dt = (-eps^2 Lap/2 + V(x)) psi.
///
/// Kinetic half-steps are exact in the Fourier basis; potential steps are
/// pointwise matrix exponentials precomputed from the eigendecomposition of
/// V at each grid point.
pub struct SplitStepPropagator {
    grid: PositionGrid,
    d: usize,
    eps: f64,
    /// Per-point eigenvectors and eigenvalues of V(x_j).
    v_eig: Vec<(CMatrix, Vec<f64>)>,
}

impl SplitStepPropagator {
    pub fn new(v: Arc<dyn Fn(f64) -> CMatrix + Send + Sync>, grid: PositionGrid, d: usize, eps: f64) -> Self {
        let v_eig = (0..grid.n)
            .map(|j| {
                let eig = hermitian_eigen(&v(grid.x(j)));
                (eig.vectors, eig.values)
            })
            .collect();
        SplitStepPropagator { grid, d, eps, v_eig }
    }

    /// Propagate to `t_final` with fixed step `dt`; norm is conserved by
    /// construction, boundary mass is checked at the end.
    pub fn propagate(&self, state: &GridState, t_final: f64, dt: f64) -> Result<GridState> {
        assert_eq!(state.components, self.d);
        let n_steps = (t_final / dt).round().max(1.0) as usize;
        let dt = t_final / n_steps as f64;
        let n = self.grid.n;
        let d = self.d;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);

        // exp(-i (eps xi)^2/2 dt / eps) per bin, half step.
        let half_kin: Vec<C64> = (0..n)
            .map(|b| {
                let xi = self.grid.xi_of_bin(b);
                C64::from_polar(1.0, -0.5 * self.eps * xi * xi * 0.5 * dt)
            })
            .collect();
        // Pointwise exp(-i V dt / eps).
        let pot: Vec<CMatrix> = self
            .v_eig
            .iter()
            .map(|(u, lam)| {
                let mut ph = CMatrix::zeros(d, d);
                for (k, &l) in lam.iter().enumerate() {
                    let col = u.column(k);
                    ph += col * col.adjoint() * C64::from_polar(1.0, -l * dt / self.eps);
                }
                ph
            })
            .collect();

        let mut data = state.data.clone();
        let mut chans: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; d];
        let kinetic_half = |data: &mut CVector, chans: &mut Vec<Vec<C64>>| {
            for c in 0..d {
                for j in 0..n {
                    chans[c][j] = data[j * d + c];
                }
                fft.process(&mut chans[c]);
                for (b, z) in chans[c].iter_mut().enumerate() {
                    *z *= half_kin[b];
                }
                ifft.process(&mut chans[c]);
                for j in 0..n {
                    data[j * d + c] = chans[c][j] / n as f64;
                }
            }
        };
        let potential_full = |data: &mut CVector| {
            for j in 0..n {
                let v = CVector::from_fn(d, |c, _| data[j * d + c]);
                let w = &pot[j] * v;
                for c in 0..d {
                    data[j * d + c] = w[c];
                }
            }
        };

        for _ in 0..n_steps {
            kinetic_half(&mut data, &mut chans);
            potential_full(&mut data);
            kinetic_half(&mut data, &mut chans);
        }
        let out = GridState { grid: self.grid, components: d, data };
        let mass = out.boundary_mass(0.1);
        if mass > BOUNDARY_MASS_TOL {
            return Err(Error::BoundaryContamination { mass, frac: 10.0, tol: BOUNDARY_MASS_TOL });
        }
        Ok(out)
    }

    /// Halve the step until two consecutive solutions agree within `tol`
    /// (global error is O(dt^2), so the finer solution is returned).
    pub fn propagate_verified(&self, state: &GridState, t_final: f64, tol: f64) -> Result<(GridState, f64)> {
        let mut dt = t_final / 64.0;
        let mut coarse = self.propagate(state, t_final, dt)?;
        for _ in 0..14 {
            let fine = self.propagate(state, t_final, dt / 2.0)?;
            let disagreement = (&fine.data - &coarse.data).norm() * self.grid.dx().sqrt();
            if disagreement <= tol {
                return Ok((fine, dt / 2.0));
            }
            coarse = fine;
            dt /= 2.0;
        }
        Err(Error::StepTooLarge { disagreement: f64::NAN, tol })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    fn unit_spinor1() -> CVector {
        CVector::from_vec(vec![C64::new(1.0, 0.0)])
    }

    #[test]
    fn gaussian_is_normalized_and_centred() {
        let g = PositionGrid::new(256, 40.0).unwrap();
        let s = GridState::gaussian(g, &unit_spinor1(), 1.0, 1.0, 0.2, 0.1);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let mean: f64 = (0..g.n).map(|j| g.x(j) * s.data[j].norm_sqr() * g.dx()).sum();
        assert!((mean - 1.0).abs() < 1e-8);
        assert!(s.boundary_mass(0.1) < 1e-20);
    }

    #[test]
    fn free_gaussian_dispersion_matches_analytic() {
        // sigma(t)^2 = sigma0^2 + (eps t / (2 sigma0))^2 for V = 0.
        let g = PositionGrid::new(256, 40.0).unwrap();
        let eps = 0.1;
        let sigma0 = 1.0;
        let s0 = GridState::gaussian(g, &unit_spinor1(), 0.0, sigma0, 0.0, eps);
        let prop = SplitStepPropagator::new(Arc::new(|_| CMatrix::zeros(1, 1)), g, 1, eps);
        let t = 2.0;
        let (s, _) = prop.propagate_verified(&s0, t, 1e-9).unwrap();
        let var: f64 = (0..g.n).map(|j| g.x(j).powi(2) * s.data[j].norm_sqr() * g.dx()).sum();
        let expect = sigma0 * sigma0 + (eps * t / (2.0 * sigma0)).powi(2);
        assert!((var - expect).abs() < 1e-6, "var {var} vs {expect}");
        assert!((s.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constant_potential_is_global_phase() {
        let g = PositionGrid::new(128, 30.0).unwrap();
        let eps = 0.05;
        let v0 = 0.7;
        let s0 = GridState::gaussian(g, &unit_spinor1(), 0.0, 1.0, 0.0, eps);
        let free = SplitStepPropagator::new(Arc::new(|_| CMatrix::zeros(1, 1)), g, 1, eps);
        let shifted = SplitStepPropagator::new(
            Arc::new(move |_| CMatrix::from_element(1, 1, C64::new(v0, 0.0))),
            g,
            1,
            eps,
        );
        let t = 0.8;
        let a = free.propagate(&s0, t, 1e-3).unwrap();
        let b = shifted.propagate(&s0, t, 1e-3).unwrap();
        let expect = C64::from_polar(1.0, -v0 * t / eps);
        let overlap = a.inner(&b);
        assert!((overlap - expect).norm() < 1e-10);
    }

    #[test]
    fn coherent_state_returns_after_one_period() {
        // V = q^2/2, one classical period T = 2 pi; ground-state width
        // sigma^2 = eps/2.
        let g = PositionGrid::new(256, 20.0).unwrap();
        let eps = 0.1;
        let sigma = (eps / 2.0_f64).sqrt();
        let s0 = GridState::gaussian(g, &unit_spinor1(), 1.0, sigma, 0.0, eps);
        let prop = SplitStepPropagator::new(
            Arc::new(|q: f64| CMatrix::from_element(1, 1, C64::new(0.5 * q * q, 0.0))),
            g,
            1,
            eps,
        );
        let t = 2.0 * std::f64::consts::PI;
        let (s, _) = prop.propagate_verified(&s0, t, 1e-8).unwrap();
        let fidelity = s0.inner(&s).norm();
        assert!(fidelity >= 1.0 - 1e-6, "fidelity {fidelity}");
    }

    #[test]
    fn split_step_matches_dense_exponential() {
        use crate::weyl::quantize::weyl_quantize;
        use crate::weyl::symbol::Symbol;
        let g = PositionGrid::new(128, 30.0).unwrap();
        let eps = 0.1;
        let s0 = GridState::gaussian(g, &unit_spinor1(), -1.0, 0.8, 0.15, eps);
        let vq = |q: f64| 0.3 * (0.5 * q).tanh() + 0.1 * q * q / (1.0 + 0.05 * q * q);
        let prop = SplitStepPropagator::new(
            Arc::new(move |q: f64| CMatrix::from_element(1, 1, C64::new(vq(q), 0.0))),
            g,
            1,
            eps,
        );
        let (split, _) = prop.propagate_verified(&s0, 1.0, 1e-9).unwrap();
        let sym = Symbol::scalar(move |q, p| 0.5 * p * p + vq(q)).assume_hermitian();
        let op = weyl_quantize(&sym, &g, eps).unwrap();
        let dense = op.evolve(&s0, 1.0, eps);
        let fidelity = split.inner(&dense).norm();
        assert!(fidelity >= 1.0 - 1e-6, "fidelity {fidelity}");
        let err = (&split.data - &dense.data).norm() * g.dx().sqrt();
        assert!(err < 1e-4, "state error {err}");
    }

    #[test]
    fn boundary_contamination_detected() {
        let g = PositionGrid::new(128, 12.0).unwrap();
        let eps = 0.5;
        // Fast packet in a tiny box: reaches the edge within t = 2.
        let s0 = GridState::gaussian(g, &unit_spinor1(), 0.0, 0.8, 2.0, eps);
        let prop = SplitStepPropagator::new(Arc::new(|_| CMatrix::zeros(1, 1)), g, 1, eps);
        let res = prop.propagate(&s0, 2.0, 1e-3);
        assert!(matches!(res, Err(Error::BoundaryContamination { .. })));
        let _ = identity(1);
    }
}
