//! The time-adiabatic scheme: exact reference propagation, superadiabatic
//! projectors, the second-order effective Hamiltonian, the first-order
//! intertwiner, reduced propagation and reconstruction, and leakage
//! diagnostics.
//!
//! Everything is stated on the slow time scale: the reference dynamics is
//! i eps dpsi/dt = H(t) psi with t of order one.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_part, identity, interp_matrix_trajectory, interp_scalar_trajectory, CMatrix, CVector,
};
use crate::ode::{schrodinger_trajectory, OdeOptions};
use crate::spectral::{
    band_energy, decompose, frame_derivative, gap, reduced_resolvent, smooth_frame, BandSelection,
    GaugePolicy, SmoothFrame, TimeFamily,
};

/// A time-adiabatic problem instance: a gapped band of H(t), the adiabatic
/// parameter, and a unit reduced initial state.
pub struct TimeAdiabaticProblem {
    pub family: TimeFamily,
    pub band: BandSelection,
    pub epsilon: f64,
    /// Initial reduced state, dimension m, unit norm.
    pub chi0: CVector,
    /// Number of uniform samples for frame construction (inclusive of ends).
    pub n_samples: usize,
    pub gauge: GaugePolicy,
    pub ode: OdeOptions,
}

impl TimeAdiabaticProblem {
    pub fn new(family: TimeFamily, band: BandSelection, epsilon: f64, chi0: CVector) -> Self {
        assert!((chi0.norm() - 1.0).abs() <= 1e-12, "chi0 must be unit norm");
        assert!(epsilon > 0.0);
        TimeAdiabaticProblem {
            family,
            band,
            epsilon,
            chi0,
            n_samples: 4001,
            gauge: GaugePolicy::ParallelTransport,
            ode: OdeOptions::default(),
        }
    }

    pub fn with_gauge(mut self, gauge: GaugePolicy) -> Self {
        self.gauge = gauge;
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        assert!(n >= 5);
        self.n_samples = n;
        self
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let (t0, t1) = self.family.interval;
        let n = self.n_samples;
        (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect()
    }

    /// Precompute the frame and the ingredient trajectories of the scheme.
    pub fn build_scheme(&self) -> Result<TimeAdiabaticScheme> {
        let samples = self.sample_times();
        let frame = smooth_frame(&self.family, &self.band, &samples, self.gauge)?;
        let m = frame.multiplicity();
        let n = samples.len();
        let mut k_traj = Vec::with_capacity(n);
        let mut g_traj = Vec::with_capacity(n);
        let mut corr_traj = Vec::with_capacity(n);
        for k in 0..n {
            let t = samples[k];
            let h = self.family.eval_unchecked(t);
            let phi = &frame.frames[k];
            let p = phi * phi.adjoint();
            let r = reduced_resolvent(&h, frame.energies[k], &p, self.band.g_min)
                .map_err(|e| at_time(e, t))?;
            let d = frame_derivative(&self.family, &self.band, &frame, k)?;
            let off = (identity(h.nrows()) - &p) * &d;
            k_traj.push(phi.adjoint() * &d);
            g_traj.push(hermitian_part(&(off.adjoint() * &r * &off)));
            corr_traj.push(&r * &off);
            let _ = m;
        }
        Ok(TimeAdiabaticScheme {
            problem: TimeAdiabaticProblem {
                family: self.family.clone(),
                band: self.band,
                epsilon: self.epsilon,
                chi0: self.chi0.clone(),
                n_samples: self.n_samples,
                gauge: self.gauge,
                ode: self.ode,
            },
            frame,
            k_traj,
            g_traj,
            corr_traj,
        })
    }
}

fn at_time(e: Error, t: f64) -> Error {
    match e {
        Error::GapCollapse { gap, g_min, .. } => Error::GapCollapse { gap, g_min, at: format!("t = {t}") },
        other => other,
    }
}

/// Precomputed trajectories: the smooth frame, the in-band derivative block
/// K = <phi_a|dphi_b>, the second-order sandwich G = <dphi_a|R dphi_b>, and
/// the off-band intertwiner correction R dphi.
pub struct TimeAdiabaticScheme {
    pub problem: TimeAdiabaticProblem,
    pub frame: SmoothFrame,
    k_traj: Vec<CMatrix>,
    g_traj: Vec<CMatrix>,
    corr_traj: Vec<CMatrix>,
}

/// Effective Hamiltonian trajectory with its perturbative order tag.
pub struct EffectiveTrajectory {
    pub times: Vec<f64>,
    pub matrices: Vec<CMatrix>,
    pub order: usize,
}

/// Intertwiner trajectory with its order tag.
pub struct IntertwinerTrajectory {
    pub times: Vec<f64>,
    pub matrices: Vec<CMatrix>,
    pub order: usize,
}

impl TimeAdiabaticScheme {
    pub fn multiplicity(&self) -> usize {
        self.frame.multiplicity()
    }

    pub fn epsilon(&self) -> f64 {
        self.problem.epsilon
    }

    /// Band energy at t (interpolated between samples).
    pub fn energy(&self, t: f64) -> f64 {
        interp_scalar_trajectory(&self.frame.samples, &self.frame.energies, t)
    }

    /// The m x m effective Hamiltonian at time t through the given order.
    ///
    /// Order 0 is E(t) 1; order 1 adds -i eps <phi_a|dphi_b>; order 2 adds
    /// -eps^2 <dphi_a|(H-E)^{-1}(1-P) dphi_b>. The second-order coefficient
    /// is pinned by the reconstruction-order calibration (see the acceptance
    /// suite): it is the unique choice for which pairing with the first-order
    /// intertwiner leaves no secular in-band residual, cross-checked against
    /// the exact rotating-frame quasi-energy.
    pub fn effective_hamiltonian(&self, t: f64, order: usize) -> Result<CMatrix> {
        if order > 2 {
            return Err(Error::InvalidInput(format!("effective order {order} > 2")));
        }
        let m = self.multiplicity();
        let eps = self.epsilon();
        let mut h = identity(m) * C64::new(self.energy(t), 0.0);
        if order >= 1 {
            let k = interp_matrix_trajectory(&self.frame.samples, &self.k_traj, t);
            h += k * C64::new(0.0, -eps);
        }
        if order >= 2 {
            let g = interp_matrix_trajectory(&self.frame.samples, &self.g_traj, t);
            h += g * C64::new(-eps * eps, 0.0);
        }
        Ok(h)
    }

    /// The n_f x m intertwiner at time t through the given order.
    ///
    /// Order 0 is the frame itself; order 1 adds
    /// i eps (H-E)^{-1}(1-P) dphi_a per column.
    pub fn intertwiner(&self, t: f64, order: usize) -> Result<CMatrix> {
        if order > 1 {
            return Err(Error::InvalidInput(format!("intertwiner order {order} > 1")));
        }
        let eps = self.epsilon();
        let mut u = interp_matrix_trajectory(&self.frame.samples, &self.frame.frames, t);
        if order >= 1 {
            let corr = interp_matrix_trajectory(&self.frame.samples, &self.corr_traj, t);
            u += corr * C64::new(0.0, eps);
        }
        Ok(u)
    }

    /// Effective-Hamiltonian trajectory on the times grid.
    pub fn effective_trajectory(&self, times: &[f64], order: usize) -> Result<EffectiveTrajectory> {
        let matrices = times
            .iter()
            .map(|&t| self.effective_hamiltonian(t, order))
            .collect::<Result<Vec<_>>>()?;
        Ok(EffectiveTrajectory { times: times.to_vec(), matrices, order })
    }

    pub fn intertwiner_trajectory(&self, times: &[f64], order: usize) -> Result<IntertwinerTrajectory> {
        let matrices = times
            .iter()
            .map(|&t| self.intertwiner(t, order))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntertwinerTrajectory { times: times.to_vec(), matrices, order })
    }

    /// Superadiabatic projector P^eps(t) through the given order (0, 1 or 2).
    ///
    /// The corrections are fixed order by order: off-diagonal blocks from the
    /// previous order's intertwining defect through the reduced resolvent,
    /// diagonal blocks from the previous order's idempotence defect.
    pub fn superadiabatic_projector(&self, t: f64, order: usize) -> Result<CMatrix> {
        if order > 2 {
            return Err(Error::InvalidInput(format!("projector order {order} > 2")));
        }
        let eps = self.epsilon();
        let e_hint = self.energy(t);
        let p0 = self.instantaneous_projector(t, e_hint)?;
        let mut proj = p0.clone();
        if order >= 1 {
            let p1 = self.first_correction(t, e_hint)?;
            proj += &p1 * C64::new(eps, 0.0);
        }
        if order >= 2 {
            let p2 = self.second_correction(t, e_hint, &p0)?;
            proj += &p2 * C64::new(eps * eps, 0.0);
        }
        Ok(proj)
    }

    /// Instantaneous band projector, band identified by energy closeness to
    /// the tracked band energy (robust against reordering of other levels).
    fn instantaneous_projector(&self, t: f64, e_hint: f64) -> Result<CMatrix> {
        let (p, _e, _r) = self.projector_energy_resolvent(t, e_hint)?;
        Ok(p)
    }

    fn projector_energy_resolvent(&self, t: f64, e_hint: f64) -> Result<(CMatrix, f64, CMatrix)> {
        let h = self.problem.family.eval_unchecked(t);
        let dec = decompose(&h, 0.0)?;
        let m = self.multiplicity();
        // Pick the cluster window whose mean is closest to the tracked energy.
        let n = dec.dim();
        let mut best = (0usize, f64::INFINITY);
        for start in 0..=(n - m) {
            let mean: f64 = dec.eigenvalues[start..start + m].iter().sum::<f64>() / m as f64;
            let d = (mean - e_hint).abs();
            if d < best.1 {
                best = (start, d);
            }
        }
        let window = BandSelection::new(best.0, m, self.problem.band.g_min);
        let g = gap(&dec, &window);
        if g < self.problem.band.g_min {
            return Err(Error::GapCollapse { gap: g, g_min: self.problem.band.g_min, at: format!("t = {t}") });
        }
        let p = dec.projector_for(window.range());
        let e = band_energy(&dec, &window);
        let r = reduced_resolvent(&h, e, &p, self.problem.band.g_min)?;
        Ok((p, e, r))
    }

    /// P_1 = -i P Pdot R + i R Pdot P with Pdot = -R Hdot P - P Hdot R.
    fn first_correction(&self, t: f64, e_hint: f64) -> Result<CMatrix> {
        let (p, _e, r) = self.projector_energy_resolvent(t, e_hint)?;
        let hdot = self.problem.family.derivative(t);
        let pdot = -(&r * &hdot * &p) - (&p * &hdot * &r);
        let x = &r * &pdot * &p * C64::new(0.0, 1.0);
        Ok(&x + x.adjoint())
    }

    /// Diagonal blocks from the idempotence defect B_2 = P_1^2, off-diagonal
    /// from the intertwining defect i dP_1/dt through the reduced resolvent.
    fn second_correction(&self, t: f64, e_hint: f64, p: &CMatrix) -> Result<CMatrix> {
        let (_, _, r) = self.projector_energy_resolvent(t, e_hint)?;
        let p1 = self.first_correction(t, e_hint)?;
        let b2 = &p1 * &p1;
        let n = p.nrows();
        let q = identity(n) - p;
        let diag = -(p * &b2 * p) + &q * &b2 * &q;
        // dP_1/dt by a small central difference; P_1 is assembled from
        // pointwise gauge-free quantities, so the stencil is clean.
        let h_fd = f64::EPSILON.cbrt() * t.abs().max(1.0);
        let p1p = self.first_correction(t + h_fd, self.energy(t + h_fd))?;
        let p1m = self.first_correction(t - h_fd, self.energy(t - h_fd))?;
        let p1dot = (p1p - p1m) / C64::new(2.0 * h_fd, 0.0);
        let x = &r * &p1dot * p * C64::new(0.0, 1.0);
        let off = &x + x.adjoint();
        Ok(diag + off)
    }

    /// Exact reference propagation i eps dpsi/dt = H(t) psi from psi0,
    /// sampled at `times`.
    pub fn propagate_exact(&self, psi0: &CVector, times: &[f64]) -> Result<Vec<CVector>> {
        if (psi0.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput("psi0 must be unit norm".into()));
        }
        let fam = self.problem.family.clone();
        schrodinger_trajectory(move |t| fam.eval_unchecked(t), psi0, times, self.epsilon(), &self.problem.ode)
    }

    /// Reduced propagation i eps dchi/dt = H_eff(t) chi from chi0.
    ///
    /// For m = 1 the generator is a real scalar, so the propagation reduces to
    /// a phase quadrature and the modulus is preserved exactly.
    pub fn propagate_effective(&self, order: usize, times: &[f64]) -> Result<Vec<CVector>> {
        if order > 2 {
            return Err(Error::InvalidInput(format!("effective order {order} > 2")));
        }
        let eps = self.epsilon();
        let m = self.multiplicity();
        if m == 1 {
            let h_samples: Vec<f64> = (0..self.frame.samples.len())
                .map(|k| {
                    let mut h = self.frame.energies[k];
                    if order >= 1 {
                        // -i eps K with K purely imaginary.
                        h += eps * self.k_traj[k][(0, 0)].im;
                    }
                    if order >= 2 {
                        h -= eps * eps * self.g_traj[k][(0, 0)].re;
                    }
                    h
                })
                .collect();
            let quad = crate::linalg::CumulativeIntegral::new(&self.frame.samples, &h_samples);
            let base = quad.at(times[0]);
            return Ok(times
                .iter()
                .map(|&t| &self.problem.chi0 * C64::from_polar(1.0, -(quad.at(t) - base) / eps))
                .collect());
        }
        let chi0 = self.problem.chi0.clone();
        let samples = self.frame.samples.clone();
        let energies = self.frame.energies.clone();
        let k_traj = self.k_traj.clone();
        let g_traj = self.g_traj.clone();
        let h_at = move |t: f64| -> CMatrix {
            let mut h = identity(m) * C64::new(interp_scalar_trajectory(&samples, &energies, t), 0.0);
            if order >= 1 {
                h += interp_matrix_trajectory(&samples, &k_traj, t) * C64::new(0.0, -eps);
            }
            if order >= 2 {
                h += interp_matrix_trajectory(&samples, &g_traj, t) * C64::new(-eps * eps, 0.0);
            }
            h
        };
        schrodinger_trajectory(h_at, &chi0, times, eps, &self.problem.ode)
    }

    /// Reassemble psi_t = U^eps(t) chi(t) on the sampled grid.
    pub fn reconstruct(&self, times: &[f64], chi: &[CVector], u_order: usize) -> Result<Vec<CVector>> {
        if times.len() != chi.len() {
            return Err(Error::InvalidInput("times and chi trajectory length mismatch".into()));
        }
        times
            .iter()
            .zip(chi)
            .map(|(&t, c)| Ok(self.intertwiner(t, u_order)? * c))
            .collect()
    }
}

/// Sup and per-sample series of ||(1 - P) psi|| over a trajectory.
pub fn leakage(psi: &[CVector], projectors: &[CMatrix]) -> (f64, Vec<f64>) {
    assert_eq!(psi.len(), projectors.len());
    let series: Vec<f64> = psi
        .iter()
        .zip(projectors)
        .map(|(v, p)| {
            let n = p.nrows();
            ((identity(n) - p) * v).norm()
        })
        .collect();
    let sup = series.iter().cloned().fold(0.0, f64::max);
    (sup, series)
}
