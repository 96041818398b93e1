//! Adaptive Dormand-Prince 5(4) integration on real state vectors.
//!
//! Complex Schrödinger systems are integrated by stacking real and imaginary
//! parts; see [`schrodinger_trajectory`].

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        // Reference solutions have to dominate the smallest swept epsilon^3.
        OdeOptions { rtol: 1e-10, atol: 1e-12, max_steps: 50_000_000 }
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// y5 - y4 error weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `times[0]`, recording the state at every
/// entry of `times` (which must be strictly monotone increasing).
///
/// The first recorded state is `y0` itself.
pub fn integrate_to_samples<F>(
    mut f: F,
    y0: &DVector<f64>,
    times: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<DVector<f64>>>
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    assert!(times.len() >= 2, "need at least start and end time");
    let mut out = Vec::with_capacity(times.len());
    out.push(y0.clone());

    let mut t = times[0];
    let mut y = y0.clone();
    let mut k1 = f(t, &y);
    let span = times[times.len() - 1] - t;
    let mut h = (span / 100.0).min(1e-2 * span.abs().max(1e-6));
    let mut steps = 0usize;
    let mut next_sample = 1usize;

    while next_sample < times.len() {
        let t_target = times[next_sample];
        let mut hit_sample = false;
        if t + h >= t_target {
            h = t_target - t;
            hit_sample = true;
        }
        let mut ks: Vec<DVector<f64>> = Vec::with_capacity(7);
        ks.push(k1.clone());
        for i in 0..6 {
            let mut yi = y.clone();
            for (j, kj) in ks.iter().enumerate() {
                let a = A[i][j];
                if a != 0.0 {
                    yi.axpy(h * a, kj, 1.0);
                }
            }
            ks.push(f(t + C[i] * h, &yi));
        }
        // 5th-order solution is stage row A[5] (FSAL: ks[6] = f at t+h).
        let mut y5 = y.clone();
        for (j, kj) in ks.iter().take(6).enumerate() {
            let a = A[5][j];
            if a != 0.0 {
                y5.axpy(h * a, kj, 1.0);
            }
        }
        // Error estimate.
        let mut err_sq = 0.0_f64;
        let n = y.len();
        for idx in 0..n {
            let mut e = 0.0;
            for (j, kj) in ks.iter().enumerate() {
                if E[j] != 0.0 {
                    e += E[j] * kj[idx];
                }
            }
            e *= h;
            let sc = opts.atol + opts.rtol * y[idx].abs().max(y5[idx].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / n as f64).sqrt();

        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::ToleranceNotMet { t, steps });
        }

        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = ks[6].clone();
            if hit_sample {
                out.push(y.clone());
                next_sample += 1;
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        let h_min = 1e-14 * span.abs().max(1e-14);
        if h.abs() < h_min {
            return Err(Error::ToleranceNotMet { t, steps });
        }
    }
    Ok(out)
}

/// Pack a complex vector as [Re; Im].
pub fn pack_complex(v: &CVector) -> DVector<f64> {
    let n = v.len();
    DVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

pub fn unpack_complex(y: &DVector<f64>) -> CVector {
    let n = y.len() / 2;
    CVector::from_fn(n, |i, _| C64::new(y[i], y[i + n]))
}

/// Solve `i eps dpsi/dt = H(t) psi`, sampling at `times`.
pub fn schrodinger_trajectory<H>(
    mut h_at: H,
    psi0: &CVector,
    times: &[f64],
    eps: f64,
    opts: &OdeOptions,
) -> Result<Vec<CVector>>
where
    H: FnMut(f64) -> CMatrix,
{
    let n = psi0.len();
    let rhs = move |t: f64, y: &DVector<f64>| -> DVector<f64> {
        let h = h_at(t);
        let psi = CVector::from_fn(n, |i, _| C64::new(y[i], y[i + n]));
        let hpsi = &h * &psi;
        // dpsi/dt = -i H psi / eps
        DVector::from_fn(2 * n, |i, _| {
            if i < n {
                hpsi[i].im / eps
            } else {
                -hpsi[i - n].re / eps
            }
        })
    };
    let ys = integrate_to_samples(rhs, &pack_complex(psi0), times, opts)?;
    Ok(ys.iter().map(unpack_complex).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exponential_decay() {
        let y0 = DVector::from_vec(vec![1.0]);
        let times = [0.0, 0.5, 1.0];
        let ys = integrate_to_samples(|_, y| -y.clone(), &y0, &times, &OdeOptions::default()).unwrap();
        assert_abs_diff_eq!(ys[1][0], (-0.5_f64).exp(), epsilon = 1e-10);
        assert_abs_diff_eq!(ys[2][0], (-1.0_f64).exp(), epsilon = 1e-10);
    }

    #[test]
    fn harmonic_oscillator_norm_preserved() {
        let y0 = DVector::from_vec(vec![1.0, 0.0]);
        let times: Vec<f64> = (0..=10).map(|i| i as f64 * 2.0).collect();
        let ys = integrate_to_samples(
            |_, y| DVector::from_vec(vec![y[1], -y[0]]),
            &y0,
            &times,
            &OdeOptions::default(),
        )
        .unwrap();
        for (i, y) in ys.iter().enumerate() {
            let t = times[i];
            assert_abs_diff_eq!(y[0], t.cos(), epsilon = 1e-8);
            assert_abs_diff_eq!(y[1], -t.sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn schrodinger_constant_hamiltonian_phase() {
        // i eps psi' = E psi with eigenvector initial state: psi = e^{-iEt/eps} psi0.
        let e = 0.7;
        let eps = 0.05;
        let h = CMatrix::from_row_slice(1, 1, &[C64::new(e, 0.0)]);
        let psi0 = CVector::from_vec(vec![C64::new(1.0, 0.0)]);
        let times = [0.0, 1.0];
        let traj = schrodinger_trajectory(|_| h.clone(), &psi0, &times, eps, &OdeOptions::default()).unwrap();
        let expect = C64::from_polar(1.0, -e * 1.0 / eps);
        assert!((traj[1][0] - expect).norm() < 1e-8);
    }
}
