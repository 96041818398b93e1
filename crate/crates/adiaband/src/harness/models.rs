//! The model zoo: closed-form families with cheap oracle ground truths.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::linalg::CMatrix;
use crate::spectral::{BandSelection, TimeFamily};

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0), C64::new(1.0, 0.0),
        C64::new(1.0, 0.0), C64::new(0.0, 0.0),
    ])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0), C64::new(0.0, -1.0),
        C64::new(0.0, 1.0), C64::new(0.0, 0.0),
    ])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(1.0, 0.0), C64::new(0.0, 0.0),
        C64::new(0.0, 0.0), C64::new(-1.0, 0.0),
    ])
}

/// n . sigma for a real 3-vector.
pub fn dot_sigma(n: [f64; 3]) -> CMatrix {
    sigma_x() * C64::new(n[0], 0.0) + sigma_y() * C64::new(n[1], 0.0) + sigma_z() * C64::new(n[2], 0.0)
}

/// Which of the two levels of a two-level model to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoLevelBand {
    Lower,
    Upper,
}

impl TwoLevelBand {
    pub fn selection(self, g_min: f64) -> BandSelection {
        match self {
            TwoLevelBand::Lower => BandSelection::new(0, 1, g_min),
            TwoLevelBand::Upper => BandSelection::new(1, 1, g_min),
        }
    }
}

/// Landau-Zener-type sweep H(t) = (tanh(t) sz + delta sx)/2 on [t0, t1].
///
/// Eigenvalues +-(1/2) sqrt(tanh^2 t + delta^2); the gap is bounded below by
/// delta. The model ships smooth real eigenframes for both bands, optionally
/// twisted by a phase alpha(t) to exercise gauge independence.
pub fn landau_zener(
    delta: f64,
    interval: (f64, f64),
    band: TwoLevelBand,
    gauge_twist: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
) -> TimeFamily {
    let (sx, sz) = (sigma_x(), sigma_z());
    let fam = TimeFamily::new(2, interval, move |t: f64| {
        (&sz * C64::new(t.tanh(), 0.0) + &sx * C64::new(delta, 0.0)) * C64::new(0.5, 0.0)
    })
    .with_derivative(move |t: f64| {
        let sech2 = 1.0 / t.cosh().powi(2);
        sigma_z() * C64::new(0.5 * sech2, 0.0)
    });
    // Mixing angle theta = atan2(delta, tanh t): upper eigenvector
    // (cos(theta/2), sin(theta/2)), lower (-sin(theta/2), cos(theta/2)).
    fam.with_frame(move |t: f64| {
        let theta = delta.atan2(t.tanh());
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let col = match band {
            TwoLevelBand::Upper => [C64::new(c, 0.0), C64::new(s, 0.0)],
            TwoLevelBand::Lower => [C64::new(-s, 0.0), C64::new(c, 0.0)],
        };
        let phase = match &gauge_twist {
            Some(a) => C64::from_polar(1.0, a(t)),
            None => C64::new(1.0, 0.0),
        };
        CMatrix::from_column_slice(2, 1, &[col[0] * phase, col[1] * phase])
    })
}

/// Rotating-field spin H(t) = (delta/2) n(t).sigma with
/// n(t) = (sin theta cos omega t, sin theta sin omega t, cos theta).
///
/// The supplied frame follows the aligned (upper) or anti-aligned (lower)
/// band with the standard single-valued gauge, so the Berry connection shows
/// up in the in-band derivative block.
pub fn rotating_field(
    delta: f64,
    theta: f64,
    omega: f64,
    interval: (f64, f64),
    band: TwoLevelBand,
) -> TimeFamily {
    let fam = TimeFamily::new(2, interval, move |t: f64| {
        let phi = omega * t;
        dot_sigma([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
            * C64::new(delta / 2.0, 0.0)
    })
    .with_derivative(move |t: f64| {
        let phi = omega * t;
        dot_sigma([-theta.sin() * phi.sin() * omega, theta.sin() * phi.cos() * omega, 0.0])
            * C64::new(delta / 2.0, 0.0)
    });
    fam.with_frame(move |t: f64| {
        let phi = omega * t;
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let e = C64::from_polar(1.0, phi);
        match band {
            // |+n> = (cos(theta/2), e^{i phi} sin(theta/2))
            TwoLevelBand::Upper => CMatrix::from_column_slice(2, 1, &[C64::new(c, 0.0), e * s]),
            // |-n> = (-e^{-i phi} sin(theta/2), cos(theta/2))
            TwoLevelBand::Lower => {
                CMatrix::from_column_slice(2, 1, &[-e.conj() * s, C64::new(c, 0.0)])
            }
        }
    })
}

/// Two-channel Born-Oppenheimer potential V(q) = a tanh(q) sz + b sx + c(q) 1.
pub fn two_channel_v(a: f64, b: f64, c: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>) -> Arc<dyn Fn(f64) -> CMatrix + Send + Sync> {
    Arc::new(move |q: f64| {
        let mut v = sigma_z() * C64::new(a * q.tanh(), 0.0) + sigma_x() * C64::new(b, 0.0);
        if let Some(c) = &c {
            let off = c(q);
            v[(0, 0)] += C64::new(off, 0.0);
            v[(1, 1)] += C64::new(off, 0.0);
        }
        v
    })
}

/// Winding two-channel potential V(q) = delta * d(q).sigma with
/// d(q) = (sin theta cos kq, sin theta sin kq, cos theta): the frame of either
/// band picks up the spin-1/2 Berry phase over one period 2 pi / k.
pub fn winding_v(delta: f64, theta: f64, kappa: f64) -> Arc<dyn Fn(f64) -> CMatrix + Send + Sync> {
    Arc::new(move |q: f64| {
        let phi = kappa * q;
        dot_sigma([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]) * C64::new(delta, 0.0)
    })
}

/// Analytic aligned-band frame for [`winding_v`], single valued in q.
pub fn winding_frame(theta: f64, kappa: f64) -> Arc<dyn Fn(f64) -> CMatrix + Send + Sync> {
    Arc::new(move |q: f64| {
        let phi = kappa * q;
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        CMatrix::from_column_slice(2, 1, &[C64::new(c, 0.0), C64::from_polar(s, phi)])
    })
}

/// Registry entries for `adiaband list-models`.
pub fn model_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("landau-zener", "H(t) = (tanh(t) sz + delta sx)/2; params: delta, t0, t1, band"),
        ("rotating-field", "H(t) = (delta/2) n(t).sigma, n precessing at polar angle theta; params: delta, theta, omega, band"),
        ("two-channel-bo", "V(q) = a tanh(q) sz + b sx (+ c(q) 1); params: a, b, band"),
        ("winding-bo", "V(q) = delta d(q).sigma with d winding at polar angle theta, wavenumber kappa"),
        ("quadratic-dispersion", "E0(p) = |p|^2 / (2 mass) with uniform B; params: mass, b, charge"),
        ("relativistic-dispersion", "E0(p) = sqrt(1 + |p|^2) - 1 with uniform B; params: b, charge"),
    ]
}
