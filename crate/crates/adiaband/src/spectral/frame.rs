//! Gauge-fixed smooth eigenframes along a parameter path.
//!
//! The band is tracked between consecutive samples by maximal overlap, never
//! by eigenvalue index; the default gauge is parallel transport, built from
//! the unitary polar factor of consecutive frame overlaps.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{polar_unitary, CMatrix};
use crate::spectral::band::{band_energy, gap, BandSelection};
use crate::spectral::decomposition::{decompose, SpectralDecomposition};
use crate::spectral::family::TimeFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugePolicy {
    ParallelTransport,
    ModelSupplied,
}

/// Orthonormal band frames on an ordered sample grid.
pub struct SmoothFrame {
    pub samples: Vec<f64>,
    /// Per-sample n_f x m frame matrices.
    pub frames: Vec<CMatrix>,
    /// Per-sample band energy (mean of the cluster).
    pub energies: Vec<f64>,
    /// Per-sample gap to the rest of the spectrum.
    pub gaps: Vec<f64>,
    pub policy: GaugePolicy,
}

impl SmoothFrame {
    pub fn multiplicity(&self) -> usize {
        self.frames[0].ncols()
    }

    /// Band projector at sample k.
    pub fn projector(&self, k: usize) -> CMatrix {
        &self.frames[k] * self.frames[k].adjoint()
    }

    /// Index of the sample closest to t (samples are uniform).
    pub fn nearest_sample(&self, t: f64) -> usize {
        let n = self.samples.len();
        let dt = self.samples[1] - self.samples[0];
        (((t - self.samples[0]) / dt).round() as isize).clamp(0, n as isize - 1) as usize
    }
}

/// Extract the band frame from a decomposition: the cluster whose subspace
/// has maximal overlap with `previous`, or the band's index range when no
/// previous frame exists.
fn band_columns(dec: &SpectralDecomposition, band: &BandSelection) -> CMatrix {
    let n = dec.dim();
    let m = band.multiplicity;
    let mut v = CMatrix::zeros(n, m);
    for (j, k) in band.range().enumerate() {
        v.set_column(j, &dec.eigenvectors.column(k));
    }
    v
}

/// Candidate contiguous index windows of width m, scored by overlap with the
/// previous frame. Returns (start, smallest singular value of the overlap).
fn best_overlap_window(
    dec: &SpectralDecomposition,
    m: usize,
    previous: &CMatrix,
) -> (usize, f64) {
    let n = dec.dim();
    let mut best = (0usize, -1.0f64);
    for start in 0..=(n - m) {
        let mut v = CMatrix::zeros(n, m);
        for j in 0..m {
            v.set_column(j, &dec.eigenvectors.column(start + j));
        }
        let overlap = previous.adjoint() * &v;
        let svd = overlap.svd(false, false);
        let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin > best.1 {
            best = (start, smin);
        }
    }
    best
}

/// Build a smooth frame for `band` along `samples`.
///
/// Parallel transport: each frame is the previous frame transported by the
/// unitary polar factor of the overlap. Model supplied: frames come from the
/// family's frame map and are validated against the band projector.
pub fn smooth_frame(
    family: &TimeFamily,
    band: &BandSelection,
    samples: &[f64],
    gauge: GaugePolicy,
) -> Result<SmoothFrame> {
    assert!(samples.len() >= 2, "need at least two samples");
    let m = band.multiplicity;
    let mut frames = Vec::with_capacity(samples.len());
    let mut energies = Vec::with_capacity(samples.len());
    let mut gaps = Vec::with_capacity(samples.len());

    match gauge {
        GaugePolicy::ModelSupplied => {
            let frame_fn = family
                .frame
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("model does not supply a frame".into()))?;
            for (k, &t) in samples.iter().enumerate() {
                let h = family.eval(t)?;
                let dec = decompose(&h, 0.0)?;
                let g = gap(&dec, band);
                if g < band.g_min {
                    return Err(Error::GapCollapse { gap: g, g_min: band.g_min, at: format!("t = {t}") });
                }
                let phi = frame_fn(t);
                // Validate span against the spectral projector.
                let p_spec = dec.projector_for(nearest_band_range(&dec, band, &phi));
                let span_defect = (&phi * phi.adjoint() - &p_spec).norm();
                if span_defect > 1e-8 {
                    return Err(Error::InvalidInput(format!(
                        "model frame does not span the band projector at t = {t} (defect {span_defect:.3e})"
                    )));
                }
                let ortho = (phi.adjoint() * &phi - CMatrix::identity(m, m)).norm();
                if ortho > 1e-10 {
                    return Err(Error::InvalidInput(format!(
                        "model frame columns not orthonormal at t = {t} (defect {ortho:.3e})"
                    )));
                }
                energies.push(band_energy_for_frame(&dec, &phi));
                gaps.push(g);
                frames.push(phi);
                let _ = k;
            }
        }
        GaugePolicy::ParallelTransport => {
            for (k, &t) in samples.iter().enumerate() {
                let h = family.eval(t)?;
                let dec = decompose(&h, 0.0)?;
                let (start, columns) = if k == 0 {
                    (band.first, band_columns(&dec, band))
                } else {
                    let prev: &CMatrix = &frames[k - 1];
                    let (start, smin) = best_overlap_window(&dec, m, prev);
                    if smin <= 0.5 {
                        return Err(Error::AmbiguousTracking { sigma: smin, k: k - 1 });
                    }
                    let mut v = CMatrix::zeros(dec.dim(), m);
                    for j in 0..m {
                        v.set_column(j, &dec.eigenvectors.column(start + j));
                    }
                    (start, v)
                };
                let window = BandSelection::new(start, m, band.g_min);
                let g = gap(&dec, &window);
                if g < band.g_min {
                    return Err(Error::GapCollapse { gap: g, g_min: band.g_min, at: format!("t = {t}") });
                }
                let phi = if k == 0 {
                    columns
                } else {
                    // Transport: Phi_k = V W with W the unitary polar factor
                    // of V^dagger Phi_{k-1}.
                    let w = polar_unitary(&(columns.adjoint() * &frames[k - 1]));
                    &columns * w
                };
                energies.push(band_energy(&dec, &window));
                gaps.push(g);
                frames.push(phi);
            }
        }
    }
    Ok(SmoothFrame { samples: samples.to_vec(), frames, energies, gaps, policy: gauge })
}

/// Band energy read off through a frame: mean of <phi|H phi> diagonal, which
/// equals the cluster mean when phi spans an eigencluster.
fn band_energy_for_frame(dec: &SpectralDecomposition, phi: &CMatrix) -> f64 {
    let h = dec.reconstruct();
    let hm = phi.adjoint() * h * phi;
    let m = phi.ncols();
    (0..m).map(|i| hm[(i, i)].re).sum::<f64>() / m as f64
}

/// The index range of the cluster best matching a supplied frame.
fn nearest_band_range(
    dec: &SpectralDecomposition,
    band: &BandSelection,
    phi: &CMatrix,
) -> std::ops::Range<usize> {
    let m = phi.ncols();
    let (start, _) = best_overlap_window(dec, m, phi);
    let _ = band;
    start..start + m
}

/// Derivative of the frame at sample k.
///
/// The off-band component is gauge independent and computed through the
/// eigenvector perturbation identity (1-P) dphi = -(H-E)^{-1} (1-P) dH phi.
/// The in-band block comes from the gauge policy: identically zero under
/// parallel transport, central differences of the stored frame otherwise
/// (antisymmetrized so that d/dt <phi_a|phi_b> = 0 holds).
pub fn frame_derivative(
    family: &TimeFamily,
    band: &BandSelection,
    frame: &SmoothFrame,
    k: usize,
) -> Result<CMatrix> {
    use crate::spectral::band::reduced_resolvent;
    let t = frame.samples[k];
    let h = family.eval(t)?;
    let phi = &frame.frames[k];
    let p = phi * phi.adjoint();
    let e = frame.energies[k];
    let r = reduced_resolvent(&h, e, &p, band.g_min)?;
    let hdot = family.derivative(t);
    let off_band = -(&r * &hdot * phi);

    let in_band = match frame.policy {
        GaugePolicy::ParallelTransport => CMatrix::zeros(phi.nrows(), phi.ncols()),
        GaugePolicy::ModelSupplied => {
            let dt = frame.samples[1] - frame.samples[0];
            let dphi = crate::linalg::index_tangent(&frame.frames, k) / C64::new(dt, 0.0);
            let kmat = phi.adjoint() * dphi;
            let anti = (&kmat - kmat.adjoint()) * C64::new(0.5, 0.0);
            phi * anti
        }
    };
    Ok(off_band + in_band)
}

/// In-band derivative block <phi_a | dphi_b> at sample k (the Berry term).
pub fn in_band_block(family: &TimeFamily, band: &BandSelection, frame: &SmoothFrame, k: usize) -> Result<CMatrix> {
    let d = frame_derivative(family, band, frame, k)?;
    Ok(frame.frames[k].adjoint() * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sigma() -> [CMatrix; 3] {
        [
            CMatrix::from_row_slice(2, 2, &[
                C64::new(0.0, 0.0), C64::new(1.0, 0.0),
                C64::new(1.0, 0.0), C64::new(0.0, 0.0),
            ]),
            CMatrix::from_row_slice(2, 2, &[
                C64::new(0.0, 0.0), C64::new(0.0, -1.0),
                C64::new(0.0, 1.0), C64::new(0.0, 0.0),
            ]),
            CMatrix::from_row_slice(2, 2, &[
                C64::new(1.0, 0.0), C64::new(0.0, 0.0),
                C64::new(0.0, 0.0), C64::new(-1.0, 0.0),
            ]),
        ]
    }

    /// H(t) = (delta/2) n(t).sigma with n precessing at polar angle theta.
    fn rotating_field(delta: f64, theta: f64, omega: f64) -> TimeFamily {
        let [sx, sy, sz] = sigma();
        TimeFamily::new(2, (0.0, 1.0), move |t| {
            let phi = omega * t;
            let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            (&sx * C64::new(n[0], 0.0) + &sy * C64::new(n[1], 0.0) + &sz * C64::new(n[2], 0.0))
                * C64::new(delta / 2.0, 0.0)
        })
    }

    #[test]
    fn constant_family_constant_frame() {
        let [_, _, sz] = sigma();
        let fam = TimeFamily::new(2, (0.0, 1.0), move |_| sz.clone());
        let samples: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let band = BandSelection::lowest(1, 0.5);
        let frame = smooth_frame(&fam, &band, &samples, GaugePolicy::ParallelTransport).unwrap();
        for k in 1..frame.frames.len() {
            assert!((&frame.frames[k] - &frame.frames[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn holonomy_of_rotating_field_loop() {
        // Oracle: parallel transport around one closed loop of the aligned
        // band picks up exp(-i * solid angle / 2), solid angle 2 pi (1 - cos theta).
        let theta = PI / 3.0;
        let fam = rotating_field(1.0, theta, 2.0 * PI);
        let n = 10_000;
        let samples: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let band = BandSelection::new(1, 1, 0.5); // aligned band, energy +delta/2
        let frame = smooth_frame(&fam, &band, &samples, GaugePolicy::ParallelTransport).unwrap();
        let overlap = (frame.frames[0].adjoint() * &frame.frames[n])[(0, 0)];
        let expected_phase = -PI * (1.0 - theta.cos());
        let got = overlap.arg();
        let diff = (got - expected_phase + PI).rem_euclid(2.0 * PI) - PI;
        assert!(diff.abs() < 1e-6, "holonomy {got} vs {expected_phase}");
        assert!((overlap.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn landau_zener_span_residual() {
        let [sx, _, sz] = sigma();
        let delta = 0.5;
        let fam = TimeFamily::new(2, (-10.0, 10.0), move |t| {
            (&sz * C64::new(t.tanh(), 0.0) + &sx * C64::new(delta, 0.0)) * C64::new(0.5, 0.0)
        });
        let samples: Vec<f64> = (0..=2000).map(|i| -10.0 + 20.0 * i as f64 / 2000.0).collect();
        let band = BandSelection::lowest(1, 0.2);
        let frame = smooth_frame(&fam, &band, &samples, GaugePolicy::ParallelTransport).unwrap();
        for k in (0..=2000).step_by(97) {
            let h = fam.eval(frame.samples[k]).unwrap();
            let dec = decompose(&h, 0.0).unwrap();
            let p = dec.projector_for(0..1);
            let defect = (frame.projector(k) - p).norm();
            assert!(defect <= 1e-8, "span defect {defect:e} at sample {k}");
        }
    }

    #[test]
    fn frame_derivative_orthonormality_identity() {
        // d/dt <phi_a|phi_b> = 0: the in-band block must be antihermitian and
        // the off-band block cannot contribute.
        let fam = rotating_field(1.0, PI / 3.0, 2.0 * PI);
        let n = 2000;
        let samples: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let band = BandSelection::new(1, 1, 0.5);
        let frame = smooth_frame(&fam, &band, &samples, GaugePolicy::ParallelTransport).unwrap();
        for &k in &[10usize, 500, 1500] {
            let d = frame_derivative(&fam, &band, &frame, k).unwrap();
            let sym = frame.frames[k].adjoint() * &d + d.adjoint() * &frame.frames[k];
            assert!(sym.norm() < 1e-7, "symmetry defect {:e}", sym.norm());
        }
    }

    #[test]
    fn frame_derivative_off_band_magnitude() {
        // For the rotating field at polar angle theta the exact eigenvector
        // derivative has off-band norm |omega sin(theta)| / 2.
        let theta = PI / 3.0;
        let omega = 2.0 * PI;
        let fam = rotating_field(1.0, theta, omega);
        let n = 4000;
        let samples: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let band = BandSelection::new(1, 1, 0.5);
        let frame = smooth_frame(&fam, &band, &samples, GaugePolicy::ParallelTransport).unwrap();
        let k = n / 2;
        let d = frame_derivative(&fam, &band, &frame, k).unwrap();
        let p = frame.projector(k);
        let off = (CMatrix::identity(2, 2) - p) * &d;
        let expected = omega * theta.sin() / 2.0;
        assert!((off.norm() - expected).abs() < 1e-6, "off-band norm {} vs {}", off.norm(), expected);
    }

    #[test]
    fn ambiguous_tracking_rejected() {
        // Two coarse samples across a basis permutation: the m = 2 band
        // subspace at t = 1 shares only one direction with any contiguous
        // eigenvalue window, so every candidate overlap has a zero singular
        // value and tracking must refuse rather than silently reattach.
        let diag0 = [0.0, 0.1, 5.0, 5.1];
        let h0 = CMatrix::from_fn(4, 4, |i, j| {
            if i == j { C64::new(diag0[i], 0.0) } else { C64::new(0.0, 0.0) }
        });
        // Same spectrum, but the eigenvectors of 0.1 and 5.0 swapped.
        let diag1 = [0.0, 5.0, 0.1, 5.1];
        let h1 = CMatrix::from_fn(4, 4, |i, j| {
            if i == j { C64::new(diag1[i], 0.0) } else { C64::new(0.0, 0.0) }
        });
        let fam = TimeFamily::new(4, (0.0, 1.0), move |t| if t < 0.5 { h0.clone() } else { h1.clone() });
        let band = BandSelection::new(0, 2, 0.5);
        let res = smooth_frame(&fam, &band, &[0.0, 1.0], GaugePolicy::ParallelTransport);
        assert!(matches!(res, Err(Error::AmbiguousTracking { .. })), "expected ambiguity, got ok={}", res.is_ok());
    }
}
