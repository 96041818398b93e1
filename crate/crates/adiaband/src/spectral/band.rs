//! Band selection, projectors, gaps, and the reduced resolvent.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::spectral::decomposition::SpectralDecomposition;

/// A contiguous, isolated group of `multiplicity` eigenvalues starting at
/// index `first`, with the minimum gap the caller is willing to tolerate.
#[derive(Debug, Clone, Copy)]
pub struct BandSelection {
    pub first: usize,
    pub multiplicity: usize,
    pub g_min: f64,
}

impl BandSelection {
    pub fn new(first: usize, multiplicity: usize, g_min: f64) -> Self {
        BandSelection { first, multiplicity, g_min }
    }

    /// Lowest band of multiplicity m.
    pub fn lowest(multiplicity: usize, g_min: f64) -> Self {
        BandSelection { first: 0, multiplicity, g_min }
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.first..self.first + self.multiplicity
    }
}

/// Check that the selected indices form exactly one degeneracy cluster.
fn validate_cluster(dec: &SpectralDecomposition, band: &BandSelection) -> Result<()> {
    let r = band.range();
    if r.end > dec.dim() {
        return Err(Error::InvalidInput(format!(
            "band {:?} out of range for dimension {}",
            r,
            dec.dim()
        )));
    }
    let covered = dec
        .clusters
        .iter()
        .any(|c| c.start <= r.start && r.end <= c.end && (c.start == r.start && c.end == r.end));
    if !covered {
        // Allow the band to be a union of whole clusters, as long as it does
        // not cut through one; multiplicity change shows up as a cut.
        let cuts = dec.clusters.iter().any(|c| {
            (r.start > c.start && r.start < c.end) || (r.end > c.start && r.end < c.end)
        });
        if cuts {
            return Err(Error::BandSplit(format!(
                "selection {:?} cuts through a degeneracy cluster (clusters {:?})",
                r, dec.clusters
            )));
        }
    }
    Ok(())
}

/// Orthogonal projector onto the selected band.
pub fn band_projector(dec: &SpectralDecomposition, band: &BandSelection) -> Result<CMatrix> {
    validate_cluster(dec, band)?;
    Ok(dec.projector_for(band.range()))
}

/// Mean eigenvalue of the selected cluster.
pub fn band_energy(dec: &SpectralDecomposition, band: &BandSelection) -> f64 {
    let r = band.range();
    let m = r.len() as f64;
    dec.eigenvalues[r].iter().sum::<f64>() / m
}

/// Distance from the band energy to the nearest eigenvalue outside the band.
pub fn gap(dec: &SpectralDecomposition, band: &BandSelection) -> f64 {
    let e = band_energy(dec, band);
    let r = band.range();
    dec.eigenvalues
        .iter()
        .enumerate()
        .filter(|(k, _)| !r.contains(k))
        .map(|(_, &lam)| (lam - e).abs())
        .fold(f64::INFINITY, f64::min)
}

/// The operator (H - E)^{-1} (1 - P): zero on range(P), inverse of H - E on
/// the orthogonal complement.
///
/// Fails when an eigenvalue of H restricted to range(1-P) comes within
/// `g_min` of E.
pub fn reduced_resolvent(h: &CMatrix, e: f64, p: &CMatrix, g_min: f64) -> Result<CMatrix> {
    let n = h.nrows();
    // Orthonormal basis of range(1 - P) from the spectral decomposition of P.
    let eig = hermitian_eigen(p);
    let mut comp_cols: Vec<usize> = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam < 0.5 {
            comp_cols.push(k);
        }
    }
    let nc = comp_cols.len();
    if nc == 0 {
        return Ok(CMatrix::zeros(n, n));
    }
    let mut basis = CMatrix::zeros(n, nc);
    for (j, &k) in comp_cols.iter().enumerate() {
        basis.set_column(j, &eig.vectors.column(k));
    }
    // Restrict H - E to the complement and invert spectrally.
    let mut m = basis.adjoint() * h * &basis;
    for i in 0..nc {
        m[(i, i)] -= C64::new(e, 0.0);
    }
    let meig = hermitian_eigen(&m);
    let min_dist = meig.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    if min_dist < g_min {
        return Err(Error::GapCollapse { gap: min_dist, g_min, at: format!("E = {e}") });
    }
    let mut inv = CMatrix::zeros(nc, nc);
    for k in 0..nc {
        let v = meig.vectors.column(k);
        inv += v * v.adjoint() * C64::new(1.0 / meig.values[k], 0.0);
    }
    Ok(&basis * inv * basis.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::spectral::decomposition::decompose;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

    fn diag(vals: &[f64]) -> CMatrix {
        let n = vals.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(vals[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    #[test]
    fn sigma_z_lowest_band_projector() {
        let h = diag(&[1.0, -1.0]);
        let dec = decompose(&h, 1e-8).unwrap();
        let p = band_projector(&dec, &BandSelection::lowest(1, 0.1)).unwrap();
        // Lowest eigenvalue is -1; its eigenvector is e_2 in the original basis.
        assert_abs_diff_eq!(p[(1, 1)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[(0, 0)].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rank_two_projector() {
        let h = diag(&[0.0, 0.0, 5.0]);
        let dec = decompose(&h, 1e-8).unwrap();
        let band = BandSelection::new(0, 2, 0.1);
        let p = band_projector(&dec, &band).unwrap();
        assert_abs_diff_eq!(p.trace().re, 2.0, epsilon = 1e-12);
        assert!((&p * &p - &p).norm() < 1e-12);
        assert!((&p - p.adjoint()).norm() < 1e-12);
        // Spans the first two axes.
        assert_abs_diff_eq!(p[(2, 2)].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn band_split_detected() {
        let h = diag(&[0.0, 1.0, 2.0]);
        let dec = decompose(&h, 1e-8).unwrap();
        // Selecting one index of what the caller believes is a doubly
        // degenerate band is fine here (clusters are singletons), but cutting
        // a genuine cluster must error.
        let h2 = diag(&[0.0, 0.0, 2.0]);
        let dec2 = decompose(&h2, 1e-8).unwrap();
        assert!(band_projector(&dec2, &BandSelection::new(1, 2, 0.1)).is_err());
        assert!(band_projector(&dec, &BandSelection::new(0, 1, 0.1)).is_ok());
    }

    #[test]
    fn gap_examples() {
        let dec = decompose(&diag(&[1.0, -1.0]), 1e-8).unwrap();
        assert_abs_diff_eq!(gap(&dec, &BandSelection::lowest(1, 0.1)), 2.0, epsilon = 1e-12);

        let dec = decompose(&diag(&[0.0, 0.5, 3.0]), 1e-8).unwrap();
        assert_abs_diff_eq!(gap(&dec, &BandSelection::lowest(1, 0.1)), 0.5, epsilon = 1e-12);

        // Landau-Zener matrix (t sz + d sx)/2 at t = 0, d = 0.5: eigenvalues +-0.25.
        let lz = CMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0), C64::new(0.25, 0.0),
            C64::new(0.25, 0.0), C64::new(0.0, 0.0),
        ]);
        let dec = decompose(&lz, 1e-8).unwrap();
        assert_abs_diff_eq!(gap(&dec, &BandSelection::lowest(1, 0.1)), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn reduced_resolvent_examples() {
        // H = sigma_z, E = -1, P projects on the lower eigenvector:
        // R = diag(0, 1/2) in the eigenbasis ordering (ascending).
        let h = diag(&[1.0, -1.0]);
        let dec = decompose(&h, 1e-8).unwrap();
        let band = BandSelection::lowest(1, 0.1);
        let p = band_projector(&dec, &band).unwrap();
        let r = reduced_resolvent(&h, -1.0, &p, 0.1).unwrap();
        // Complement is e_1 (eigenvalue +1): R = (1 - (-1))^{-1} = 1/2 there.
        assert_abs_diff_eq!(r[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r[(1, 1)].re, 0.0, epsilon = 1e-12);

        let h = diag(&[0.0, 1.0, 4.0]);
        let p = diag(&[1.0, 0.0, 0.0]);
        let r = reduced_resolvent(&h, 0.0, &p, 0.1).unwrap();
        assert_abs_diff_eq!(r[(0, 0)].re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[(1, 1)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[(2, 2)].re, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn resolvent_identity_random() {
        // Oracle: (H - E) R = 1 - P for spectral P.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw = CMatrix::from_fn(5, 5, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let h = &raw + raw.adjoint();
        let dec = decompose(&h, 0.0).unwrap();
        let band = BandSelection::lowest(1, 1e-6);
        let p = band_projector(&dec, &band).unwrap();
        let e = dec.eigenvalues[0];
        let r = reduced_resolvent(&h, e, &p, 1e-6).unwrap();
        let lhs = {
            let mut he = h.clone();
            for i in 0..5 {
                he[(i, i)] -= C64::new(e, 0.0);
            }
            he * &r
        };
        let rhs = identity(5) - &p;
        assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + r.norm()));
        assert!((&r * &p).norm() <= 1e-10);
        assert!((&p * &r).norm() <= 1e-10);
    }

    #[test]
    fn resolvent_gap_failure() {
        let h = diag(&[0.0, 1e-9, 4.0]);
        let p = diag(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            reduced_resolvent(&h, 0.0, &p, 1e-6),
            Err(Error::GapCollapse { .. })
        ));
    }
}
