//! Moyal consistency diagnostics for the quantization machinery.

use num_complex::Complex64 as C64;
use crate::error::Result;
use crate::linalg::{CMatrix, CVector};
use crate::weyl::grid::PositionGrid;
use crate::weyl::quantize::weyl_quantize;
use crate::weyl::symbol::{poisson_bracket, Symbol};

/// ||[Op(A), Op(B)] + i eps Op({A, B})|| for scalar symbols, measured on
/// boundary-safe band-limited test states.
///
/// With the bracket orientation {A,B} = dA/dp dB/dq - dA/dq dB/dp the leading
/// Moyal term of the commutator is [Op(A), Op(B)] = -i eps Op({A,B}) + O(eps^3)
/// (the canonical pair gives [q, p] = i eps and {q, p} = -1), so the defect
/// adds rather than subtracts the quantized bracket.
///
/// No finite-dimensional pair can satisfy the canonical commutation relation
/// on the whole grid (the commutator is traceless), and non-periodic symbols
/// seam at the box boundary; those artifacts live at the momentum-zone edge
/// and the spatial boundary, outside the sector the calculus is meant to act
/// on. The defect is therefore the largest action of the residual on a fixed
/// battery of Gaussian wavepackets spanning the interior of phase space
/// (exponentially clean in both position and momentum).
pub fn moyal_defect(a: &Symbol, b: &Symbol, grid: &PositionGrid, eps: f64) -> Result<f64> {
    assert_eq!(a.rows, 1, "moyal_defect is a scalar-symbol diagnostic");
    assert_eq!(b.rows, 1, "moyal_defect is a scalar-symbol diagnostic");
    let qa = weyl_quantize(a, grid, eps)?;
    let qb = weyl_quantize(b, grid, eps)?;
    let qbr = weyl_quantize(&poisson_bracket(a, b), grid, eps)?;
    let d = &qa.matrix * &qb.matrix - &qb.matrix * &qa.matrix + qbr.matrix * C64::new(0.0, eps);
    Ok(test_state_norm(&d, grid))
}

/// Deterministic battery of interior Gaussian wavepackets: centres on the
/// inner quarter of the box, wave numbers on the inner 30% of the dual grid,
/// width L/30 (at least 11 sigma of clearance to the boundary, so the tails
/// reaching the box seam stay below 1e-13).
pub fn test_state_battery(grid: &PositionGrid) -> Vec<CVector> {
    let sigma = grid.length / 30.0;
    let centres = [-0.13, -0.06, 0.0, 0.06, 0.13].map(|f| f * grid.length);
    let waves = [-0.3, -0.15, 0.0, 0.15, 0.3].map(|f| f * grid.xi_max());
    let mut battery = Vec::with_capacity(centres.len() * waves.len());
    for &q0 in &centres {
        for &xi0 in &waves {
            let mut v = CVector::from_fn(grid.n, |j, _| {
                let x = grid.x(j);
                C64::from_polar((-(x - q0).powi(2) / (4.0 * sigma * sigma)).exp(), xi0 * x)
            });
            let n = v.norm();
            v /= C64::new(n, 0.0);
            battery.push(v);
        }
    }
    battery
}

/// max over the test battery of ||D psi|| (psi normalized).
pub fn test_state_norm(d: &CMatrix, grid: &PositionGrid) -> f64 {
    let n = grid.n;
    assert_eq!(d.nrows() % n, 0);
    let comps = d.nrows() / n;
    let mut worst = 0.0_f64;
    for v in test_state_battery(grid) {
        for c in 0..comps {
            let mut full = CVector::zeros(n * comps);
            for j in 0..n {
                full[j * comps + c] = v[j];
            }
            worst = worst.max((d * full).norm());
        }
    }
    worst
}
