//! Midpoint (Weyl) quantization of symbols on the periodic grid.
//!
//! The kernel K(x, x') = (1/2 pi) Int dxi e^{i(x-x') xi} a((x+x')/2, eps xi)
//! is discretized as a sum over the dual grid; for each of the 2n-1 midpoint
//! values the sum over frequencies is one inverse FFT, so assembly costs
//! O(n^2 log n) per matrix entry of the symbol. Symbols are evaluated
//! analytically at the midpoints, which land between grid points.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, CVector};
use crate::weyl::grid::PositionGrid;
use crate::weyl::split_step::GridState;
use crate::weyl::symbol::{PDecay, Symbol};

/// A dense operator on spinor-valued grid functions, (n * rows) x (n * cols),
/// point-major layout: row index j * rows + r.
pub struct GridOperator {
    pub grid: PositionGrid,
    pub rows: usize,
    pub cols: usize,
    pub matrix: CMatrix,
}

impl GridOperator {
    pub fn apply(&self, state: &GridState) -> GridState {
        assert_eq!(state.components, self.cols);
        GridState { grid: state.grid, components: self.rows, data: &self.matrix * &state.data }
    }

    /// exp(-i A t / eps) applied through the Hermitian eigendecomposition;
    /// exact for the grid-truncated operator.
    pub fn evolve(&self, state: &GridState, t: f64, eps: f64) -> GridState {
        assert_eq!(self.rows, self.cols);
        let eig = hermitian_eigen(&self.matrix);
        let coeffs = eig.vectors.adjoint() * &state.data;
        let phased = CVector::from_fn(coeffs.len(), |k, _| {
            coeffs[k] * C64::from_polar(1.0, -eig.values[k] * t / eps)
        });
        GridState { grid: state.grid, components: state.components, data: &eig.vectors * phased }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }
}

/// Weyl-quantize `symbol` at adiabatic parameter `eps`.
///
/// Decaying symbols are checked against the momentum cutoff: support past the
/// dual-grid edge at scale eps is reported as aliasing.
pub fn weyl_quantize(symbol: &Symbol, grid: &PositionGrid, eps: f64) -> Result<GridOperator> {
    if symbol.rows != symbol.cols && symbol.hermitian {
        return Err(Error::InvalidInput("hermitian symbols must be square".into()));
    }
    let n = grid.n;
    let d_r = symbol.rows;
    let d_c = symbol.cols;

    if symbol.decay == PDecay::Decaying {
        let p_edge = eps * grid.xi_max();
        let mut max_norm = 0.0_f64;
        let mut edge_norm = 0.0_f64;
        for j in (0..n).step_by((n / 16).max(1)) {
            let q = grid.x(j);
            max_norm = max_norm.max(symbol.eval(q, 0.0).norm());
            edge_norm = edge_norm.max(symbol.eval(q, p_edge).norm().max(symbol.eval(q, -p_edge).norm()));
        }
        if edge_norm > 1e-8 * max_norm.max(1e-300) {
            return Err(Error::Aliasing(format!(
                "symbol magnitude {edge_norm:.3e} at the momentum-grid edge |p| = {p_edge:.3} (max {max_norm:.3e})"
            )));
        }
    }

    // Spot Hermiticity checks at sampled phase-space points.
    if symbol.hermitian {
        for &(jq, bp) in &[(0usize, 0usize), (n / 3, n / 8), (2 * n / 3, n - n / 8)] {
            let a = symbol.eval(grid.x(jq), eps * grid.xi_of_bin(bp));
            let defect = (&a - a.adjoint()).norm();
            if defect > 1e-12 * a.norm().max(1e-300) {
                return Err(Error::NonHermitian { defect, tol: 1e-12 });
            }
        }
    }

    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n);

    // g[u][s] per matrix entry: (1/n) sum_b a(q_u, eps xi_b) e^{2 pi i b s / n}.
    let mut kernels: Vec<Vec<CMatrix>> = Vec::with_capacity(2 * n - 1);
    let mut buf: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; d_r * d_c];
    for u in 0..(2 * n - 1) {
        let q = grid.midpoint(u);
        for b in 0..n {
            let a = symbol.eval(q, eps * grid.xi_of_bin(b));
            for r in 0..d_r {
                for c in 0..d_c {
                    buf[r * d_c + c][b] = a[(r, c)];
                }
            }
        }
        let mut per_s: Vec<CMatrix> = vec![CMatrix::zeros(d_r, d_c); n];
        for (idx, chan) in buf.iter_mut().enumerate() {
            ifft.process(chan);
            let (r, c) = (idx / d_c, idx % d_c);
            for s in 0..n {
                per_s[s][(r, c)] = chan[s] / n as f64;
            }
        }
        kernels.push(per_s);
    }

    let mut matrix = CMatrix::zeros(n * d_r, n * d_c);
    for j in 0..n {
        for jp in 0..n {
            let u = j + jp;
            let s = (j as i64 - jp as i64).rem_euclid(n as i64) as usize;
            let block = &kernels[u][s];
            for r in 0..d_r {
                for c in 0..d_c {
                    matrix[(j * d_r + r, jp * d_c + c)] = block[(r, c)];
                }
            }
        }
    }
    Ok(GridOperator { grid: *grid, rows: d_r, cols: d_c, matrix })
}
