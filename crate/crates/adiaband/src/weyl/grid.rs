//! Periodic one-dimensional position grid and its dual momentum grid.

use crate::error::{Error, Result};

/// Periodic box of length `length` with `n` points centred at the origin:
/// x_j = -L/2 + j dx, dual frequencies xi_k = (2 pi / L) k for
/// k in {-n/2, ..., n/2 - 1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionGrid {
    pub n: usize,
    pub length: f64,
}

impl PositionGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidInput(format!("grid size {n} must be even and >= 4")));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidInput("grid length must be positive".into()));
        }
        Ok(PositionGrid { n, length })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Dual grid spacing; dx * dxi = 2 pi / n.
    pub fn dxi(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    /// Signed frequency index of FFT bin b.
    pub fn k_of_bin(&self, b: usize) -> i64 {
        if b < self.n / 2 {
            b as i64
        } else {
            b as i64 - self.n as i64
        }
    }

    pub fn xi_of_bin(&self, b: usize) -> f64 {
        self.dxi() * self.k_of_bin(b) as f64
    }

    pub fn xi_max(&self) -> f64 {
        self.dxi() * (self.n / 2) as f64
    }

    /// Midpoint (x_j + x_j')/2 indexed by u = j + j' in 0..2n-1.
    pub fn midpoint(&self, u: usize) -> f64 {
        -0.5 * self.length + u as f64 * 0.5 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_consistency() {
        let g = PositionGrid::new(256, 40.0).unwrap();
        assert!((g.dx() * g.dxi() - 2.0 * std::f64::consts::PI / 256.0).abs() < 1e-15);
        assert_eq!(g.k_of_bin(0), 0);
        assert_eq!(g.k_of_bin(127), 127);
        assert_eq!(g.k_of_bin(128), -128);
        assert_eq!(g.k_of_bin(255), -1);
        assert!((g.x(0) + 20.0).abs() < 1e-14);
        assert!((g.midpoint(1) - (g.x(0) + g.x(1)) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_size_rejected() {
        assert!(PositionGrid::new(255, 40.0).is_err());
    }
}
