//! Grid-based Weyl quantization of matrix-valued phase-space symbols,
//! Poisson brackets, Moyal consistency diagnostics, and split-step reference
//! propagation.

pub mod bracket;
pub mod grid;
pub mod quantize;
pub mod split_step;
pub mod symbol;

pub use bracket::{moyal_defect, test_state_norm};
pub use grid::PositionGrid;
pub use quantize::{weyl_quantize, GridOperator};
pub use split_step::{GridState, SplitStepPropagator, BOUNDARY_MASS_TOL};
pub use symbol::{poisson_bracket, CoeffFn, PDecay, Symbol};
