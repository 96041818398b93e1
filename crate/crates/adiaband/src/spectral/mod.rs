//! Eigenstructure services: decomposition, band selection, gap monitoring,
//! reduced resolvents, and gauge-fixed smooth eigenframes.

pub mod band;
pub mod decomposition;
pub mod family;
pub mod frame;

pub use band::{band_energy, band_projector, gap, reduced_resolvent, BandSelection};
pub use decomposition::{decompose, default_degeneracy_tol, SpectralDecomposition};
pub use family::{PhaseSpaceFamily, TimeFamily};
pub use frame::{frame_derivative, in_band_block, smooth_frame, GaugePolicy, SmoothFrame};
