use thiserror::Error;

/// Errors surfaced by the numerical machinery.
///
/// Numerical failures (gap collapse, tracking ambiguity, tolerance breaches)
/// are kept distinct from configuration and I/O problems so the CLI can map
/// them onto its exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e} (relative to spectral norm)")]
    NonHermitian { defect: f64, tol: f64 },

    #[error("eigendecomposition failed: {0}")]
    Decomposition(String),

    #[error("band selection does not form a single degeneracy cluster ({0})")]
    BandSplit(String),

    #[error("spectral gap {gap:.3e} below g_min {g_min:.3e} at parameter {at}")]
    GapCollapse { gap: f64, g_min: f64, at: String },

    #[error("band tracking ambiguous: smallest overlap singular value {sigma:.3} <= 0.5 between samples {k} and {}; refine the sampling", k + 1)]
    AmbiguousTracking { sigma: f64, k: usize },

    #[error("ODE tolerance not met within step budget (t = {t:.6}, {steps} steps)")]
    ToleranceNotMet { t: f64, steps: usize },

    #[error("aliasing detected: {0}")]
    Aliasing(String),

    #[error("boundary contamination: mass {mass:.3e} in the outer {frac:.0}% of the box exceeds {tol:.1e}")]
    BoundaryContamination { mass: f64, frac: f64, tol: f64 },

    #[error("step size too large: step-halving disagreement {disagreement:.3e} above tolerance {tol:.3e}")]
    StepTooLarge { disagreement: f64, tol: f64 },

    #[error("signal too short or non-oscillatory: {0}")]
    BadSignal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown model '{0}'")]
    UnknownModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code classification: 1 validation, 2 numerical, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UnknownModel(_) | Error::InvalidInput(_) => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}
