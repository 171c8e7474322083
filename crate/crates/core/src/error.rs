use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("nonpositive density {value} at cell {index}")]
    NonPositiveDensity { index: usize, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {bound} (got {value})")]
    Precondition { bound: String, value: f64 },

    #[error("no A_set member in the search lattice satisfies {0}")]
    SearchExhausted(String),

    #[error("sampled infimum {0} is not positive")]
    NonPositiveEpsilon(f64),

    #[error("Poisson compatibility violated: outer phi_r = {residual:e} (tolerance {tolerance:e})")]
    Compatibility { residual: f64, tolerance: f64 },

    #[error("stable time step {dt:e} fell below dt_min = {dt_min:e}")]
    DtCollapse { dt: f64, dt_min: f64 },

    #[error("tridiagonal system is singular at row {row}")]
    SingularSystem { row: usize },

    #[error("initial data: {0}")]
    InitialData(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("diagnostics sink failed: {0}")]
    Sink(#[source] std::io::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
