use thiserror::Error;

/// Everything that can go wrong in the laboratory.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("tolerance below grid resolution: tol = {tol} < h = {h}")]
    ToleranceBelowResolution { tol: f64, h: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("mask format: {0}")]
    MaskFormat(String),

    #[error("eigensolver did not converge: residual {residual:.3e} (target {target:.3e})")]
    NonConvergence { residual: f64, target: f64 },

    #[error("dense eigensolver cap exceeded: n = {n} > {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("spectrum is complete only below {complete_below}, requested cutoff {requested}")]
    IncompleteSpectrum { requested: f64, complete_below: f64 },

    #[error("eigenvectors are required but were not computed")]
    MissingEigenvectors,

    #[error("quadrature disagreement: lift {lift} vs direct {direct}")]
    QuadratureMismatch { lift: f64, direct: f64 },

    #[error("identity residual {residual:.3e} exceeds {threshold:.3e}")]
    IdentityResidual { residual: f64, threshold: f64 },

    #[error("bound violation: {0}")]
    BoundViolation(String),

    #[error("not a projection: {0}")]
    NotProjection(String),

    #[error("kernel truncation radius {radius} does not fit in the extended grid")]
    TruncationExceedsTorus { radius: f64 },

    #[error("negative high-energy mass {0:.3e}: kernel quadrature too coarse")]
    NegativeMass(f64),

    #[error("cutoff {lambda} beyond the validity cap {cap}")]
    BeyondCap { lambda: f64, cap: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("linear algebra: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabError {
    /// Process exit status: 2 bound violation, 3 numerical failure, 4 configuration.
    pub fn exit_code(&self) -> i32 {
        use LabError::*;
        match self {
            BoundViolation(_) => 2,
            NonConvergence { .. }
            | QuadratureMismatch { .. }
            | IdentityResidual { .. }
            | NegativeMass(_)
            | Linalg(_)
            | TruncationExceedsTorus { .. }
            | IncompleteSpectrum { .. }
            | MissingEigenvectors => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
