//! Discrete Laplace and Landau operators on grid domains, torus modes and
//! eigensolvers.

mod banded;
mod build;
mod eigen;
mod scalar;
mod sparse;
mod spectrum;
mod torus;

pub use banded::{BandLdl, TinyPivot};
pub use build::{
    landau_hamiltonian, landau_levels, laplacian, torus_laplacian, BoundaryCondition, DiscreteOperator, LandauParams,
    OperatorKind,
};
pub use eigen::{count_below, eigensolve, eigensolve_matrix, worst_residual, EigenOptions, EigenRequest};
pub use scalar::Scalar;
pub use sparse::SparseHermitian;
pub use spectrum::{write_spectrum_csv, Completeness, Spectrum, SpectrumMeta};
pub use torus::{frequency, mode_eigenvalue, torus_modes, Dispersion, TorusMode};

/// Cutoffs above `VALIDITY_CAP_FACTOR / h^2` are outside the range where the
/// grid dispersion tracks the continuum one.
pub const VALIDITY_CAP_FACTOR: f64 = 0.05;

pub fn validity_cap(h: f64) -> f64 {
    VALIDITY_CAP_FACTOR / (h * h)
}
