//! Dense complex linear-algebra kernels.
//!
//! Everything downstream works on small ("desk scale") matrices, so the
//! kernels favor transparent, deterministic algorithms over tuned ones:
//! row-major storage, partial-pivoting LU with an explicit singularity
//! flag, spectral norms by power iteration on `A* A`, and seeded random
//! unitaries from a splitmix generator plus Householder QR.

mod lu;
mod matrix;
mod norms;
mod random;

pub use lu::{lu_factor, LuFactors};
pub use matrix::ComplexMatrix;
pub use norms::{rcond_estimate, spectral_norm, spectral_norm_or_frobenius};
pub use random::{random_gaussian, random_unitary, SplitMix64};

use thiserror::Error;

/// Errors produced by the linear-algebra kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    /// A solve or inverse was requested from a factorization whose
    /// singularity flag is set.
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    /// Power iteration failed to reach the requested tolerance.
    #[error("norm estimate did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
}
