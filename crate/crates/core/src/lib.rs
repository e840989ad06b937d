//! Eigenvalue localization and computation for regular matrix polynomials.
//!
//! A matrix polynomial `A(x) = A_0 + A_1 x + ... + A_n x^n` with square complex
//! coefficients is *regular* when `det A(x)` is not identically zero; its
//! eigenvalues are the roots of `det A(x)`. This crate locates those
//! eigenvalues before computing them:
//!
//! * [`pellet`] solves the generalized Pellet equations
//!   `x^k = sum_{i != k} ||A_k^{-1} A_i|| x^i` to produce inclusion and
//!   exclusion annuli with exact eigenvalue counts, and sharpens them for
//!   polynomials with well-separated tropical roots.
//! * [`tropical`] builds the Newton polygon of the norm majorant
//!   `w(x) = sum ||A_i|| x^i`; its slopes (tropical roots) give cheap radius
//!   estimates and the `u/v` bounds that sandwich the Pellet roots.
//! * [`init`] turns the annuli into starting points, and [`aberth`] runs the
//!   Ehrlich-Aberth iteration with a trace-based Newton correction to
//!   compute all `m*n` eigenvalues simultaneously.
//! * [`oracle`] provides an independent check: eigenvalues of the block
//!   companion linearization via a dense Hessenberg QR solver.
//!
//! Everything is deterministic: random matrices are generated from explicit
//! seeds and repeated runs produce identical results on a given platform.

pub mod aberth;
pub mod families;
pub mod init;
pub mod kernels;
pub mod matpoly;
pub mod oracle;
pub mod pellet;
pub mod tropical;

pub use aberth::{iterate, solve, solve_observed, SolveError, SolveOptions, SolveResult, StopReason, SweepOrder};
pub use init::InitStrategy;
pub use kernels::ComplexMatrix;
pub use matpoly::MatrixPolynomial;
pub use oracle::{companion_eigenvalues, count_in_annulus, dense_eigenvalues};
pub use pellet::{annuli_report, matrix_pellet, tropical_localize};
pub use tropical::{tropical_roots, NewtonPolygon};
