//! Matrix polynomials `A(x) = A_0 + A_1 x + ... + A_n x^n` and the handful
//! of evaluations the solvers need: Horner evaluation, derivatives, the
//! norm majorant `w(x) = sum ||A_i|| x^i`, and the trace-based Newton
//! correction `N(x) = 1 / trace(A(x)^{-1} A'(x))`.

use num_complex::Complex64;
use thiserror::Error;

use crate::kernels::{
    lu_factor, rcond_estimate, spectral_norm_or_frobenius, ComplexMatrix,
};

/// Below this magnitude the trace of `A^{-1} A'` is treated as vanished;
/// its reciprocal would overflow into the Aberth update otherwise.
const TRACE_UNDERFLOW: f64 = 1e-290;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatPolyError {
    /// Every coefficient block is identically zero.
    #[error("all coefficient blocks are zero")]
    ZeroPolynomial,
    /// Coefficient blocks are not square matrices of one common size.
    #[error("coefficient blocks must be square and of equal size")]
    DimensionMismatch,
}

/// A matrix polynomial in normalized form: the stored constant and leading
/// blocks are nonzero matrices. Zero blocks stripped from the low end are
/// remembered in `stripped_power`; each contributes `m` exact zero
/// eigenvalues.
#[derive(Debug, Clone)]
pub struct MatrixPolynomial {
    m: usize,
    coeffs: Vec<ComplexMatrix>,
    stripped_power: usize,
}

/// The scalar majorant weights `w_i = ||A_i||_2`. When the spectral-norm
/// iteration fails for a block, the (always valid) Frobenius bound is used
/// instead and the index recorded.
#[derive(Debug, Clone)]
pub struct NormMajorant {
    pub weights: Vec<f64>,
    pub frobenius_fallback: Vec<usize>,
}

/// One Newton correction evaluation.
#[derive(Debug, Clone, Copy)]
pub struct NewtonCorrection {
    /// `1 / trace(A(x)^{-1} A'(x))`; zero when `A(x)` is singular or the
    /// trace underflowed.
    pub value: Complex64,
    /// Reciprocal condition estimate of `A(x)`; zero when singular.
    pub rcond: f64,
    /// Set when the trace magnitude fell below the underflow guard; the
    /// correction is reported as zero but must not be read as convergence.
    pub trace_underflow: bool,
}

impl MatrixPolynomial {
    /// Builds a polynomial from raw coefficient blocks `[A_0, ..., A_n]`,
    /// stripping zero blocks from both ends.
    pub fn normalize(raw: Vec<ComplexMatrix>) -> Result<Self, MatPolyError> {
        if raw.is_empty() {
            return Err(MatPolyError::ZeroPolynomial);
        }
        let m = raw[0].rows();
        for a in &raw {
            if !a.is_square() || a.rows() != m || m == 0 {
                return Err(MatPolyError::DimensionMismatch);
            }
        }
        let first_nonzero = match raw.iter().position(|a| !a.is_zero()) {
            Some(i) => i,
            None => return Err(MatPolyError::ZeroPolynomial),
        };
        let last_nonzero = raw.iter().rposition(|a| !a.is_zero()).unwrap();
        let coeffs: Vec<ComplexMatrix> = raw[first_nonzero..=last_nonzero].to_vec();
        Ok(MatrixPolynomial {
            m,
            coeffs,
            stripped_power: first_nonzero,
        })
    }

    /// Block size `m`.
    pub fn size(&self) -> usize {
        self.m
    }

    /// Degree `n` of the normalized polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Number of zero blocks stripped from the low end.
    pub fn stripped_power(&self) -> usize {
        self.stripped_power
    }

    /// Coefficient block of `x^i` (of the normalized polynomial).
    pub fn coeff(&self, i: usize) -> &ComplexMatrix {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// The reversed polynomial `x^n A(1/x)`, whose eigenvalues are the
    /// reciprocals of this polynomial's (with zero and infinity swapped).
    pub fn reversal(&self) -> MatrixPolynomial {
        let mut rev = self.coeffs.clone();
        rev.reverse();
        MatrixPolynomial {
            m: self.m,
            coeffs: rev,
            stripped_power: 0,
        }
    }

    /// Horner evaluation of `A(x)`.
    pub fn evaluate(&self, x: Complex64) -> ComplexMatrix {
        let n = self.degree();
        let mut acc = self.coeffs[n].clone();
        for i in (0..n).rev() {
            acc = acc.scale(x).add(&self.coeffs[i]);
        }
        acc
    }

    /// Horner evaluation of the derivative `A'(x)`.
    pub fn evaluate_derivative(&self, x: Complex64) -> ComplexMatrix {
        let n = self.degree();
        if n == 0 {
            return ComplexMatrix::zeros(self.m, self.m);
        }
        let mut acc = self.coeffs[n].scale(Complex64::new(n as f64, 0.0));
        for i in (1..n).rev() {
            let scaled = self.coeffs[i].scale(Complex64::new(i as f64, 0.0));
            acc = acc.scale(x).add(&scaled);
        }
        acc
    }

    /// Spectral-norm weights of the coefficient blocks.
    pub fn norm_majorant(&self) -> NormMajorant {
        let mut weights = Vec::with_capacity(self.coeffs.len());
        let mut frobenius_fallback = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            let (w, exact) = spectral_norm_or_frobenius(a);
            if !exact {
                frobenius_fallback.push(i);
            }
            weights.push(w);
        }
        NormMajorant {
            weights,
            frobenius_fallback,
        }
    }

    /// Norms `c_i = ||A_k^{-1} A_i||` of the coefficients relative to block
    /// `k`, with `c_k = 1`. Returns `None` when `A_k` is singular (or zero).
    ///
    /// These are the coefficients of the Pellet equation at index `k` and
    /// of the `u/v` radius bounds, so both consumers see identical values.
    pub fn relative_norms(&self, k: usize) -> Option<Vec<f64>> {
        let ak = &self.coeffs[k];
        let f = lu_factor(ak);
        if f.is_singular() {
            return None;
        }
        let mut c = Vec::with_capacity(self.coeffs.len());
        for (i, ai) in self.coeffs.iter().enumerate() {
            if i == k {
                c.push(1.0);
            } else if ai.is_zero() {
                c.push(0.0);
            } else {
                let x = f.solve_matrix(ai).ok()?;
                let (norm, _) = spectral_norm_or_frobenius(&x);
                c.push(norm);
            }
        }
        Some(c)
    }

    /// Evaluates the Newton correction `N(x) = 1/trace(A(x)^{-1} A'(x))`
    /// together with a reciprocal condition estimate of `A(x)`.
    ///
    /// By the Jacobi determinant identity the trace equals
    /// `det'(A(x)) / det(A(x))`, so `N` is the Newton step of the scalar
    /// characteristic polynomial without ever forming it.
    pub fn newton_correction(&self, x: Complex64) -> NewtonCorrection {
        let a = self.evaluate(x);
        let f = lu_factor(&a);
        if f.is_singular() {
            return NewtonCorrection {
                value: Complex64::new(0.0, 0.0),
                rcond: 0.0,
                trace_underflow: false,
            };
        }
        let (norm_a, _) = spectral_norm_or_frobenius(&a);
        let rcond = rcond_estimate(&f, norm_a);
        let da = self.evaluate_derivative(x);
        let trace = match f.solve_matrix(&da) {
            Ok(y) => y.trace(),
            Err(_) => Complex64::new(0.0, 0.0),
        };
        if trace.norm() < TRACE_UNDERFLOW {
            return NewtonCorrection {
                value: Complex64::new(0.0, 0.0),
                rcond,
                trace_underflow: true,
            };
        }
        NewtonCorrection {
            value: Complex64::new(1.0, 0.0) / trace,
            rcond,
            trace_underflow: false,
        }
    }
}

/// Convenience constructor for scalar (1x1) polynomials from complex
/// coefficients `[a_0, ..., a_n]`.
pub fn scalar_polynomial(coeffs: &[Complex64]) -> Result<MatrixPolynomial, MatPolyError> {
    MatrixPolynomial::normalize(
        coeffs
            .iter()
            .map(|&a| ComplexMatrix::from_rows(1, 1, vec![a]))
            .collect(),
    )
}
