use num_complex::Complex64;

use super::{ComplexMatrix, KernelError, LuFactors};

const DEFAULT_TOL: f64 = 1e-12;
const DEFAULT_MAX_SWEEPS: usize = 2000;

/// Spectral norm (largest singular value) by power iteration on `A* A`.
///
/// The start vector is the all-ones vector, so repeated calls are
/// deterministic. Iteration stops when the Rayleigh estimate changes by
/// less than `1e-12` relative; failure to settle within 2000 sweeps is
/// [`KernelError::ConvergenceFailure`]. The result always satisfies the
/// Frobenius sandwich `|A|_F / sqrt(min(m,n)) <= |A|_2 <= |A|_F`.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64, KernelError> {
    spectral_norm_with(a, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)
}

/// Spectral norm with Frobenius fallback; the flag is `true` when the
/// power iteration converged and `false` when the (always valid, possibly
/// loose) Frobenius bound was substituted.
pub fn spectral_norm_or_frobenius(a: &ComplexMatrix) -> (f64, bool) {
    match spectral_norm(a) {
        Ok(v) => (v, true),
        Err(_) => (a.frobenius_norm(), false),
    }
}

pub(crate) fn spectral_norm_with(
    a: &ComplexMatrix,
    tol: f64,
    max_sweeps: usize,
) -> Result<f64, KernelError> {
    let fro = a.frobenius_norm();
    if fro == 0.0 {
        return Ok(0.0);
    }
    let min_dim = a.rows().min(a.cols()) as f64;
    let lower = fro / min_dim.sqrt();

    // Primary start: all ones. The secondary start breaks the rare case
    // where the ones vector is orthogonal to the dominant singular vector.
    let ones = vec![Complex64::new(1.0, 0.0); a.cols()];
    let skewed: Vec<Complex64> = (0..a.cols())
        .map(|j| Complex64::new(1.0 + (j as f64 + 1.0).sqrt(), 1.0 / (j as f64 + 2.0)))
        .collect();

    let mut last_err = KernelError::ConvergenceFailure { sweeps: max_sweeps };
    for start in [&ones, &skewed] {
        match power_iterate(a, start, tol, max_sweeps) {
            Ok(sigma) => {
                // A converged value below the Frobenius floor means the
                // iteration settled on a non-dominant singular pair.
                if sigma >= lower * (1.0 - 1e-9) {
                    return Ok(sigma.min(fro));
                }
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn power_iterate(
    a: &ComplexMatrix,
    start: &[Complex64],
    tol: f64,
    max_sweeps: usize,
) -> Result<f64, KernelError> {
    let mut v = start.to_vec();
    normalize(&mut v).ok_or(KernelError::ConvergenceFailure { sweeps: 0 })?;
    let mut lambda_prev = f64::NAN;
    for sweep in 1..=max_sweeps {
        let w = a.apply(&v);
        let lambda: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if lambda == 0.0 {
            // v is in the null space; a restart with another vector may
            // still find the dominant direction.
            return Err(KernelError::ConvergenceFailure { sweeps: sweep });
        }
        if !lambda_prev.is_nan() && (lambda - lambda_prev).abs() <= tol * lambda {
            return Ok(lambda.sqrt());
        }
        lambda_prev = lambda;
        v = a.apply_adjoint(&w);
        if normalize(&mut v).is_none() {
            return Err(KernelError::ConvergenceFailure { sweeps: sweep });
        }
    }
    Err(KernelError::ConvergenceFailure { sweeps: max_sweeps })
}

fn normalize(v: &mut [Complex64]) -> Option<f64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    for z in v.iter_mut() {
        *z /= norm;
    }
    Some(norm)
}

/// Reciprocal condition estimate `1 / (|A| * |A^{-1}|)` from an existing
/// factorization and the caller's norm of `A`.
///
/// The inverse is formed explicitly (desk-scale matrices) and its norm
/// taken by a short power iteration with Frobenius fallback. Returns `0`
/// when the factorization is flagged singular.
pub fn rcond_estimate(f: &LuFactors, norm_a: f64) -> f64 {
    if f.is_singular() {
        return 0.0;
    }
    let inv = match f.inverse() {
        Ok(inv) => inv,
        Err(_) => return 0.0,
    };
    let (norm_inv, _) = match spectral_norm_with(&inv, 1e-8, 500) {
        Ok(v) => (v, true),
        Err(_) => (inv.frobenius_norm(), false),
    };
    if norm_a == 0.0 || norm_inv == 0.0 {
        return 0.0;
    }
    let denom = norm_a * norm_inv;
    if !denom.is_finite() {
        return 0.0;
    }
    1.0 / denom
}
