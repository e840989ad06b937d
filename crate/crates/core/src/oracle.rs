//! Independent eigenvalue oracle via companion linearization.
//!
//! The eigenvalues of a regular matrix polynomial with invertible leading
//! coefficient are the eigenvalues of its `mn x mn` block companion
//! matrix. This module builds that matrix and computes its spectrum with
//! a self-contained dense solver (balancing, Householder Hessenberg
//! reduction, explicitly shifted QR with Givens rotations), providing a
//! reference answer that shares no code path with the simultaneous
//! iteration it is used to check.

use num_complex::Complex64;
use thiserror::Error;

use crate::kernels::{lu_factor, ComplexMatrix};
use crate::matpoly::MatrixPolynomial;

/// Largest companion dimension the dense solver accepts.
pub const MAX_COMPANION_SIZE: usize = 512;
/// Subdiagonal entries below `tol * (|h_kk| + |h_k+1,k+1|)` deflate.
const DEFLATION_TOL: f64 = 1e-14;
/// QR iterations allowed between two deflations, per matrix dimension.
const QR_ITER_FACTOR: usize = 100;
/// An exceptional shift is injected after this many stalled iterations.
const EXCEPTIONAL_EVERY: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("leading coefficient is singular; reverse the polynomial to expose the infinite eigenvalues")]
    SingularLeading,
    #[error("companion matrix of size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },
    #[error("QR iteration failed to deflate after {iterations} sweeps")]
    QRNoConvergence { iterations: usize },
}

/// Builds the block companion matrix: identity blocks on the subdiagonal
/// and `-A_n^{-1} A_i` down the last block column.
pub fn companion(p: &MatrixPolynomial) -> Result<ComplexMatrix, OracleError> {
    let m = p.size();
    let n = p.degree();
    let size = m * n;
    if size > MAX_COMPANION_SIZE {
        return Err(OracleError::TooLarge {
            size,
            max: MAX_COMPANION_SIZE,
        });
    }
    let lead = lu_factor(p.coeff(n));
    if lead.is_singular() {
        return Err(OracleError::SingularLeading);
    }
    let mut c = ComplexMatrix::zeros(size, size);
    for block in 1..n {
        for k in 0..m {
            c.set(block * m + k, (block - 1) * m + k, Complex64::new(1.0, 0.0));
        }
    }
    for i in 0..n {
        let b = lead
            .solve_matrix(p.coeff(i))
            .expect("leading factor verified invertible");
        for r in 0..m {
            for col in 0..m {
                c.set(i * m + r, (n - 1) * m + col, -b.get(r, col));
            }
        }
    }
    Ok(c)
}

/// Parlett-Reinsch balancing with powers of two: a diagonal similarity
/// that equalizes row and column norms without rounding error.
fn balance(a: &mut ComplexMatrix) {
    let n = a.rows();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    row += a.get(i, j).norm();
                    col += a.get(j, i).norm();
                }
            }
            if row == 0.0 || col == 0.0 {
                continue;
            }
            let original = col + row;
            let mut factor = 1.0;
            let mut c = col;
            while c < row / 2.0 {
                factor *= 2.0;
                c *= 4.0;
            }
            while c > row * 2.0 {
                factor /= 2.0;
                c /= 4.0;
            }
            if (c + row) / factor < 0.95 * original {
                converged = false;
                let inv = 1.0 / factor;
                for j in 0..n {
                    let v = a.get(i, j);
                    a.set(i, j, v * inv);
                }
                for j in 0..n {
                    let v = a.get(j, i);
                    a.set(j, i, v * factor);
                }
            }
        }
        if converged {
            return;
        }
    }
}

/// Householder reduction to upper Hessenberg form (similarity).
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm_x: f64 = (k + 1..n).map(|i| a.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        // v = x - alpha e1, normalized.
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a.get(i, k)).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A <- H A with H = I - 2 v v^*: rows k+1..n, all columns.
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * a.get(k + 1 + t, j);
            }
            dot *= 2.0;
            for (t, vi) in v.iter().enumerate() {
                let cur = a.get(k + 1 + t, j);
                a.set(k + 1 + t, j, cur - vi * dot);
            }
        }
        // A <- A H: all rows, columns k+1..n.
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += a.get(i, k + 1 + t) * *vi;
            }
            dot *= 2.0;
            for (t, vi) in v.iter().enumerate() {
                let cur = a.get(i, k + 1 + t);
                a.set(i, k + 1 + t, cur - dot * vi.conj());
            }
        }
        // Entries below the subdiagonal are now zero to rounding; make
        // them exactly zero so the QR sweep can trust the structure.
        a.set(k + 1, k, alpha);
        for i in k + 2..n {
            a.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
}

/// Complex Givens rotation `[c s; -conj(s) c]` (real `c >= 0`) that maps
/// `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fm = f.norm();
    let gm = g.norm();
    if gm == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let d = fm.hypot(gm);
    if fm == 0.0 {
        return (0.0, g.conj() / gm);
    }
    (fm / d, (f / fm) * g.conj() / d)
}

/// Eigenvalues of `[[a, b], [c, d]]` by the stabilized quadratic formula.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = if (half_tr + disc).norm() >= (half_tr - disc).norm() {
        half_tr + disc
    } else {
        half_tr - disc
    };
    if l1.norm() == 0.0 {
        (l1, half_tr - disc)
    } else {
        (l1, det / l1)
    }
}

/// Wilkinson shift: the eigenvalue of the trailing 2x2 closest to the
/// bottom corner entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let (l1, l2) = eig2(
        h.get(hi - 1, hi - 1),
        h.get(hi - 1, hi),
        h.get(hi, hi - 1),
        h.get(hi, hi),
    );
    let corner = h.get(hi, hi);
    if (l1 - corner).norm() <= (l2 - corner).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of a general complex matrix. The matrix is balanced,
/// reduced to Hessenberg form, and iterated with explicitly shifted QR
/// until every eigenvalue deflates.
pub fn dense_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, OracleError> {
    assert!(a.is_square(), "eigenvalues need a square matrix");
    let n = a.rows();
    if n > MAX_COMPANION_SIZE {
        return Err(OracleError::TooLarge {
            size: n,
            max: MAX_COMPANION_SIZE,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);

    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let budget = QR_ITER_FACTOR * n;
    loop {
        // Deflate all negligible subdiagonals from the bottom.
        loop {
            if hi == 0 {
                eigs.push(h.get(0, 0));
                return finish(eigs);
            }
            let sub = h.get(hi, hi - 1).norm();
            let scale = h.get(hi - 1, hi - 1).norm() + h.get(hi, hi).norm();
            if sub <= DEFLATION_TOL * scale {
                eigs.push(h.get(hi, hi));
                h.set(hi, hi - 1, Complex64::new(0.0, 0.0));
                hi -= 1;
                stalled = 0;
                continue;
            }
            break;
        }
        // Find the top of the active window.
        let mut lo = hi;
        while lo > 0 {
            let sub = h.get(lo, lo - 1).norm();
            let scale = h.get(lo - 1, lo - 1).norm() + h.get(lo, lo).norm();
            if sub <= DEFLATION_TOL * scale {
                h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if hi == lo + 1 {
            // 2x2 block: closed form.
            let (l1, l2) = eig2(
                h.get(lo, lo),
                h.get(lo, hi),
                h.get(hi, lo),
                h.get(hi, hi),
            );
            eigs.push(l1);
            eigs.push(l2);
            if lo == 0 {
                return finish(eigs);
            }
            h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
            hi = lo - 1;
            stalled = 0;
            continue;
        }

        stalled += 1;
        if stalled > budget {
            return Err(OracleError::QRNoConvergence { iterations: stalled });
        }
        let mut shift = wilkinson_shift(&h, hi);
        if stalled % EXCEPTIONAL_EVERY == 0 {
            // Stalled window: kick the shift with the subdiagonal scale.
            shift = h.get(hi, hi) + Complex64::new(0.75 * h.get(hi, hi - 1).norm(), 0.0);
        }

        // Explicit shifted QR on the window: H - shift = QR, H <- RQ + shift.
        for k in lo..=hi {
            let v = h.get(k, k);
            h.set(k, k, v - shift);
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h.get(k, k), h.get(k + 1, k));
            rotations.push((c, s));
            for j in k..=hi {
                let t = h.get(k, j);
                let b = h.get(k + 1, j);
                h.set(k, j, c * t + s * b);
                h.set(k + 1, j, -s.conj() * t + c * b);
            }
        }
        for (k, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + k;
            for i in lo..=(k + 1).min(hi) {
                let t = h.get(i, k);
                let b = h.get(i, k + 1);
                h.set(i, k, c * t + s.conj() * b);
                h.set(i, k + 1, -s * t + c * b);
            }
        }
        for k in lo..=hi {
            let v = h.get(k, k);
            h.set(k, k, v + shift);
        }
    }
}

fn finish(eigs: Vec<Complex64>) -> Result<Vec<Complex64>, OracleError> {
    Ok(eigs)
}

/// Eigenvalues of `p` through the companion linearization, including the
/// exact zeros stripped during normalization. Requires an invertible
/// leading coefficient; callers seeing [`OracleError::SingularLeading`]
/// can run the reversed polynomial instead and invert the results.
pub fn companion_eigenvalues(p: &MatrixPolynomial) -> Result<Vec<Complex64>, OracleError> {
    let mut eigs = if p.degree() == 0 {
        Vec::new()
    } else {
        dense_eigenvalues(&companion(p)?)?
    };
    eigs.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(p.size() * p.stripped_power()));
    Ok(eigs)
}

/// Counts eigenvalues with `inner (1 - guard) <= |x| <= outer (1 + guard)`.
/// A negative guard shrinks the annulus, which turns the count into a
/// strict interior check (useful for verifying exclusion regions).
pub fn count_in_annulus(eigs: &[Complex64], inner: f64, outer: f64, guard: f64) -> usize {
    let lo = inner * (1.0 - guard);
    let hi = outer * (1.0 + guard);
    eigs.iter()
        .filter(|z| {
            let r = z.norm();
            r >= lo && r <= hi
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{random_gaussian, random_unitary, SplitMix64};
    use crate::matpoly::scalar_polynomial;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// Greedy nearest matching; adequate for well-separated sets.
    fn max_match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
        assert_eq!(a.len(), b.len());
        let mut used = vec![false; b.len()];
        let mut worst: f64 = 0.0;
        for x in a {
            let mut best = f64::INFINITY;
            let mut best_j = 0;
            for (j, y) in b.iter().enumerate() {
                if !used[j] {
                    let d = (x - y).norm();
                    if d < best {
                        best = d;
                        best_j = j;
                    }
                }
            }
            used[best_j] = true;
            worst = worst.max(best);
        }
        worst
    }

    #[test]
    fn scalar_battery_matches_closed_forms() {
        // x^2 - 1, x^2 + 1, (x - 1)(x - 2)(x - 3), x^8 - 1.
        let cases: Vec<(Vec<Complex64>, Vec<Complex64>)> = vec![
            (
                vec![real(-1.0), real(0.0), real(1.0)],
                vec![real(1.0), real(-1.0)],
            ),
            (
                vec![real(1.0), real(0.0), real(1.0)],
                vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)],
            ),
            (
                vec![real(-6.0), real(11.0), real(-6.0), real(1.0)],
                vec![real(1.0), real(2.0), real(3.0)],
            ),
            (
                {
                    let mut c = vec![real(0.0); 9];
                    c[0] = real(-1.0);
                    c[8] = real(1.0);
                    c
                },
                (0..8)
                    .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0))
                    .collect(),
            ),
        ];
        for (coeffs, expected) in cases {
            let p = scalar_polynomial(&coeffs).unwrap();
            let got = companion_eigenvalues(&p).unwrap();
            assert_eq!(got.len(), expected.len());
            let d = max_match_distance(&expected, &got);
            assert!(d < 1e-10, "mismatch {d} for {coeffs:?}");
        }
    }

    #[test]
    fn linear_pencil_companion_is_the_coefficient_ratio() {
        // A(x) = I x - D: companion is exactly D.
        let d = ComplexMatrix::diagonal(&[1.0, -2.0, 4.0]);
        let p = MatrixPolynomial::normalize(vec![
            d.scale(real(-1.0)),
            ComplexMatrix::identity(3),
        ])
        .unwrap();
        let c = companion(&p).unwrap();
        assert_eq!(c.rows(), 3);
        assert!(c.max_abs_diff(&d) < 1e-15);
        let eigs = companion_eigenvalues(&p).unwrap();
        let expected = [real(1.0), real(-2.0), real(4.0)];
        assert!(max_match_distance(&expected, &eigs) < 1e-12);
    }

    #[test]
    fn eigenvalue_sum_equals_trace() {
        let mut rng = SplitMix64::new(7);
        for trial in 0..5 {
            let n = 4 + trial;
            let a = ComplexMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian());
            let eigs = dense_eigenvalues(&a).unwrap();
            let sum: Complex64 = eigs.iter().sum();
            let tr = a.trace();
            assert!(
                (sum - tr).norm() < 1e-9 * tr.norm().max(1.0),
                "sum {sum} vs trace {tr}"
            );
        }
    }

    #[test]
    fn unitary_similarity_preserves_known_spectrum() {
        let diag = [2.0, -1.0, 0.5, 3.0, -2.5];
        let d = ComplexMatrix::diagonal(&diag);
        let q = random_unitary(5, 42);
        let a = q.mul(&d).mul(&q.adjoint());
        let eigs = dense_eigenvalues(&a).unwrap();
        let expected: Vec<Complex64> = diag.iter().map(|&x| real(x)).collect();
        assert!(max_match_distance(&expected, &eigs) < 1e-10);
    }

    #[test]
    fn graded_matrix_survives_via_balancing() {
        // Wildly graded triangular-ish matrix: balancing keeps the QR
        // iteration accurate on the small eigenvalues too.
        let a = ComplexMatrix::from_rows(
            3,
            3,
            vec![
                real(1.0),
                real(1e8),
                real(0.0),
                real(1e-8),
                real(2.0),
                real(1e8),
                real(0.0),
                real(1e-8),
                real(3.0),
            ],
        );
        let eigs = dense_eigenvalues(&a).unwrap();
        // Gershgorin after balancing: eigenvalues near 1, 2 + 1, 3.
        let sum: Complex64 = eigs.iter().sum();
        assert!((sum - real(6.0)).norm() < 1e-8);
    }

    #[test]
    fn companion_requires_invertible_leading_coefficient() {
        let a1 = ComplexMatrix::from_rows(2, 2, vec![real(1.0), real(0.0), real(0.0), real(0.0)]);
        let p = MatrixPolynomial::normalize(vec![ComplexMatrix::identity(2), a1]).unwrap();
        assert_eq!(companion(&p).unwrap_err(), OracleError::SingularLeading);
    }

    #[test]
    fn oversized_companion_is_rejected() {
        let coeffs: Vec<Complex64> = (0..=513)
            .map(|i| if i == 0 || i == 513 { real(1.0) } else { real(0.0) })
            .collect();
        let p = scalar_polynomial(&coeffs).unwrap();
        assert!(matches!(
            companion(&p),
            Err(OracleError::TooLarge { size: 513, .. })
        ));
    }

    #[test]
    fn stripped_zeros_are_included() {
        // x^3 + x^2 = x^2 (x + 1).
        let p = scalar_polynomial(&[real(0.0), real(0.0), real(1.0), real(1.0)]).unwrap();
        let eigs = companion_eigenvalues(&p).unwrap();
        assert_eq!(eigs.len(), 3);
        let zeros = eigs.iter().filter(|z| z.norm() == 0.0).count();
        assert_eq!(zeros, 2);
        let nonzero: Vec<&Complex64> = eigs.iter().filter(|z| z.norm() > 0.0).collect();
        assert!((nonzero[0] + real(1.0)).norm() < 1e-12);
    }

    #[test]
    fn annulus_counting_handles_guards_and_infinity() {
        let eigs = [
            real(0.5),
            real(1.0),
            real(2.0),
            Complex64::new(f64::INFINITY, 0.0),
        ];
        assert_eq!(count_in_annulus(&eigs, 0.9, 1.1, 0.0), 1);
        assert_eq!(count_in_annulus(&eigs, 0.4, 2.5, 0.0), 3);
        assert_eq!(count_in_annulus(&eigs, 0.0, f64::INFINITY, 0.0), 4);
        // Positive guard widens: picks up the endpoint just outside.
        assert_eq!(count_in_annulus(&eigs, 1.05, 1.9, 0.1), 2);
        // Negative guard shrinks: exact endpoints fall out.
        assert_eq!(count_in_annulus(&eigs, 1.0, 2.0, -1e-9), 0);
    }

    #[test]
    fn random_matrix_polynomial_eigenvalues_have_small_residual() {
        let mut seed = 100;
        for _ in 0..4 {
            seed += 1;
            let m = 3;
            let n = 3;
            let coeffs: Vec<ComplexMatrix> =
                (0..=n).map(|i| random_gaussian(m, seed * 10 + i as u64)).collect();
            let p = MatrixPolynomial::normalize(coeffs).unwrap();
            let eigs = companion_eigenvalues(&p).unwrap();
            assert_eq!(eigs.len(), m * n);
            for z in &eigs {
                // det A(z) = 0: the smallest singular value of A(z) is
                // tiny relative to its norm, i.e. rcond is small.
                let a = p.evaluate(*z);
                let f = lu_factor(&a);
                let (norm, _) = crate::kernels::spectral_norm_or_frobenius(&a);
                let rc = crate::kernels::rcond_estimate(&f, norm);
                assert!(rc < 1e-8, "rcond {rc} at eigenvalue {z}");
            }
        }
    }
}
