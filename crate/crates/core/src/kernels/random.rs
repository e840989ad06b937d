use num_complex::Complex64;
use std::f64::consts::PI;

use super::ComplexMatrix;

/// Splitmix 64-bit generator: tiny state, full-period, and identical
/// streams for identical seeds on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `(0, 1]` with 53-bit resolution. The half-open-at-zero
    /// range keeps logarithms finite in the Gaussian transform.
    pub fn next_f64(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// A pair of independent standard normals via the Box-Muller transform.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// A standard complex normal entry (unit total variance).
    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let (re, im) = self.next_gaussian_pair();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// An `m x m` matrix with independent standard complex Gaussian entries,
/// fully determined by the seed.
pub fn random_gaussian(m: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    ComplexMatrix::from_fn(m, m, |_, _| rng.next_complex_gaussian())
}

/// A seeded random unitary matrix: the Q factor of a Householder QR of a
/// complex Gaussian matrix, with the phases of R's diagonal absorbed so
/// that R has a real positive diagonal. That convention makes the result
/// Haar-distributed and, more importantly here, a pure function of the
/// seed.
pub fn random_unitary(m: usize, seed: u64) -> ComplexMatrix {
    let a = random_gaussian(m, seed);
    let (q, r) = householder_qr(&a);
    // Absorb diag(R) phases: A = QR = (Q D)(D^* R) with D = diag(r_kk/|r_kk|).
    let mut qd = q;
    for k in 0..m {
        let rkk = r.get(k, k);
        let mag = rkk.norm();
        let phase = if mag == 0.0 { Complex64::new(1.0, 0.0) } else { rkk / mag };
        for i in 0..m {
            let v = qd.get(i, k) * phase;
            qd.set(i, k, v);
        }
    }
    qd
}

/// Householder QR of a square matrix; returns `(Q, R)` with `A = Q R`.
fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let m = a.rows();
    assert!(a.is_square());
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    let mut v = vec![Complex64::new(0.0, 0.0); m];

    for k in 0..m {
        // Householder vector for column k below the diagonal.
        let mut norm_sq = 0.0;
        for i in k..m {
            norm_sq += r.get(i, k).norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r.get(k, k);
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut vnorm_sq = 0.0;
        for i in k..m {
            let vi = if i == k { r.get(i, k) - alpha } else { r.get(i, k) };
            v[i] = vi;
            vnorm_sq += vi.norm_sqr();
        }
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;

        // R <- (I - beta v v*) R
        for j in k..m {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..m {
                dot += v[i].conj() * r.get(i, j);
            }
            dot *= beta;
            for i in k..m {
                let val = r.get(i, j) - v[i] * dot;
                r.set(i, j, val);
            }
        }
        // Q <- Q (I - beta v v*)
        for i in 0..m {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k..m {
                dot += q.get(i, j) * v[j];
            }
            dot *= beta;
            for j in k..m {
                let val = q.get(i, j) - dot * v[j].conj();
                q.set(i, j, val);
            }
        }
    }
    (q, r)
}
