use num_complex::Complex64;

use super::{ComplexMatrix, KernelError};

/// Pivot threshold relative to the largest entry of the input matrix.
/// A chosen pivot at or below this level marks the matrix singular.
const PIVOT_RTOL: f64 = 1e-14;

/// Packed LU factorization with partial pivoting: `P A = L U` with unit
/// lower-triangular `L` and upper-triangular `U` stored in one matrix.
///
/// Factorization never fails; near-singularity is recorded in [`singular`]
/// (`LuFactors::singular`) and solves against a flagged factorization
/// return [`KernelError::SingularMatrix`].
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: ComplexMatrix,
    /// Row permutation: factored row `i` came from input row `perm[i]`.
    perm: Vec<usize>,
    /// Determinant sign of the permutation: `+1` or `-1`.
    perm_sign: i32,
    singular: bool,
    log_det_magnitude: f64,
}

/// Factors a square matrix. The singularity threshold is relative to the
/// largest entry magnitude of `a`, so scaling the input rescales the
/// decision consistently.
pub fn lu_factor(a: &ComplexMatrix) -> LuFactors {
    assert!(a.is_square(), "LU requires a square matrix");
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perm_sign = 1;
    let mut singular = false;
    let mut log_det_magnitude = 0.0;
    let scale = a.max_abs();
    if scale == 0.0 {
        return LuFactors {
            n,
            lu,
            perm,
            perm_sign,
            singular: true,
            log_det_magnitude: f64::NEG_INFINITY,
        };
    }
    let threshold = PIVOT_RTOL * scale;

    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_mag = lu.get(k, k).norm();
        for i in k + 1..n {
            let mag = lu.get(i, k).norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag <= threshold {
            singular = true;
            log_det_magnitude = f64::NEG_INFINITY;
            break;
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(pivot_row, j));
                lu.set(pivot_row, j, tmp);
            }
            perm.swap(k, pivot_row);
            perm_sign = -perm_sign;
        }
        let pivot = lu.get(k, k);
        log_det_magnitude += pivot.norm().ln();
        for i in k + 1..n {
            let factor = lu.get(i, k) / pivot;
            lu.set(i, k, factor);
            for j in k + 1..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, v);
            }
        }
    }

    LuFactors {
        n,
        lu,
        perm,
        perm_sign,
        singular,
        log_det_magnitude,
    }
}

impl LuFactors {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// `ln |det A|`; `-inf` when the singularity flag is set.
    pub fn log_det_magnitude(&self) -> f64 {
        self.log_det_magnitude
    }

    /// Permutation sign, for callers assembling a full determinant.
    pub fn permutation_sign(&self) -> i32 {
        self.perm_sign
    }

    /// Determinant as a complex number. Valid at moderate scales; the
    /// log-magnitude field is the overflow-safe route.
    pub fn determinant(&self) -> Complex64 {
        if self.singular {
            return Complex64::new(0.0, 0.0);
        }
        let mut det = Complex64::new(self.perm_sign as f64, 0.0);
        for k in 0..self.n {
            det *= self.lu.get(k, k);
        }
        det
    }

    /// Solves `A x = b` for one right-hand side.
    pub fn solve_vec(&self, b: &[Complex64]) -> Result<Vec<Complex64>, KernelError> {
        if self.singular {
            return Err(KernelError::SingularMatrix);
        }
        assert_eq!(b.len(), self.n);
        let mut x: Vec<Complex64> = (0..self.n).map(|i| b[self.perm[i]]).collect();
        // Forward substitution with unit diagonal.
        for i in 1..self.n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu.get(i, j) * x[j];
            }
            x[i] = acc;
        }
        // Back substitution.
        for i in (0..self.n).rev() {
            let mut acc = x[i];
            for j in i + 1..self.n {
                acc -= self.lu.get(i, j) * x[j];
            }
            x[i] = acc / self.lu.get(i, i);
        }
        Ok(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix, KernelError> {
        if self.singular {
            return Err(KernelError::SingularMatrix);
        }
        assert_eq!(b.rows(), self.n);
        let mut out = ComplexMatrix::zeros(self.n, b.cols());
        let mut col = vec![Complex64::new(0.0, 0.0); self.n];
        for j in 0..b.cols() {
            for i in 0..self.n {
                col[i] = b.get(i, j);
            }
            let x = self.solve_vec(&col)?;
            for i in 0..self.n {
                out.set(i, j, x[i]);
            }
        }
        Ok(out)
    }

    /// Explicit inverse via solves against the identity columns.
    pub fn inverse(&self) -> Result<ComplexMatrix, KernelError> {
        self.solve_matrix(&ComplexMatrix::identity(self.n))
    }
}
