//! LU factorization with partial pivoting; backs the dense inverse.

use super::{ComplexMatrix, NumError, C64};

/// Pivot threshold relative to the Frobenius norm of the input.
const PIVOT_REL_THRESHOLD: f64 = 1e-13;

impl ComplexMatrix {
    /// Dense inverse via LU with partial pivoting.  Fails with the pivot
    /// index when a pivot falls below `1e-13 * ‖A‖_F`.
    pub fn inverse(&self) -> Result<ComplexMatrix, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare(self.rows(), self.cols()));
        }
        if !self.all_finite() {
            return Err(NumError::NonFinite);
        }
        let n = self.rows();
        let norm = self.fro_norm();
        let threshold = PIVOT_REL_THRESHOLD * norm;

        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].norm();
            for i in k + 1..n {
                let mag = lu[(i, k)].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag <= threshold {
                return Err(NumError::Singular { pivot_index: k });
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let upd = factor * lu[(k, j)];
                    lu[(i, j)] -= upd;
                }
            }
        }

        // solve for each unit column through the permuted factorization
        let mut out = ComplexMatrix::zeros(n, n);
        let mut y = vec![C64::new(0.0, 0.0); n];
        for col in 0..n {
            for i in 0..n {
                let mut s = if perm[i] == col {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                for j in 0..i {
                    s -= lu[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= lu[(i, j)] * out[(j, col)];
                }
                out[(i, col)] = s / lu[(i, i)];
            }
        }
        Ok(out)
    }
}
