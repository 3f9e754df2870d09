//! Matrix exponentials: spectral calculus for Hermitian inputs and
//! scaling-and-squaring with a truncated Taylor series for general inputs.

use super::{ComplexMatrix, NumError, C64};

/// Taylor degree for the scaled series.  After scaling the norm is at most
/// one half, where the degree-24 tail is below 1e-30, far under the 1e-16
/// target.
const TAYLOR_DEGREE: usize = 24;

/// Frobenius-norm bound beyond which the exponential is refused.
const EXPM_MAX_NORM: f64 = 1048576.0;

const SCALED_NORM_TARGET: f64 = 0.5;

impl ComplexMatrix {
    /// Exponential of a Hermitian matrix via its eigendecomposition.  The
    /// result is Hermitian positive-definite.
    pub fn expm_hermitian(&self) -> Result<ComplexMatrix, NumError> {
        self.hermitian_spectral_map(f64::exp)
    }

    /// Exponential of a general square matrix by scaling-and-squaring with a
    /// truncated Taylor series.
    pub fn expm_general(&self) -> Result<ComplexMatrix, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare(self.rows(), self.cols()));
        }
        if !self.all_finite() {
            return Err(NumError::NonFinite);
        }
        let norm = self.fro_norm();
        if norm > EXPM_MAX_NORM {
            return Err(NumError::ExpNormTooLarge {
                norm,
                bound: EXPM_MAX_NORM,
            });
        }
        let squarings = if norm > SCALED_NORM_TARGET {
            (norm / SCALED_NORM_TARGET).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scale_real(0.5_f64.powi(squarings as i32));

        let n = self.rows();
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..=TAYLOR_DEGREE {
            term = term.matmul(&scaled)?;
            term = term.scale(C64::new(1.0 / k as f64, 0.0));
            sum.axpy(C64::new(1.0, 0.0), &term)?;
        }
        let mut result = sum;
        for _ in 0..squarings {
            result = result.matmul(&result)?;
        }
        Ok(result)
    }
}
