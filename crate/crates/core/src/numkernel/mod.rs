//! Dense complex linear algebra used by every other module.
//!
//! Matrices are stored row-major in double precision.  All operations are
//! pure functions on immutable inputs; with the `parallel` feature the
//! larger kernels distribute rows over rayon while producing bit-identical
//! results to the sequential path.

mod eig;
mod expm;
mod lu;

pub use eig::{EigenDecomposition, HermitianEigen};

use num_complex::Complex64;
use thiserror::Error;

/// Complex double-precision scalar used throughout the crate.
pub type C64 = Complex64;

/// Shorthand for a complex scalar from real and imaginary parts.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Debug, Error)]
pub enum NumError {
    #[error("dimension mismatch: left is {0}x{1}, right is {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian: relative deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is singular at pivot index {pivot_index}")]
    Singular { pivot_index: usize },
    #[error("eigensolver failed to converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("matrix norm {norm:.3e} exceeds the exponential bound {bound:.3e}")]
    ExpNormTooLarge { norm: f64, bound: f64 },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
}

/// Row work threshold above which matmul rows are distributed over rayon;
/// below roughly a 100-dimensional product the fork-join overhead wins.
#[cfg(feature = "parallel")]
const PAR_MIN_WORK: usize = 1 << 20;

/// Dense complex matrix in row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                let v = self[(i, j)];
                write!(f, "{:+.3e}{:+.3e}i ", v.re, v.im)?;
            }
            writeln!(f, "{}", if self.cols > 8 { "..." } else { "" })?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, NumError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(NumError::DimensionMismatch(r, c, 0, 0));
        }
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, NumError> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.rows && j < self.cols);
        i * self.cols + j
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .all(|(j, v)| i == j || (v.re == 0.0 && v.im == 0.0))
            })
    }

    /// Frobenius norm sqrt(sum |a_ij|^2).
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= factor;
        }
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NumError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self, NumError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(NumError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = self.clone();
        for (v, &w) in out.data.iter_mut().zip(&other.data) {
            *v = f(*v, w);
        }
        Ok(out)
    }

    /// `self += factor * other`, in place.
    pub fn axpy(&mut self, factor: C64, other: &Self) -> Result<(), NumError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(NumError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        for (v, &w) in self.data.iter_mut().zip(&other.data) {
            *v += factor * w;
        }
        Ok(())
    }

    /// Dense product; rows are distributed over rayon above a size threshold.
    pub fn matmul(&self, other: &Self) -> Result<Self, NumError> {
        if self.cols != other.rows {
            return Err(NumError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            if self.rows * self.cols * other.cols >= PAR_MIN_WORK {
                out.data
                    .par_chunks_mut(other.cols)
                    .enumerate()
                    .for_each(|(i, row)| {
                        matmul_row(self, other, i, row);
                    });
                return Ok(out);
            }
        }
        for (i, row) in out.data.chunks_mut(other.cols).enumerate() {
            matmul_row(self, other, i, row);
        }
        Ok(out)
    }

    /// Reference sequential product; kept public so benchmarks can compare
    /// against the dispatching [`ComplexMatrix::matmul`].
    pub fn matmul_serial(&self, other: &Self) -> Result<Self, NumError> {
        if self.cols != other.rows {
            return Err(NumError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in out.data.chunks_mut(other.cols).enumerate() {
            matmul_row(self, other, i, row);
        }
        Ok(out)
    }

    /// Restriction to a subset of basis indices: `self[support, support]`.
    pub fn restrict(&self, support: &[usize]) -> Self {
        let r = support.len();
        let mut out = Self::zeros(r.max(1), r.max(1));
        for (a, &i) in support.iter().enumerate() {
            for (b, &j) in support.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Projected product `self[support, :] * other[:, support]`, i.e. the
    /// product compressed onto a diagonal projector without forming the full
    /// dense product.
    pub fn restricted_product(&self, other: &Self, support: &[usize]) -> Result<Self, NumError> {
        if self.cols != other.rows {
            return Err(NumError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let r = support.len();
        let mut out = Self::zeros(r.max(1), r.max(1));
        for (a, &i) in support.iter().enumerate() {
            let lrow = self.row(i);
            for (k, &lv) in lrow.iter().enumerate() {
                if lv.re == 0.0 && lv.im == 0.0 {
                    continue;
                }
                let rrow = other.row(k);
                for (b, &j) in support.iter().enumerate() {
                    out[(a, b)] += lv * rrow[j];
                }
            }
        }
        Ok(out)
    }

    /// Exact Hermitian average (A + A†)/2.
    pub fn hermitize(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// Relative deviation from Hermiticity, ‖A − A†‖_F / ‖A‖_F.
    pub fn hermiticity_deviation(&self) -> f64 {
        let norm = self.fro_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut dev = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                dev += d.norm_sqr();
            }
        }
        dev.sqrt() / norm
    }
}

fn matmul_row(a: &ComplexMatrix, b: &ComplexMatrix, i: usize, row: &mut [C64]) {
    for k in 0..a.cols {
        let aik = a.data[i * a.cols + k];
        if aik.re == 0.0 && aik.im == 0.0 {
            continue;
        }
        let brow = &b.data[k * b.cols..(k + 1) * b.cols];
        for (r, &bkj) in row.iter_mut().zip(brow) {
            *r += aik * bkj;
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[self.idx(i, j)]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        let k = self.idx(i, j);
        &mut self.data[k]
    }
}

/// Kronecker product with the left factor varying slowest.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let av = a[(ia, ja)];
            if av.re == 0.0 && av.im == 0.0 {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(ia * b.rows + ib, ja * b.cols + jb)] = av * b[(ib, jb)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matmul_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.matmul(&i2).unwrap(), i2);
    }

    #[test]
    fn matmul_all_ones() {
        let ones = ComplexMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let prod = ones.matmul(&ones).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(prod[(i, j)], c(2.0, 0.0));
            }
        }
    }

    #[test]
    fn matmul_matches_triple_loop_oracle() {
        // independent naive oracle on a deterministic pseudo-random 8x8 pair
        let a = ComplexMatrix::from_fn(8, 8, |i, j| {
            c(
                ((i * 13 + j * 7) % 11) as f64 - 5.0,
                ((i * 5 + j * 3) % 7) as f64 - 3.0,
            )
        });
        let b = ComplexMatrix::from_fn(8, 8, |i, j| {
            c(
                ((i * 3 + j * 11) % 13) as f64 - 6.0,
                ((i * 9 + j) % 5) as f64 - 2.0,
            )
        });
        let prod = a.matmul(&b).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let mut s = c(0.0, 0.0);
                for k in 0..8 {
                    s += a[(i, k)] * b[(k, j)];
                }
                assert!((prod[(i, j)] - s).norm() <= 1e-12 * (s.norm() + 1.0));
            }
        }
    }

    #[test]
    fn matmul_serial_equals_dispatched() {
        let a = ComplexMatrix::from_fn(70, 70, |i, j| c((i as f64).sin(), (j as f64).cos()));
        let b = ComplexMatrix::from_fn(70, 70, |i, j| c((i + j) as f64, (i as f64) - (j as f64)));
        assert_eq!(a.matmul(&b).unwrap(), a.matmul_serial(&b).unwrap());
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 2);
        assert!(matches!(a.matmul(&b), Err(NumError::DimensionMismatch(..))));
    }

    #[test]
    fn adjoint_swaps_ladder() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let ad = a.adjoint();
        assert_eq!(ad[(0, 0)], c(0.0, 0.0));
        assert_eq!(ad[(1, 0)], c(1.0, 0.0));
        assert_eq!(ad[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn adjoint_fixes_hermitian() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, -2.0)],
            vec![c(0.0, 2.0), c(3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(h.adjoint(), h);
    }

    #[test]
    fn fro_norm_examples() {
        assert!((ComplexMatrix::identity(2).fro_norm() - 2.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(ComplexMatrix::zeros(3, 3).fro_norm(), 0.0);
        let m = ComplexMatrix::from_real_rows(&[vec![3.0, 4.0], vec![0.0, 0.0]]).unwrap();
        assert!((m.fro_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn restricted_product_matches_full() {
        let a = ComplexMatrix::from_fn(6, 6, |i, j| c((i * j) as f64, (i + j) as f64));
        let b = ComplexMatrix::from_fn(6, 6, |i, j| c(i as f64 - j as f64, 1.0));
        let support = [0usize, 2, 5];
        let full = a.matmul(&b).unwrap().restrict(&support);
        let fast = a.restricted_product(&b, &support).unwrap();
        assert_eq!(full, fast);
    }

    proptest! {
        #[test]
        fn adjoint_is_involution(seed in 0u64..500) {
            let a = pseudo_random(6, seed);
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn adjoint_reverses_products(seed in 0u64..200) {
            // adjoint(A B) == adjoint(B) adjoint(A) entrywise to 1e-14 relative
            let a = pseudo_random(5, seed);
            let b = pseudo_random(5, seed.wrapping_add(9999));
            let lhs = a.matmul(&b).unwrap().adjoint();
            let rhs = b.adjoint().matmul(&a.adjoint()).unwrap();
            let scale = lhs.fro_norm() + 1.0;
            prop_assert!(lhs.sub(&rhs).unwrap().fro_norm() <= 1e-14 * scale);
        }
    }

    /// Deterministic filler matrix for property tests.
    fn pseudo_random(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()))
    }
}
