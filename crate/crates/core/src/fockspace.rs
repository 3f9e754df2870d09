//! Graded multi-mode Hilbert spaces, ladder operators, quadratures and the
//! projectors that isolate truncation artifacts.
//!
//! Basis ordering is fixed once and for all: the Kronecker product runs with
//! the leftmost factor varying slowest, so a basis index decomposes as a
//! mixed-radix number over the factor dimensions. Fermionic modes carry
//! Jordan-Wigner sign strings over the fermionic factors to their left.

use crate::numkernel::{ComplexMatrix, C64};
use thiserror::Error;

/// Basis-ordering tag recorded in every report.
pub const BASIS_ORDERING: &str = "kron-leftmost-slowest-v1";

/// Default cap on the total Hilbert-space dimension.
pub const DEFAULT_MAX_DIM: usize = 16384;

/// Smallest admissible bosonic cutoff in a layout.
pub const MIN_BOSON_CUTOFF: usize = 4;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("layout needs at least one factor")]
    EmptyLayout,
    #[error("boson cutoff {0} is below the minimum {MIN_BOSON_CUTOFF}")]
    CutoffTooSmall(usize),
    #[error("spin factor dimension {0} must be at least 2")]
    SpinDimTooSmall(usize),
    #[error("total dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("factor index {0} out of range")]
    FactorOutOfRange(usize),
    #[error("factor {0} is not a boson mode")]
    NotBoson(usize),
    #[error("factor {0} is not a fermion mode")]
    NotFermion(usize),
    #[error("margin {margin} too large for boson cutoff {cutoff}")]
    MarginTooLarge { margin: usize, cutoff: usize },
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("operator layouts differ")]
    LayoutMismatch,
    #[error("operator grades differ")]
    GradeMismatch,
    #[error("factor operator must be {expected}x{expected}, got {got_rows}x{got_cols}")]
    FactorDimMismatch {
        expected: usize,
        got_rows: usize,
        got_cols: usize,
    },
}

/// One tensor factor of the Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// Bosonic mode truncated at `cutoff` levels (occupations 0..cutoff-1).
    Boson { cutoff: usize },
    /// One fermionic mode (dimension 2, occupations 0 and 1).
    Fermion,
    /// Plain spin factor of dimension `dim`; carries no grading.
    Spin { dim: usize },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Boson { cutoff } => cutoff,
            Factor::Fermion => 2,
            Factor::Spin { dim } => dim,
        }
    }
}

/// Ordered factor list fixing the basis bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeLayout {
    factors: Vec<Factor>,
}

impl ModeLayout {
    pub fn new(factors: Vec<Factor>) -> Result<Self, FockError> {
        Self::with_dim_limit(factors, DEFAULT_MAX_DIM)
    }

    pub fn with_dim_limit(factors: Vec<Factor>, max_dim: usize) -> Result<Self, FockError> {
        if factors.is_empty() {
            return Err(FockError::EmptyLayout);
        }
        let mut dim = 1usize;
        for f in &factors {
            match *f {
                Factor::Boson { cutoff } if cutoff < MIN_BOSON_CUTOFF => {
                    return Err(FockError::CutoffTooSmall(cutoff));
                }
                Factor::Spin { dim } if dim < 2 => return Err(FockError::SpinDimTooSmall(dim)),
                _ => {}
            }
            dim = dim.saturating_mul(f.dim());
            if dim > max_dim {
                return Err(FockError::DimensionTooLarge { dim, max: max_dim });
            }
        }
        Ok(Self { factors })
    }

    /// Single truncated bosonic mode.
    pub fn single_boson(cutoff: usize) -> Result<Self, FockError> {
        Self::new(vec![Factor::Boson { cutoff }])
    }

    /// One bosonic mode tensored with one fermionic mode.
    pub fn boson_fermion(cutoff: usize) -> Result<Self, FockError> {
        Self::new(vec![Factor::Boson { cutoff }, Factor::Fermion])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).product()
    }

    pub fn boson_factor_indices(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Factor::Boson { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn fermion_factor_indices(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Factor::Fermion))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn min_boson_cutoff(&self) -> Option<usize> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                Factor::Boson { cutoff } => Some(*cutoff),
                _ => None,
            })
            .min()
    }

    /// Mixed-radix decomposition of a basis index into per-factor states,
    /// leftmost factor slowest.
    pub fn factor_states(&self, mut index: usize) -> Vec<usize> {
        let mut states = vec![0usize; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            let d = f.dim();
            states[k] = index % d;
            index /= d;
        }
        states
    }

    /// Inverse of [`ModeLayout::factor_states`].
    pub fn basis_index(&self, states: &[usize]) -> usize {
        let mut idx = 0usize;
        for (f, &s) in self.factors.iter().zip(states) {
            idx = idx * f.dim() + s;
        }
        idx
    }

    /// Total bosonic quanta of each basis state.
    fn boson_quanta(&self) -> Vec<usize> {
        let bosons = self.boson_factor_indices();
        (0..self.total_dim())
            .map(|idx| {
                let st = self.factor_states(idx);
                bosons.iter().map(|&b| st[b]).sum()
            })
            .collect()
    }
}

/// Z2 grade under total fermion parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grade {
    Even,
    Odd,
}

impl Grade {
    pub fn product(self, other: Grade) -> Grade {
        if self == other {
            Grade::Even
        } else {
            Grade::Odd
        }
    }
}

/// Dense operator tagged with the layout it acts on and its Z2 grade.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub layout: ModeLayout,
    pub matrix: ComplexMatrix,
    pub grade: Grade,
}

impl TruncatedOperator {
    pub fn new(layout: ModeLayout, matrix: ComplexMatrix, grade: Grade) -> Self {
        debug_assert_eq!(layout.total_dim(), matrix.rows());
        debug_assert!(matrix.is_square());
        Self {
            layout,
            matrix,
            grade,
        }
    }

    pub fn identity(layout: &ModeLayout) -> Self {
        Self::new(
            layout.clone(),
            ComplexMatrix::identity(layout.total_dim()),
            Grade::Even,
        )
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FockError> {
        if self.layout != other.layout {
            return Err(FockError::LayoutMismatch);
        }
        let matrix = self
            .matrix
            .matmul(&other.matrix)
            .expect("square same-dim product");
        Ok(Self::new(
            self.layout.clone(),
            matrix,
            self.grade.product(other.grade),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        if self.layout != other.layout {
            return Err(FockError::LayoutMismatch);
        }
        if self.grade != other.grade {
            return Err(FockError::GradeMismatch);
        }
        let matrix = self.matrix.add(&other.matrix).expect("same-dim sum");
        Ok(Self::new(self.layout.clone(), matrix, self.grade))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        if self.layout != other.layout {
            return Err(FockError::LayoutMismatch);
        }
        if self.grade != other.grade {
            return Err(FockError::GradeMismatch);
        }
        let matrix = self.matrix.sub(&other.matrix).expect("same-dim difference");
        Ok(Self::new(self.layout.clone(), matrix, self.grade))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::new(self.layout.clone(), self.matrix.scale(factor), self.grade)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.layout.clone(), self.matrix.adjoint(), self.grade)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, FockError> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(Self::new(
            self.layout.clone(),
            ab.matrix.sub(&ba.matrix).unwrap(),
            ab.grade,
        ))
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self, FockError> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(Self::new(
            self.layout.clone(),
            ab.matrix.add(&ba.matrix).unwrap(),
            ab.grade,
        ))
    }

    /// Graded bracket: anticommutator when both operands are odd, commutator
    /// otherwise.
    pub fn graded_bracket(&self, other: &Self) -> Result<Self, FockError> {
        if self.grade == Grade::Odd && other.grade == Grade::Odd {
            self.anticommutator(other)
        } else {
            self.commutator(other)
        }
    }

    /// Support of a diagonal 0/1 projector: the basis indices it keeps.
    pub fn diagonal_support(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.matrix[(i, i)].re > 0.5)
            .collect()
    }

    /// Residual of the declared grade under fermion-parity conjugation,
    /// relative to the operator norm: even operators must commute with the
    /// parity matrix, odd operators anticommute.
    pub fn grade_residual(&self) -> f64 {
        let parity = fermion_parity(&self.layout);
        let pap = parity.mul(self).unwrap().mul(&parity).unwrap();
        let expected = match self.grade {
            Grade::Even => self.matrix.clone(),
            Grade::Odd => self.matrix.scale_real(-1.0),
        };
        pap.matrix.sub(&expected).unwrap().fro_norm() / (self.matrix.fro_norm() + 1.0)
    }
}

/// Single-mode truncated annihilator: a[n-1, n] = sqrt(n).
pub fn single_boson_matrix(cutoff: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Annihilation/creation pair for the bosonic factor at `factor_index`.
pub fn boson_ops(
    layout: &ModeLayout,
    factor_index: usize,
) -> Result<(TruncatedOperator, TruncatedOperator), FockError> {
    let factor = layout
        .factors()
        .get(factor_index)
        .ok_or(FockError::FactorOutOfRange(factor_index))?;
    let Factor::Boson { cutoff } = *factor else {
        return Err(FockError::NotBoson(factor_index));
    };
    let dim = layout.total_dim();
    let mut a = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut st = layout.factor_states(col);
        let n = st[factor_index];
        if n >= 1 && n < cutoff {
            st[factor_index] = n - 1;
            let row = layout.basis_index(&st);
            a[(row, col)] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    let creator = a.adjoint();
    Ok((
        TruncatedOperator::new(layout.clone(), a, Grade::Even),
        TruncatedOperator::new(layout.clone(), creator, Grade::Even),
    ))
}

/// Annihilation/creation pair for the fermionic factor at `factor_index`,
/// with Jordan-Wigner signs over the fermionic factors to its left.
pub fn fermion_ops(
    layout: &ModeLayout,
    factor_index: usize,
) -> Result<(TruncatedOperator, TruncatedOperator), FockError> {
    let factor = layout
        .factors()
        .get(factor_index)
        .ok_or(FockError::FactorOutOfRange(factor_index))?;
    if !matches!(factor, Factor::Fermion) {
        return Err(FockError::NotFermion(factor_index));
    }
    let string_factors: Vec<usize> = layout
        .fermion_factor_indices()
        .into_iter()
        .filter(|&i| i < factor_index)
        .collect();
    let dim = layout.total_dim();
    let mut b = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut st = layout.factor_states(col);
        if st[factor_index] == 1 {
            let sign: f64 = string_factors
                .iter()
                .map(|&i| if st[i] == 1 { -1.0 } else { 1.0 })
                .product();
            st[factor_index] = 0;
            let row = layout.basis_index(&st);
            b[(row, col)] = C64::new(sign, 0.0);
        }
    }
    let creator = b.adjoint();
    Ok((
        TruncatedOperator::new(layout.clone(), b, Grade::Odd),
        TruncatedOperator::new(layout.clone(), creator, Grade::Odd),
    ))
}

/// Position and momentum quadratures of a bosonic mode at frequency `omega`:
/// x = (a + a†)/sqrt(2ω), p = i sqrt(ω/2)(a† − a).
pub fn quadratures(
    layout: &ModeLayout,
    factor_index: usize,
    omega: f64,
) -> Result<(TruncatedOperator, TruncatedOperator), FockError> {
    if omega <= 0.0 {
        return Err(FockError::NonPositiveFrequency(omega));
    }
    let (a, adag) = boson_ops(layout, factor_index)?;
    let x = a.add(&adag)?.scale_real(1.0 / (2.0 * omega).sqrt());
    let p = adag.sub(&a)?.scale(C64::new(0.0, (omega / 2.0).sqrt()));
    Ok((x, p))
}

/// Orthogonal projector onto basis states with total boson quanta at most
/// `max_quanta`; acts as the identity on fermion and spin factors.
pub fn total_quanta_projector(layout: &ModeLayout, max_quanta: usize) -> TruncatedOperator {
    let quanta = layout.boson_quanta();
    let diag: Vec<C64> = quanta
        .iter()
        .map(|&q| {
            if q <= max_quanta {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    TruncatedOperator::new(layout.clone(), ComplexMatrix::from_diag(&diag), Grade::Even)
}

/// Interior projector keeping states whose total boson quanta stay at least
/// `margin` levels below the smallest cutoff.
pub fn interior_projector(
    layout: &ModeLayout,
    margin: usize,
) -> Result<TruncatedOperator, FockError> {
    let cutoff = layout.min_boson_cutoff().unwrap_or(1);
    if margin >= cutoff {
        return Err(FockError::MarginTooLarge { margin, cutoff });
    }
    Ok(total_quanta_projector(layout, cutoff - 1 - margin))
}

/// Diagonal fermion-parity operator (−1)^{total fermion number}.
pub fn fermion_parity(layout: &ModeLayout) -> TruncatedOperator {
    let fermions = layout.fermion_factor_indices();
    let diag: Vec<C64> = (0..layout.total_dim())
        .map(|idx| {
            let st = layout.factor_states(idx);
            let occ: usize = fermions.iter().map(|&i| st[i]).sum();
            C64::new(if occ.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0)
        })
        .collect();
    TruncatedOperator::new(layout.clone(), ComplexMatrix::from_diag(&diag), Grade::Even)
}

/// Embed a small matrix acting on one factor, identity on the others.
pub fn embed_factor(
    layout: &ModeLayout,
    factor_index: usize,
    small: &ComplexMatrix,
    grade: Grade,
) -> Result<TruncatedOperator, FockError> {
    embed_product(layout, &[(factor_index, small)], grade)
}

/// Embed a product of small matrices acting on distinct factors, identity
/// elsewhere.  Built directly by index arithmetic, so the cost scales with
/// the number of nonzero entries rather than the cube of the dimension.
pub fn embed_product(
    layout: &ModeLayout,
    parts: &[(usize, &ComplexMatrix)],
    grade: Grade,
) -> Result<TruncatedOperator, FockError> {
    for &(idx, small) in parts {
        let factor = layout
            .factors()
            .get(idx)
            .ok_or(FockError::FactorOutOfRange(idx))?;
        if small.rows() != factor.dim() || small.cols() != factor.dim() {
            return Err(FockError::FactorDimMismatch {
                expected: factor.dim(),
                got_rows: small.rows(),
                got_cols: small.cols(),
            });
        }
    }
    let dim = layout.total_dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    // per-factor nonzero entries of each column
    let col_entries: Vec<Vec<Vec<(usize, C64)>>> = parts
        .iter()
        .map(|&(_, small)| {
            (0..small.cols())
                .map(|j| {
                    (0..small.rows())
                        .filter_map(|i| {
                            let v = small[(i, j)];
                            if v.re == 0.0 && v.im == 0.0 {
                                None
                            } else {
                                Some((i, v))
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    for col in 0..dim {
        let st = layout.factor_states(col);
        // cartesian product over the per-factor nonzero entries of this column
        let mut rows: Vec<(Vec<usize>, C64)> = vec![(st.clone(), C64::new(1.0, 0.0))];
        for (p, &(fidx, _)) in parts.iter().enumerate() {
            let entries = &col_entries[p][st[fidx]];
            let mut next_rows = Vec::with_capacity(rows.len() * entries.len());
            for (base_state, base_val) in &rows {
                for &(i, v) in entries {
                    let mut s = base_state.clone();
                    s[fidx] = i;
                    next_rows.push((s, base_val * v));
                }
            }
            rows = next_rows;
        }
        for (state, val) in rows {
            let row = layout.basis_index(&state);
            out[(row, col)] += val;
        }
    }
    Ok(TruncatedOperator::new(layout.clone(), out, grade))
}
