//! Alternative su(1,1|1) realizations consumable by every check upstream:
//! the n-mode boson-fermion oscillator and the spin-orbit model with three
//! bosonic modes, a spin-1/2 factor and a two-level grading factor.

use crate::fockspace::{
    boson_ops, embed_product, fermion_ops, single_boson_matrix, Factor, Grade, ModeLayout,
    TruncatedOperator,
};
use crate::metric::ModelError;
use crate::numkernel::{c64, ComplexMatrix};
use crate::superalgebra::{su11_single_mode, GeneratorSet};
use serde::{Deserialize, Serialize};

/// Which generator realization to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RealizationKind {
    SingleMode,
    NMode { modes: usize },
    SpinOrbit,
}

impl RealizationKind {
    pub fn name(&self) -> String {
        match self {
            RealizationKind::SingleMode => "single_mode".into(),
            RealizationKind::NMode { modes } => format!("n_mode({modes})"),
            RealizationKind::SpinOrbit => "spin_orbit".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RealizationSpec {
    pub kind: RealizationKind,
    pub boson_cutoff: usize,
}

impl RealizationSpec {
    pub fn new(kind: RealizationKind, boson_cutoff: usize) -> Result<Self, ModelError> {
        if let RealizationKind::NMode { modes } = kind {
            if modes < 2 {
                return Err(ModelError::InvalidParams(
                    "n-mode realization needs at least 2 mode pairs".into(),
                ));
            }
        }
        Ok(Self { kind, boson_cutoff })
    }

    pub fn layout(&self) -> Result<ModeLayout, ModelError> {
        let n = self.boson_cutoff;
        let factors = match self.kind {
            RealizationKind::SingleMode => {
                vec![Factor::Boson { cutoff: n }, Factor::Fermion]
            }
            RealizationKind::NMode { modes } => {
                let mut f = vec![Factor::Boson { cutoff: n }; modes];
                f.extend(std::iter::repeat_n(Factor::Fermion, modes));
                f
            }
            RealizationKind::SpinOrbit => vec![
                Factor::Boson { cutoff: n },
                Factor::Boson { cutoff: n },
                Factor::Boson { cutoff: n },
                Factor::Spin { dim: 2 },
                Factor::Fermion,
            ],
        };
        Ok(ModeLayout::new(factors)?)
    }

    pub fn generators(&self) -> Result<GeneratorSet, ModelError> {
        match self.kind {
            RealizationKind::SingleMode => single_mode_generators(self),
            RealizationKind::NMode { .. } => n_mode_generators(self),
            RealizationKind::SpinOrbit => spin_orbit_generators(self),
        }
    }
}

/// Delegates to the single boson-fermion pair construction.
pub fn single_mode_generators(spec: &RealizationSpec) -> Result<GeneratorSet, ModelError> {
    let layout = spec.layout()?;
    Ok(su11_single_mode(&layout)?)
}

/// n commuting boson-fermion pairs:
/// K0 = (Σ a†ᵢaᵢ + n/2)/2, K± = Σ a†ᵢ²/2 resp. Σ aᵢ²/2,
/// Y = (Σ b†ᵢbᵢ − n/2)/2, V+ = Σ a†ᵢb†ᵢ/√2, V− = Σ aᵢb†ᵢ/√2,
/// W+ = Σ a†ᵢbᵢ/√2, W− = Σ aᵢbᵢ/√2, with Jordan-Wigner fermions.
pub fn n_mode_generators(spec: &RealizationSpec) -> Result<GeneratorSet, ModelError> {
    let RealizationKind::NMode { modes } = spec.kind else {
        return Err(ModelError::InvalidParams(
            "spec is not an n-mode realization".into(),
        ));
    };
    let layout = spec.layout()?;
    let identity = TruncatedOperator::identity(&layout);
    let half_n = modes as f64 / 2.0;
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();

    let mut number_b = identity.scale_real(0.0);
    let mut k_plus = identity.scale_real(0.0);
    let mut k_minus = identity.scale_real(0.0);
    let mut number_f = identity.scale_real(0.0);
    let zero_odd = TruncatedOperator::new(
        layout.clone(),
        ComplexMatrix::zeros(layout.total_dim(), layout.total_dim()),
        Grade::Odd,
    );
    let mut v_plus = zero_odd.clone();
    let mut v_minus = zero_odd.clone();
    let mut w_plus = zero_odd.clone();
    let mut w_minus = zero_odd;

    for i in 0..modes {
        let (a, adag) = boson_ops(&layout, i)?;
        let (b, bdag) = fermion_ops(&layout, modes + i)?;
        number_b = number_b.add(&adag.mul(&a)?)?;
        k_plus = k_plus.add(&adag.mul(&adag)?.scale_real(0.5))?;
        k_minus = k_minus.add(&a.mul(&a)?.scale_real(0.5))?;
        number_f = number_f.add(&bdag.mul(&b)?)?;
        v_plus = v_plus.add(&adag.mul(&bdag)?.scale_real(inv_sqrt2))?;
        v_minus = v_minus.add(&a.mul(&bdag)?.scale_real(inv_sqrt2))?;
        w_plus = w_plus.add(&adag.mul(&b)?.scale_real(inv_sqrt2))?;
        w_minus = w_minus.add(&a.mul(&b)?.scale_real(inv_sqrt2))?;
    }
    let k0 = number_b.add(&identity.scale_real(half_n))?.scale_real(0.5);
    let y = number_f.sub(&identity.scale_real(half_n))?.scale_real(0.5);

    Ok(GeneratorSet {
        layout,
        k0,
        k_plus,
        k_minus,
        y: Some(y),
        v_plus: Some(v_plus),
        v_minus: Some(v_minus),
        w_plus: Some(w_plus),
        w_minus: Some(w_minus),
    })
}

fn pauli_matrices() -> [ComplexMatrix; 3] {
    let sx = ComplexMatrix::from_rows(&[
        vec![c64(0.0, 0.0), c64(1.0, 0.0)],
        vec![c64(1.0, 0.0), c64(0.0, 0.0)],
    ])
    .unwrap();
    let sy = ComplexMatrix::from_rows(&[
        vec![c64(0.0, 0.0), c64(0.0, -1.0)],
        vec![c64(0.0, 1.0), c64(0.0, 0.0)],
    ])
    .unwrap();
    let sz = ComplexMatrix::from_rows(&[
        vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(-1.0, 0.0)],
    ])
    .unwrap();
    [sx, sy, sz]
}

/// Orbital angular momentum from bosonic bilinears:
/// Lᵢ = −i εᵢⱼₖ a†ⱼ aₖ over the three bosonic factors.
fn angular_momentum(
    layout: &ModeLayout,
    adag_small: &ComplexMatrix,
    a_small: &ComplexMatrix,
) -> Result<[TruncatedOperator; 3], ModelError> {
    // epsilon_{ijk} over (0,1,2) with the nonzero entries spelled out
    let parts = |j: usize, k: usize| -> Result<TruncatedOperator, ModelError> {
        Ok(embed_product(
            layout,
            &[(j, adag_small), (k, a_small)],
            Grade::Even,
        )?)
    };
    let make = |j: usize, k: usize| -> Result<TruncatedOperator, ModelError> {
        // −i (a†ⱼ aₖ − a†ₖ aⱼ)
        let fwd = parts(j, k)?;
        let bwd = parts(k, j)?;
        Ok(fwd.sub(&bwd)?.scale(c64(0.0, -1.0)))
    };
    Ok([make(1, 2)?, make(2, 0)?, make(0, 1)?])
}

/// Spin-orbit realization on three bosonic modes ⊗ spin-1/2 ⊗ one grading
/// fermion: K's as in the three-mode oscillator, Y = (σ·L + 3/2)/2 times the
/// grading parity, and the odd generators (σ·a†)b etc. realizing the printed
/// two-by-two block pattern over the grading factor.
pub fn spin_orbit_generators(spec: &RealizationSpec) -> Result<GeneratorSet, ModelError> {
    if spec.kind != RealizationKind::SpinOrbit {
        return Err(ModelError::InvalidParams(
            "spec is not the spin-orbit realization".into(),
        ));
    }
    let layout = spec.layout()?;
    let identity = TruncatedOperator::identity(&layout);
    let cutoff = spec.boson_cutoff;
    let spin_factor = 3usize;
    let grading_factor = 4usize;

    let a_small = single_boson_matrix(cutoff);
    let adag_small = a_small.adjoint();
    let aa_small = a_small.matmul(&a_small).unwrap();
    let adag2_small = aa_small.adjoint();
    let n_small = adag_small.matmul(&a_small).unwrap();
    let paulis = pauli_matrices();
    let b_small = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    let bdag_small = b_small.adjoint();

    // K0 = (Σ a†ᵢaᵢ + 3/2)/2, K+ = Σ a†ᵢ²/2, K− = Σ aᵢ²/2
    let mut number_b = identity.scale_real(0.0);
    let mut k_plus = identity.scale_real(0.0);
    let mut k_minus = identity.scale_real(0.0);
    for i in 0..3 {
        number_b = number_b.add(&embed_product(&layout, &[(i, &n_small)], Grade::Even)?)?;
        k_plus = k_plus
            .add(&embed_product(&layout, &[(i, &adag2_small)], Grade::Even)?.scale_real(0.5))?;
        k_minus = k_minus
            .add(&embed_product(&layout, &[(i, &aa_small)], Grade::Even)?.scale_real(0.5))?;
    }
    let k0 = number_b.add(&identity.scale_real(1.5))?.scale_real(0.5);

    // σ·L over spin ⊗ bosons
    let ls = angular_momentum(&layout, &adag_small, &a_small)?;
    let mut spin_orbit = identity.scale_real(0.0);
    for (i, l) in ls.iter().enumerate() {
        let sigma_embedded = embed_product(&layout, &[(spin_factor, &paulis[i])], Grade::Even)?;
        spin_orbit = spin_orbit.add(&sigma_embedded.mul(l)?)?;
    }

    // grading parity diag(1, −1) on the fermionic factor
    let parity_small = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
    let grading = embed_product(&layout, &[(grading_factor, &parity_small)], Grade::Even)?;
    let y = spin_orbit
        .add(&identity.scale_real(1.5))?
        .mul(&grading)?
        .scale_real(0.5);

    // odd generators: (1/√2)(Σᵢ σᵢ a†ᵢ)·b patterns over the grading factor
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let mut v_plus = TruncatedOperator::new(
        layout.clone(),
        ComplexMatrix::zeros(layout.total_dim(), layout.total_dim()),
        Grade::Odd,
    );
    let mut v_minus = v_plus.clone();
    let mut w_plus = v_plus.clone();
    let mut w_minus = v_plus.clone();
    for i in 0..3 {
        v_plus = v_plus.add(&embed_product(
            &layout,
            &[
                (spin_factor, &paulis[i]),
                (i, &adag_small),
                (grading_factor, &b_small),
            ],
            Grade::Odd,
        )?)?;
        v_minus = v_minus.add(&embed_product(
            &layout,
            &[
                (spin_factor, &paulis[i]),
                (i, &a_small),
                (grading_factor, &b_small),
            ],
            Grade::Odd,
        )?)?;
        w_plus = w_plus.add(&embed_product(
            &layout,
            &[
                (spin_factor, &paulis[i]),
                (i, &adag_small),
                (grading_factor, &bdag_small),
            ],
            Grade::Odd,
        )?)?;
        w_minus = w_minus.add(&embed_product(
            &layout,
            &[
                (spin_factor, &paulis[i]),
                (i, &a_small),
                (grading_factor, &bdag_small),
            ],
            Grade::Odd,
        )?)?;
    }

    Ok(GeneratorSet {
        layout,
        k0,
        k_plus,
        k_minus,
        y: Some(y),
        v_plus: Some(v_plus.scale_real(inv_sqrt2)),
        v_minus: Some(v_minus.scale_real(inv_sqrt2)),
        w_plus: Some(w_plus.scale_real(inv_sqrt2)),
        w_minus: Some(w_minus.scale_real(inv_sqrt2)),
    })
}
