//! Numerical operator algebra for the Swanson oscillator family.
//!
//! The crate builds, in truncated graded Fock spaces, the non-Hermitian
//! oscillator `H = ω(a†a + ½) + αa² + βa†²`, the one-parameter family of
//! positive-definite metric operators `ζ₊(z) = ρ²` that makes it
//! quasi-Hermitian, the equivalent Hermitian Hamiltonian, and the
//! supersymmetric extension generated by the su(1,1|1) superalgebra.  Every
//! algebraic identity of the construction can be verified numerically to
//! configurable tolerances, either through the library API or through the
//! `swanson` command-line tool.
//!
//! Modules mirror the layering of the construction:
//!
//! * [`numkernel`] — dense complex linear algebra (products, adjoints,
//!   eigendecompositions, matrix exponentials, inverses, norms),
//! * [`fockspace`] — graded multi-mode Hilbert spaces and ladder operators,
//! * [`superalgebra`] — su(1,1) / su(1,1|1) generator sets and the
//!   structure-relation checkers,
//! * [`metric`] — the Swanson Hamiltonian, the metric family and its
//!   factorization,
//! * [`susy`] — supercharges, pseudo-supercharges and the graded algebra
//!   checks,
//! * [`realizations`] — alternative generator realizations (n-mode
//!   boson-fermion oscillator, spin-orbit model),
//! * [`report`] / [`suites`] — machine-readable verification reports and the
//!   orchestration used by the CLI.
//!
//! With the default `parallel` feature the dense kernels and the z-grid
//! sweeps run on rayon; disabling default features yields a fully sequential
//! build with identical results.

pub mod fockspace;
pub mod metric;
pub mod numkernel;
pub mod realizations;
pub mod report;
pub mod suites;
pub mod superalgebra;
pub mod susy;

pub use numkernel::{ComplexMatrix, NumError, C64};
