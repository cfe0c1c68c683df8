//! Certification of unital quantum operations in Bloch form.
//!
//! The crate decides when a superoperator on n qubits is completely
//! positive and trace preserving, and synthesizes operator-sum
//! decompositions for it:
//!
//! - [`pauli_basis`]: Pauli matrices, the dictionary-ordered normalized
//!   tensor-product basis and the conjugation sign tables.
//! - [`bloch`]: density matrices ↔ Bloch vectors, purity, PSD checks.
//! - [`channels`]: signed operator sums, Choi matrices (the reference CP
//!   oracle), Bloch matrices and the sign-pattern verdict.
//! - [`diagonal_af`]: CP test and decomposition for diagonal Bloch maps
//!   on n qubits.
//! - [`svd_reduction`]: rotation-diagonal-rotation factorization of one-qubit
//!   Bloch matrices and the rotation → SU(2) lift.

#![forbid(unsafe_code)]

pub mod bloch;
pub mod channels;
pub mod diagonal_af;
pub mod error;
pub mod linalg;
pub mod pauli_basis;
pub mod svd_reduction;

pub use bloch::{
    bloch_from_density, density_from_bloch, is_positive_semidefinite, purity, BlochVector,
    DensityMatrix,
};
pub use channels::{CPReport, ChoiMatrix, SignedOperatorSum, Term, CP_TOL};
pub use diagonal_af::{
    af_betas, diagonal_from_channel, folded_kraus, is_cp_diagonal, kraus_from_spec,
    one_qubit_af_inequalities, one_qubit_positivity, BetaVector, DiagonalSpec,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DEFAULT_TOL};
pub use num_complex::Complex64;
pub use pauli_basis::{
    basis_element, pauli, pauli_basis, sign_table, sign_transform, tensor, BasisElement,
    PauliBasis, PauliMatrix, SignTable, MAX_QUBITS,
};
pub use svd_reduction::{
    decompose_unital, is_unital_quantum_operation, rotation_to_unitary, signed_svd,
    unitary_to_rotation, RotationFactorization, UnitaryLift,
};

/// Verdicts within this distance of zero are reported as boundary cases.
pub const BOUNDARY_BAND: f64 = 1e-7;
