//! Complete positivity of diagonal Bloch superoperators on n qubits.
//!
//! A diagonal map fixes I and scales each λ_i by d_i. Since
//! `λ_j λ_i λ_j = s_ji λ_i / 2^{n-1}`, the map `ρ ↦ Σ_j β_j λ_j ρ λ_j` has the
//! λ_i as eigenvectors with eigenvalues `(S β)_i / 2^{n-1}`. Solving for β
//! with `S² = 4^n I` gives
//!
//! ```text
//! β = S (1, d₁, …, d_{4^n-1})ᵀ / 2^{n+1}
//! ```
//!
//! and, because the λ_j are linearly independent, the map is completely
//! positive iff every β_j ≥ 0. For one qubit these four inequalities are
//! the Algoet-Fujiwara conditions on (d₁, d₂, d₃).

use crate::channels::SignedOperatorSum;
use crate::error::{input, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pauli_basis::{basis_size, pauli_basis, sign_transform};

/// Threshold for treating off-diagonal Bloch-matrix entries as zero.
pub const DIAGONAL_TOL: f64 = 1e-10;

/// Diagonal (d₁, …, d_{4^n-1}) of a diagonal Bloch matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpec {
    n: usize,
    d: Vec<f64>,
}

impl DiagonalSpec {
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        pauli_basis(n)?;
        let expected = basis_size(n) - 1;
        if d.len() != expected {
            return input(format!(
                "diagonal for n = {n} needs {expected} entries, got {}",
                d.len()
            ));
        }
        if d.iter().any(|x| !x.is_finite()) {
            return input("diagonal entries must be finite");
        }
        Ok(DiagonalSpec { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.d
    }

    /// All |d_i| ≤ 1; necessary (not sufficient) for complete positivity.
    pub fn within_unit_norm(&self) -> bool {
        self.d.iter().all(|x| x.abs() <= 1.0)
    }
}

/// Weights β_0..β_{4^n-1} of the λ-diagonal operator-sum form.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaVector(Vec<f64>);

impl BetaVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Recovers (1, d) as `S β / 2^{n-1}`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.0.len().trailing_zeros() as usize / 2;
        let mut v = self.0.clone();
        sign_transform(&mut v);
        let scale = 1.0 / (1u64 << (n - 1)) as f64;
        v.iter_mut().for_each(|x| *x *= scale);
        v
    }
}

impl std::ops::Index<usize> for BetaVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// β = S (1, d)ᵀ / 2^{n+1}, computed with the fast sign transform.
pub fn af_betas(spec: &DiagonalSpec) -> BetaVector {
    let mut v = Vec::with_capacity(spec.d.len() + 1);
    v.push(1.0);
    v.extend_from_slice(&spec.d);
    sign_transform(&mut v);
    let scale = 1.0 / (1u64 << (spec.n + 1)) as f64;
    v.iter_mut().for_each(|x| *x *= scale);
    BetaVector(v)
}

/// `(min β ≥ -tol, β)`. Points on the boundary of the CP region count as CP.
pub fn is_cp_diagonal(spec: &DiagonalSpec, tol: f64) -> (bool, BetaVector) {
    let beta = af_betas(spec);
    (beta.min() >= -tol, beta)
}

/// `1 - d₃ ≥ |d₁ - d₂|` and `1 + d₃ ≥ |d₁ + d₂|`.
pub fn one_qubit_af_inequalities(d1: f64, d2: f64, d3: f64) -> bool {
    1.0 - d3 >= (d1 - d2).abs() && 1.0 + d3 >= (d1 + d2).abs()
}

/// Positivity (not complete positivity) of `ρ ↦ Σ β_i σ_i ρ σ_i`: every
/// pair of weights has a nonnegative sum.
pub fn one_qubit_positivity(beta: [f64; 4]) -> bool {
    (0..4).all(|i| (i + 1..4).all(|j| beta[i] + beta[j] >= 0.0))
}

/// `ρ ↦ Σ_j β_j λ_j ρ λ_j` with the (possibly negative) β of `spec`.
pub fn kraus_from_spec(spec: &DiagonalSpec) -> SignedOperatorSum {
    let basis = pauli_basis(spec.n).expect("validated at construction");
    let beta = af_betas(spec);
    SignedOperatorSum::new(
        spec.n,
        beta.0
            .iter()
            .zip(basis.elements())
            .map(|(&b, l)| (b, l.matrix().clone())),
    )
    .expect("basis elements have the channel dimension")
}

/// Kraus operators √β_j λ_j, for specs whose β are all ≥ -tol.
///
/// Weights in [-tol, 0) are clamped to zero and their terms omitted.
pub fn folded_kraus(spec: &DiagonalSpec, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let basis = pauli_basis(spec.n)?;
    let beta = af_betas(spec);
    if let Some((j, &b)) = beta.0.iter().enumerate().find(|(_, &b)| b < -tol) {
        return Err(Error::Contract(format!(
            "cannot fold weights: β_{j} = {b} is negative, the map is not completely positive"
        )));
    }
    Ok(beta
        .0
        .iter()
        .zip(basis.elements())
        .filter(|(&b, _)| b > 0.0)
        .map(|(&b, l)| l.matrix().scale(b.sqrt()))
        .collect())
}

/// The diagonal of Φ's Bloch matrix, if its off-diagonal entries are all ≤ `tol`.
pub fn diagonal_from_channel(phi: &SignedOperatorSum, tol: f64) -> Result<Option<DiagonalSpec>> {
    let m = phi.bloch_matrix(tol.max(DIAGONAL_TOL))?;
    let dim = m.nrows();
    for i in 0..dim {
        for j in 0..dim {
            if i != j && m[(i, j)].abs() > tol {
                return Ok(None);
            }
        }
    }
    let d = (0..dim).map(|i| m[(i, i)]).collect();
    DiagonalSpec::new(phi.n(), d).map(Some)
}
