//! Bloch-vector form of n-qubit states.
//!
//! A state is written `ρ = (I + c Σ_i r_i λ_i) / N` with `N = 2^n`,
//! `c = √(N(N-1)/2)` and the sum over basis elements 1..4^n-1. With this
//! normalization pure states have `|r| = 1`. Component `r[k]` pairs with
//! `λ_{k+1}`.

use crate::error::{input, Result};
use crate::linalg::{
    hermitian_eigenvalues, identity, is_hermitian, trace_of_product, ComplexMatrix,
};
use crate::pauli_basis::{basis_size, pauli_basis};

/// Default tolerance for positive semidefiniteness checks on density matrices.
pub const PSD_TOL: f64 = 1e-9;

/// Tolerance on tr(ρ) = 1 when reading a Bloch vector off a matrix.
pub const TRACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    n: usize,
    r: Vec<f64>,
}

impl BlochVector {
    pub fn new(n: usize, r: Vec<f64>) -> Result<Self> {
        pauli_basis(n)?;
        let expected = basis_size(n) - 1;
        if r.len() != expected {
            return input(format!(
                "Bloch vector for n = {n} needs {expected} components, got {}",
                r.len()
            ));
        }
        Ok(BlochVector { n, r })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; basis_size(n).saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[f64] {
        &self.r
    }

    pub fn norm(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// √(N(N-1)/2) for N = 2^n.
    pub fn normalization(&self) -> f64 {
        normalization(self.n)
    }
}

pub fn normalization(n: usize) -> f64 {
    let big_n = (1u64 << n) as f64;
    (big_n * (big_n - 1.0) / 2.0).sqrt()
}

/// A validated density matrix: Hermitian, unit trace, nonnegative spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !is_hermitian(&m, tol) {
            return input("density matrix must be Hermitian");
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return input(format!("density matrix must have unit trace, got {tr}"));
        }
        if !is_positive_semidefinite(&m, tol)? {
            return input("density matrix has a negative eigenvalue");
        }
        Ok(DensityMatrix { entries: m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.entries
    }
}

/// `(I + c r·λ) / N`. Hermitian with unit trace; positive only for
/// admissible `r` (for n = 1, exactly `|r| ≤ 1`).
pub fn density_from_bloch(v: &BlochVector) -> ComplexMatrix {
    let basis = pauli_basis(v.n).expect("validated at construction");
    let dim = basis.dim();
    let c = v.normalization();
    let mut m = identity(dim);
    for (k, &rk) in v.r.iter().enumerate() {
        if rk != 0.0 {
            m += basis.element(k + 1).matrix().scale(c * rk);
        }
    }
    m.scale(1.0 / dim as f64)
}

/// Inverts [`density_from_bloch`] using `tr(λ_i λ_j) = 2δ_ij`.
pub fn bloch_from_density(rho: &ComplexMatrix, n: usize) -> Result<BlochVector> {
    let basis = pauli_basis(n)?;
    let dim = basis.dim();
    if rho.shape() != (dim, dim) {
        return input(format!(
            "expected a {dim}x{dim} matrix for n = {n}, got {}x{}",
            rho.nrows(),
            rho.ncols()
        ));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return input(format!("matrix trace {tr} is not 1"));
    }
    let scale = dim as f64 / (2.0 * normalization(n));
    let r = basis.elements()[1..]
        .iter()
        .map(|l| trace_of_product(l.matrix(), rho).re * scale)
        .collect();
    Ok(BlochVector { n, r })
}

/// tr(ρ²) of the state with Bloch vector `v`: `1/N + (1 - 1/N)|r|²`.
pub fn purity(v: &BlochVector) -> f64 {
    let inv_n = 1.0 / (1u64 << v.n) as f64;
    let r2: f64 = v.r.iter().map(|x| x * x).sum();
    inv_n + (1.0 - inv_n) * r2
}

/// True iff the smallest eigenvalue of the Hermitian matrix `m` is ≥ -tol.
pub fn is_positive_semidefinite(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let eig = hermitian_eigenvalues(m, tol.max(1e-12))?;
    Ok(eig[0] >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg::{c, max_abs_diff};
    use crate::pauli_basis::{pauli, tensor};
    use proptest::prelude::*;

    #[test]
    fn maximally_mixed_and_pure_one_qubit_states() {
        let mixed = density_from_bloch(&BlochVector::zero(1).unwrap());
        assert!(max_abs_diff(&mixed, &identity(2).scale(0.5)) < 1e-15);

        let up = density_from_bloch(&BlochVector::new(1, vec![0.0, 0.0, 1.0]).unwrap());
        let mut expected = ComplexMatrix::zeros(2, 2);
        expected[(0, 0)] = c(1.0, 0.0);
        assert!(max_abs_diff(&up, &expected) < 1e-15);
    }

    #[test]
    fn two_qubit_zz_component() {
        let mut r = vec![0.0; 15];
        r[14] = 1.0;
        let rho = density_from_bloch(&BlochVector::new(2, r).unwrap());
        let z = pauli(3).unwrap().into_matrix();
        let zz = tensor(&z, &z);
        // (1/4)(I + √6 · σ3⊗σ3/√2)
        let expected = (identity(4) + zz.scale(6f64.sqrt() / 2f64.sqrt())).scale(0.25);
        assert!(max_abs_diff(&rho, &expected) < 1e-14);
    }

    #[test]
    fn bloch_from_density_examples() {
        let mut up = ComplexMatrix::zeros(2, 2);
        up[(0, 0)] = c(1.0, 0.0);
        assert_eq!(bloch_from_density(&up, 1).unwrap().components(), &[0.0, 0.0, 1.0]);

        let mixed = identity(2).scale(0.5);
        assert_eq!(bloch_from_density(&mixed, 1).unwrap().components(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn bloch_from_density_rejects_bad_trace_and_shape() {
        assert!(matches!(bloch_from_density(&identity(2), 1), Err(Error::Input(_))));
        assert!(matches!(
            bloch_from_density(&identity(4).scale(0.25), 1),
            Err(Error::Input(_))
        ));
        assert!(matches!(BlochVector::new(2, vec![0.0; 3]), Err(Error::Input(_))));
    }

    #[test]
    fn purity_examples() {
        assert_eq!(purity(&BlochVector::zero(1).unwrap()), 0.5);
        assert!((purity(&BlochVector::new(1, vec![0.6, 0.0, 0.8]).unwrap()) - 1.0).abs() < 1e-15);
        let mut r = vec![0.0; 15];
        r[3] = 0.5;
        let v = BlochVector::new(2, r).unwrap();
        assert!((purity(&v) - 7.0 / 16.0).abs() < 1e-15);
        let rho = density_from_bloch(&v);
        assert!((trace_of_product(&rho, &rho).re - 7.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn positivity_examples() {
        let mut up = ComplexMatrix::zeros(2, 2);
        up[(0, 0)] = c(1.0, 0.0);
        assert!(is_positive_semidefinite(&up, PSD_TOL).unwrap());
        assert!(!is_positive_semidefinite(pauli(3).unwrap().matrix(), PSD_TOL).unwrap());
        let outside = density_from_bloch(&BlochVector::new(1, vec![0.0, 1.1, 0.0]).unwrap());
        assert!(!is_positive_semidefinite(&outside, PSD_TOL).unwrap());

        let mut skew = ComplexMatrix::zeros(2, 2);
        skew[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(is_positive_semidefinite(&skew, PSD_TOL), Err(Error::Input(_))));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(identity(2).scale(0.5), 1e-12).is_ok());
        assert!(DensityMatrix::new(pauli(3).unwrap().into_matrix(), 1e-12).is_err());
        let neg = density_from_bloch(&BlochVector::new(1, vec![0.0, 0.0, 1.5]).unwrap());
        assert!(DensityMatrix::new(neg, 1e-9).is_err());
    }

    fn vector_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1.0f64..1.0, basis_size(n) - 1)
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(n in 1usize..=3, seed in vector_strategy(3)) {
            let r: Vec<f64> = seed[..basis_size(n) - 1].to_vec();
            let v = BlochVector::new(n, r).unwrap();
            let rho = density_from_bloch(&v);
            prop_assert!(is_hermitian(&rho, 1e-14));
            prop_assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-12);
            let back = bloch_from_density(&rho, n).unwrap();
            for (a, b) in v.components().iter().zip(back.components()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn one_qubit_positivity_iff_inside_ball(r in proptest::collection::vec(-1.3f64..1.3, 3)) {
            let v = BlochVector::new(1, r).unwrap();
            prop_assume!((v.norm() - 1.0).abs() > 1e-8);
            let psd = is_positive_semidefinite(&density_from_bloch(&v), 1e-10).unwrap();
            prop_assert_eq!(psd, v.norm() <= 1.0);
        }
    }
}
