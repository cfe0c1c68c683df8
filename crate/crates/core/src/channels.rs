//! Superoperators in signed operator-sum form `Φ(ρ) = Σ_j w_j A_j ρ A_j†`
//! with real weights, and the checks run against them.
//!
//! [`SignedOperatorSum::is_completely_positive`] is the reference verdict:
//! it inspects the spectrum of the Choi matrix and does not depend on the
//! particular decomposition. Every faster test in this crate is validated
//! against it.

use nalgebra::DMatrix;

use crate::error::{input, Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, hs_inner, identity, max_abs, max_abs_diff, trace_of_product,
    ComplexMatrix, DEFAULT_TOL,
};
use crate::pauli_basis::{check_qubits, pauli_basis};

/// Choi eigenvalue threshold for declaring a map completely positive.
pub const CP_TOL: f64 = 1e-9;

/// Relative singular-value threshold of the Gram matrix for linear independence.
pub const GRAM_RANK_TOL: f64 = 1e-8;

/// Terms whose weight or element is at most this large are dropped.
pub const ZERO_TERM_TOL: f64 = 1e-14;

/// One `(w, A)` summand.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: f64,
    pub element: ComplexMatrix,
}

/// `ρ ↦ Σ_j w_j A_j ρ A_j†` on 2^n x 2^n matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedOperatorSum {
    n: usize,
    terms: Vec<Term>,
}

impl SignedOperatorSum {
    /// Builds the sum, dropping terms with (numerically) zero weight or element.
    pub fn new<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, ComplexMatrix)>,
    {
        check_qubits(n)?;
        let dim = 1usize << n;
        let mut kept = Vec::new();
        for (k, (weight, element)) in terms.into_iter().enumerate() {
            if element.shape() != (dim, dim) {
                return input(format!(
                    "term {k}: element is {}x{}, expected {dim}x{dim}",
                    element.nrows(),
                    element.ncols()
                ));
            }
            if !weight.is_finite() || element.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return input(format!("term {k}: non-finite entry"));
            }
            if weight.abs() <= ZERO_TERM_TOL || max_abs(&element) <= ZERO_TERM_TOL {
                continue;
            }
            kept.push(Term { weight, element });
        }
        Ok(SignedOperatorSum { n, terms: kept })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, [(1.0, identity(1 << n))])
    }

    /// `ρ ↦ U ρ U†`; `u` must be 2^n x 2^n for some n.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let dim = u.nrows();
        if !u.is_square() || !dim.is_power_of_two() || dim < 2 {
            return input(format!("unitary must be 2^n x 2^n, got {}x{}", u.nrows(), u.ncols()));
        }
        Self::new(dim.trailing_zeros() as usize, [(1.0, u)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.weight)
    }

    /// True when every weight is exactly ±1.
    pub fn has_unit_signs(&self) -> bool {
        self.weights().all(|w| w == 1.0 || w == -1.0)
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dim = self.dim();
        if rho.shape() != (dim, dim) {
            return input(format!(
                "input is {}x{}, channel acts on {dim}x{dim}",
                rho.nrows(),
                rho.ncols()
            ));
        }
        Ok(self.apply_unchecked(rho))
    }

    pub(crate) fn apply_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let dim = self.dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for t in &self.terms {
            out += (&t.element * rho * t.element.adjoint()).scale(t.weight);
        }
        out
    }

    /// `J = Σ_{jk} E_jk ⊗ Φ(E_jk)`.
    ///
    /// Each term contributes `w · v v†` with `v = vec(A)` stacked column by
    /// column, which is the same matrix without forming the d² blocks.
    pub fn choi_matrix(&self) -> ChoiMatrix {
        let d2 = self.dim() * self.dim();
        let mut j = ComplexMatrix::zeros(d2, d2);
        for t in &self.terms {
            // nalgebra storage is column-major: slice[col * d + row] = A[row, col].
            let v = t.element.as_slice();
            for (r, vr) in v.iter().enumerate() {
                let wr = vr * t.weight;
                for (cidx, vc) in v.iter().enumerate() {
                    j[(r, cidx)] += wr * vc.conj();
                }
            }
        }
        ChoiMatrix { entries: j }
    }

    /// `(min Choi eigenvalue ≥ -tol, min Choi eigenvalue)`.
    pub fn is_completely_positive(&self, tol: f64) -> (bool, f64) {
        let min = self.choi_matrix().min_eigenvalue();
        (min >= -tol, min)
    }

    /// Σ w_j A_j† A_j = I within `tol`.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let mut acc = ComplexMatrix::zeros(self.dim(), self.dim());
        for t in &self.terms {
            acc += (t.element.adjoint() * &t.element).scale(t.weight);
        }
        max_abs_diff(&acc, &identity(self.dim())) <= tol
    }

    /// Σ w_j A_j A_j† = I within `tol`.
    pub fn is_unital(&self, tol: f64) -> bool {
        let mut acc = ComplexMatrix::zeros(self.dim(), self.dim());
        for t in &self.terms {
            acc += (&t.element * t.element.adjoint()).scale(t.weight);
        }
        max_abs_diff(&acc, &identity(self.dim())) <= tol
    }

    /// Whether the elements are linearly independent in the matrix space.
    ///
    /// Uses the Hilbert-Schmidt Gram matrix; near-singular cases
    /// (smallest/largest eigenvalue ≤ [`GRAM_RANK_TOL`]) count as dependent.
    pub fn elements_linearly_independent(&self) -> bool {
        let k = self.terms.len();
        if k == 0 {
            return true;
        }
        if k > self.dim() * self.dim() {
            return false;
        }
        let gram = ComplexMatrix::from_fn(k, k, |i, j| {
            hs_inner(&self.terms[i].element, &self.terms[j].element)
        });
        let eig = hermitian_eigenvalues(&gram, 1e-8 * max_abs(&gram).max(1.0))
            .expect("Gram matrices are Hermitian");
        let largest = eig[k - 1];
        largest > 0.0 && eig[0] > GRAM_RANK_TOL * largest
    }

    /// Complete positivity read off the weight signs, when that is valid.
    ///
    /// With independent elements, Φ is CP exactly when no weight is
    /// negative. With dependent elements the signs say nothing (√2I, I
    /// with weights +1, -1 is the identity map), so `None` is returned.
    pub fn sign_verdict(&self) -> Option<bool> {
        self.elements_linearly_independent()
            .then(|| self.weights().all(|w| w >= 0.0))
    }

    /// The real (4^n-1)x(4^n-1) matrix M with Φ(λ_j) = Σ_i M_ij λ_i.
    ///
    /// Only defined for unital, trace-preserving maps; anything else is a
    /// contract error because the affine part would otherwise be lost.
    pub fn bloch_matrix(&self, tol: f64) -> Result<DMatrix<f64>> {
        if !self.is_unital(tol) {
            return Err(Error::Contract("Bloch matrix requires a unital map".into()));
        }
        if !self.is_trace_preserving(tol) {
            return Err(Error::Contract(
                "Bloch matrix requires a trace-preserving map".into(),
            ));
        }
        Ok(self.bloch_matrix_unchecked())
    }

    pub(crate) fn bloch_matrix_unchecked(&self) -> DMatrix<f64> {
        let basis = pauli_basis(self.n).expect("validated at construction");
        let m = basis.len() - 1;
        let images: Vec<ComplexMatrix> = basis.elements()[1..]
            .iter()
            .map(|l| self.apply_unchecked(l.matrix()))
            .collect();
        DMatrix::from_fn(m, m, |i, j| {
            trace_of_product(basis.element(i + 1).matrix(), &images[j]).re / 2.0
        })
    }

    /// Runs every check and collects the verdicts.
    pub fn report(&self, tol: f64) -> CPReport {
        let (is_cp, min_choi_eigenvalue) = self.is_completely_positive(tol);
        let elements_independent = self.elements_linearly_independent();
        CPReport {
            is_cp,
            min_choi_eigenvalue,
            is_trace_preserving: self.is_trace_preserving(DEFAULT_TOL.max(tol)),
            is_unital: self.is_unital(DEFAULT_TOL.max(tol)),
            sign_verdict: elements_independent.then(|| self.weights().all(|w| w >= 0.0)),
            elements_independent,
        }
    }
}

/// Choi matrix of a superoperator; block (j, k) is Φ(E_jk).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    entries: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.entries
    }

    /// Ascending eigenvalues. Weighted sums of `v v†` are Hermitian by construction.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let scale = max_abs(&self.entries).max(1.0);
        hermitian_eigenvalues(&self.entries, 1e-9 * scale).expect("Choi matrix is Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CPReport {
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
    pub is_trace_preserving: bool,
    pub is_unital: bool,
    /// Sign-pattern verdict; `None` when the elements are dependent.
    pub sign_verdict: Option<bool>,
    pub elements_independent: bool,
}

/// Reference channels on one qubit.
pub mod fixtures {
    use super::SignedOperatorSum;
    use crate::linalg::{c, identity, ComplexMatrix};
    use crate::pauli_basis::pauli;

    fn scaled_pauli(i: usize, s: f64) -> ComplexMatrix {
        pauli(i).unwrap().into_matrix().scale(s)
    }

    /// ρ ↦ ρᵀ as (I ρ I + σ1 ρ σ1 - σ2 ρ σ2 + σ3 ρ σ3)/2.
    pub fn transpose() -> SignedOperatorSum {
        let s = 1.0 / 2f64.sqrt();
        SignedOperatorSum::new(
            1,
            [
                (1.0, scaled_pauli(0, s)),
                (1.0, scaled_pauli(1, s)),
                (-1.0, scaled_pauli(2, s)),
                (1.0, scaled_pauli(3, s)),
            ],
        )
        .unwrap()
    }

    /// The transpose again, as E00 ρ E00 + E11 ρ E11 + (σ1 ρ σ1 - σ2 ρ σ2)/2.
    pub fn transpose_alternative() -> SignedOperatorSum {
        let s = 1.0 / 2f64.sqrt();
        let mut e00 = ComplexMatrix::zeros(2, 2);
        e00[(0, 0)] = c(1.0, 0.0);
        let mut e11 = ComplexMatrix::zeros(2, 2);
        e11[(1, 1)] = c(1.0, 0.0);
        SignedOperatorSum::new(
            1,
            [
                (1.0, e00),
                (1.0, e11),
                (1.0, scaled_pauli(1, s)),
                (-1.0, scaled_pauli(2, s)),
            ],
        )
        .unwrap()
    }

    /// The identity map as (√2 I) ρ (√2 I) - I ρ I.
    pub fn signed_identity() -> SignedOperatorSum {
        SignedOperatorSum::new(
            1,
            [(1.0, identity(2).scale(2f64.sqrt())), (-1.0, identity(2))],
        )
        .unwrap()
    }

    /// ρ ↦ tr(ρ) I/2 as Σ_i (1/2) (σ_i/√2) ρ (σ_i/√2).
    pub fn completely_depolarizing() -> SignedOperatorSum {
        let s = 1.0 / 2f64.sqrt();
        SignedOperatorSum::new(1, (0..4).map(|i| (0.5, scaled_pauli(i, s)))).unwrap()
    }
}
