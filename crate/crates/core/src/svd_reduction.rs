//! One-qubit unital maps given by an arbitrary real 3x3 Bloch matrix.
//!
//! `M = B D A` with proper rotations A, B and diagonal D reduces the map to
//! `Ψ_B ∘ Φ_D ∘ Ω_A` where Ω_A and Ψ_B are unitary conjugations lifted from
//! the rotations. Complete positivity of M is then that of the diagonal
//! map D, and the four-term decomposition of Φ_D carries over with elements
//! `U_B σ_i U_A`.

use nalgebra::{Matrix3, Vector3};

use crate::channels::SignedOperatorSum;
use crate::diagonal_af::{af_betas, is_cp_diagonal, BetaVector, DiagonalSpec};
use crate::error::{input, Result};
use crate::linalg::{c, ComplexMatrix};
use crate::pauli_basis::pauli;

/// Accepted deviation from orthogonality / unit determinant for rotations.
pub const ROTATION_TOL: f64 = 1e-8;

/// `det M` at or above this value takes the nonnegative-determinant branch.
pub const DET_ZERO_TOL: f64 = 1e-12;

/// Relative size below which the smallest singular value is treated as zero.
const SIGMA_ZERO_TOL: f64 = 1e-13;

/// `M = B · diag(d) · A` with B, A in SO(3).
#[derive(Debug, Clone, PartialEq)]
pub struct RotationFactorization {
    pub b: Matrix3<f64>,
    pub d: Vector3<f64>,
    pub a: Matrix3<f64>,
    pub source: Matrix3<f64>,
}

impl RotationFactorization {
    pub fn d_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&self.d)
    }

    pub fn product(&self) -> Matrix3<f64> {
        self.b * self.d_matrix() * self.a
    }

    /// max |BDA - M|.
    pub fn residual(&self) -> f64 {
        (self.product() - self.source).amax()
    }
}

/// Factor `m = B D A` with B, A proper rotations.
///
/// If det M ≥ 0, D holds the singular values in decreasing order;
/// otherwise D holds their negatives in increasing order, i.e.
/// (-σ₁, -σ₂, -σ₃) with σ₁ ≥ σ₂ ≥ σ₃.
pub fn signed_svd(m: &Matrix3<f64>) -> RotationFactorization {
    let svd = m.svd(true, true);
    let mut u = svd.u.expect("requested U");
    let mut v_t = svd.v_t.expect("requested Vᵀ");
    let mut sigma = svd.singular_values;

    // Sort descending; permute columns of U and rows of Vᵀ alongside.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));
    let u_sorted = Matrix3::from_columns(&order.map(|k| u.column(k).into_owned()));
    let vt_sorted = Matrix3::from_rows(&order.map(|k| v_t.row(k).into_owned()));
    sigma = Vector3::from(order.map(|k| sigma[k]));
    u = u_sorted;
    v_t = vt_sorted;

    // Make both factors proper; the flips are absorbed into the last singular value.
    let mut third = sigma[2];
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        third = -third;
    }
    if v_t.determinant() < 0.0 {
        v_t.row_mut(2).neg_mut();
        third = -third;
    }

    // Now M = U diag(σ₁, σ₂, t) Vᵀ with t = ±σ₃ and sign(t) = sign(det M).
    let zero_sigma = third.abs() <= SIGMA_ZERO_TOL * sigma[0].max(1.0);
    let nonnegative = third >= 0.0 || (zero_sigma && m.determinant() >= -DET_ZERO_TOL);
    let (b, d) = if nonnegative {
        (u, Vector3::new(sigma[0], sigma[1], third.abs()))
    } else {
        // diag(σ₁, σ₂, -σ₃) = diag(-1, -1, 1) · diag(-σ₁, -σ₂, -σ₃)
        let flip = Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0));
        (u * flip, Vector3::new(-sigma[0], -sigma[1], -sigma[2]))
    };
    RotationFactorization {
        b,
        d,
        a: v_t,
        source: *m,
    }
}

/// A rotation and the special unitary whose conjugation realizes it on Bloch vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryLift {
    pub rotation: Matrix3<f64>,
    pub unitary: ComplexMatrix,
}

pub fn is_rotation(r: &Matrix3<f64>, tol: f64) -> bool {
    (r.transpose() * r - Matrix3::identity()).amax() <= tol && (r.determinant() - 1.0).abs() <= tol
}

/// U = w I - i (x σ₁ + y σ₂ + z σ₃) from the unit quaternion (w, x, y, z) of R.
///
/// The quaternion component with the largest magnitude is recovered from
/// the diagonal first, which stays accurate at angles near 0 and π.
pub fn rotation_to_unitary(r: &Matrix3<f64>) -> Result<UnitaryLift> {
    if !is_rotation(r, ROTATION_TOL) {
        return input("matrix is not a proper rotation (RᵀR ≠ I or det R ≠ 1)");
    }
    let tr = r.trace();
    let (w, x, y, z);
    if tr >= r[(0, 0)] && tr >= r[(1, 1)] && tr >= r[(2, 2)] {
        let s = (1.0 + tr).max(0.0).sqrt() * 2.0; // 4w
        w = s / 4.0;
        x = (r[(2, 1)] - r[(1, 2)]) / s;
        y = (r[(0, 2)] - r[(2, 0)]) / s;
        z = (r[(1, 0)] - r[(0, 1)]) / s;
    } else if r[(0, 0)] >= r[(1, 1)] && r[(0, 0)] >= r[(2, 2)] {
        let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).max(0.0).sqrt() * 2.0; // 4x
        w = (r[(2, 1)] - r[(1, 2)]) / s;
        x = s / 4.0;
        y = (r[(0, 1)] + r[(1, 0)]) / s;
        z = (r[(0, 2)] + r[(2, 0)]) / s;
    } else if r[(1, 1)] >= r[(2, 2)] {
        let s = (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).max(0.0).sqrt() * 2.0; // 4y
        w = (r[(0, 2)] - r[(2, 0)]) / s;
        x = (r[(0, 1)] + r[(1, 0)]) / s;
        y = s / 4.0;
        z = (r[(1, 2)] + r[(2, 1)]) / s;
    } else {
        let s = (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).max(0.0).sqrt() * 2.0; // 4z
        w = (r[(1, 0)] - r[(0, 1)]) / s;
        x = (r[(0, 2)] + r[(2, 0)]) / s;
        y = (r[(1, 2)] + r[(2, 1)]) / s;
        z = s / 4.0;
    }
    let norm = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / norm, x / norm, y / norm, z / norm);
    let unitary = ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(w, -z), c(-y, -x), c(y, -x), c(w, z)],
    );
    Ok(UnitaryLift {
        rotation: *r,
        unitary,
    })
}

/// Rotation R with U (r·σ) U† = (R r)·σ, for a 2x2 unitary U.
pub fn unitary_to_rotation(u: &ComplexMatrix) -> Result<Matrix3<f64>> {
    if u.shape() != (2, 2) {
        return input("expected a 2x2 unitary");
    }
    let sigmas: Vec<ComplexMatrix> = (1..4).map(|i| pauli(i).unwrap().into_matrix()).collect();
    let images: Vec<ComplexMatrix> = sigmas.iter().map(|s| u * s * u.adjoint()).collect();
    Ok(Matrix3::from_fn(|i, j| {
        crate::linalg::trace_of_product(&sigmas[i], &images[j]).re / 2.0
    }))
}

fn diagonal_of(f: &RotationFactorization) -> DiagonalSpec {
    DiagonalSpec::new(1, f.d.iter().copied().collect()).expect("three entries")
}

/// Whether `ρ ↦ (I + M r·σ)/2` is a quantum operation, with the β of D.
pub fn is_unital_quantum_operation(m: &Matrix3<f64>, tol: f64) -> (bool, BetaVector) {
    is_cp_diagonal(&diagonal_of(&signed_svd(m)), tol)
}

/// `Φ_M(ρ) = Σ_i β_i (U_B σ_i U_A) ρ (U_B σ_i U_A)†` with Σβ_i = 1.
///
/// The weights are signed in general; they are all nonnegative exactly
/// when Φ_M is completely positive.
pub fn decompose_unital(m: &Matrix3<f64>) -> SignedOperatorSum {
    let f = signed_svd(m);
    let beta = af_betas(&diagonal_of(&f));
    let ua = rotation_to_unitary(&f.a).expect("signed_svd yields rotations").unitary;
    let ub = rotation_to_unitary(&f.b).expect("signed_svd yields rotations").unitary;
    SignedOperatorSum::new(
        1,
        (0..4).map(|i| {
            let s = pauli(i).unwrap().into_matrix();
            (beta[i], &ub * s * &ua)
        }),
    )
    .expect("2x2 elements")
}
