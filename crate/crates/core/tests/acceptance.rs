//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p unital-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{Matrix3, Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unital_core::channels::fixtures;
use unital_core::linalg::max_abs_diff;
use unital_core::{
    bloch_from_density, density_from_bloch, is_cp_diagonal, kraus_from_spec,
    one_qubit_af_inequalities, one_qubit_positivity, pauli, purity, rotation_to_unitary,
    signed_svd, unitary_to_rotation, BlochVector, Complex64, ComplexMatrix, DiagonalSpec,
    BOUNDARY_BAND,
};

const SEED: u64 = 0x5eed_0001;

type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn within(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn uniform_vec(rng: &mut ChaCha8Rng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(lo..=hi)).collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller.
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn random_su2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut q = [0.0; 4];
    q.iter_mut().for_each(|x| *x = gaussian(rng));
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = Complex64::new(q[0] / norm, q[1] / norm);
    let b = Complex64::new(q[2] / norm, q[3] / norm);
    ComplexMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// M_ij = tr(σ_i U σ_j U†)/2.
fn bloch_of_unitary(u: &ComplexMatrix) -> Matrix3<f64> {
    let s: Vec<ComplexMatrix> = (1..4).map(|i| pauli(i).unwrap().into_matrix()).collect();
    Matrix3::from_fn(|i, j| (&s[i] * u * &s[j] * u.adjoint()).trace().re / 2.0)
}

/// d_i = Σ_j S_ij w_j with S_ij = ∏_k C(i_k, j_k) over base-4 digits and
/// C(a, b) = +1 iff a = 0, b = 0 or a = b. Σ w = 1 gives the unit entry.
fn diagonal_from_weights(n: usize, w: &[f64]) -> Vec<f64> {
    let sign = |mut i: usize, mut j: usize| {
        let mut s = 1.0;
        for _ in 0..n {
            let (a, b) = (i % 4, j % 4);
            if !(a == 0 || b == 0 || a == b) {
                s = -s;
            }
            i /= 4;
            j /= 4;
        }
        s
    };
    (1..w.len())
        .map(|i| w.iter().enumerate().map(|(j, wj)| sign(i, j) * wj).sum())
        .collect()
}

/// Choi-oracle verdict and minimum eigenvalue.
fn choi_verdict(spec: &DiagonalSpec) -> (bool, f64) {
    let (_, min) = kraus_from_spec(spec).is_completely_positive(0.0);
    (min >= 0.0, min)
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let (mut checked, mut banded, mut disagreements) = (0, 0, 0);
    for _ in 0..10_000 {
        let d = uniform_vec(rng, 3, -1.2, 1.2);
        let spec = DiagonalSpec::new(1, d.clone()).unwrap();
        let (_, beta) = is_cp_diagonal(&spec, 0.0);
        let (choi_cp, choi_min) = choi_verdict(&spec);
        if beta.min().abs() <= BOUNDARY_BAND || choi_min.abs() <= BOUNDARY_BAND {
            banded += 1;
            continue;
        }
        checked += 1;
        let af = one_qubit_af_inequalities(d[0], d[1], d[2]);
        let by_beta = beta.min() >= 0.0;
        if af != by_beta || by_beta != choi_cp {
            disagreements += 1;
        }
    }
    let elapsed = start.elapsed();
    within(
        disagreements == 0 && elapsed < Duration::from_secs(10),
        format!(
            "{checked} checked, {banded} in band, {disagreements} disagreements, {:.2} s (limit 10 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut total_disagreements = 0;
    for (n, samples) in [(2usize, 2000usize), (3, 200)] {
        let len = (1 << (2 * n)) - 1;
        let (mut disagreements, mut banded, mut cp) = (0, 0, 0);
        for _ in 0..samples {
            let spec = DiagonalSpec::new(n, uniform_vec(rng, len, -1.0, 1.0)).unwrap();
            let (_, beta) = is_cp_diagonal(&spec, 0.0);
            let (choi_cp, choi_min) = choi_verdict(&spec);
            if beta.min().abs() <= BOUNDARY_BAND || choi_min.abs() <= BOUNDARY_BAND {
                banded += 1;
                continue;
            }
            let by_beta = beta.min() >= 0.0;
            cp += usize::from(by_beta);
            if by_beta != choi_cp {
                disagreements += 1;
            }
        }
        total_disagreements += disagreements;
        parts.push(format!(
            "n={n}: {samples} samples, {cp} cp, {banded} in band, {disagreements} disagreements"
        ));
    }
    // Random points in the full cube are almost never CP. Add points built
    // from weight vectors around the simplex so both verdicts are exercised.
    let (mut near, mut near_cp) = (0, 0);
    for n in [2usize, 3] {
        let dim = 1 << (2 * n);
        for _ in 0..100 {
            let mut w: Vec<f64> = (0..dim).map(|_| -rng.random_range(f64::EPSILON..1.0).ln()).collect();
            let shift = rng.random_range(0.0..2.0) * w.iter().copied().fold(f64::INFINITY, f64::min);
            let total: f64 = w.iter().map(|x| x - shift).sum();
            w.iter_mut().for_each(|x| *x = (*x - shift) / total);
            let spec = DiagonalSpec::new(n, diagonal_from_weights(n, &w)).unwrap();
            let (_, beta) = is_cp_diagonal(&spec, 0.0);
            let (choi_cp, choi_min) = choi_verdict(&spec);
            if beta.min().abs() <= BOUNDARY_BAND || choi_min.abs() <= BOUNDARY_BAND {
                continue;
            }
            near += 1;
            near_cp += usize::from(choi_cp);
            if (beta.min() >= 0.0) != choi_cp {
                total_disagreements += 1;
            }
        }
    }
    parts.push(format!("{near} simplex extras ({near_cp} cp)"));
    let elapsed = start.elapsed();
    within(
        total_disagreements == 0 && elapsed < Duration::from_secs(60),
        format!("{}; {:.2} s (limit 60 s)", parts.join("; "), elapsed.as_secs_f64()),
    )
}

fn criterion_3() -> Outcome {
    let spec = DiagonalSpec::new(1, vec![1.0, -1.0, 1.0]).unwrap();
    let (_, beta) = is_cp_diagonal(&spec, 0.0);
    let exact = beta.as_slice() == [0.5, 0.5, -0.5, 0.5];
    let phi = fixtures::transpose();
    let sign = phi.sign_verdict();
    let (_, choi_min) = phi.is_completely_positive(0.0);
    let positive = one_qubit_positivity([beta[0], beta[1], beta[2], beta[3]]);
    within(
        exact && sign == Some(false) && (choi_min + 1.0).abs() <= 1e-10 && positive,
        format!(
            "beta {:?}, sign verdict {sign:?}, choi min {choi_min:.3e}, positive {positive}",
            beta.as_slice()
        ),
    )
}

fn criterion_4() -> Outcome {
    let phi = fixtures::signed_identity();
    let unital = phi.is_unital(1e-12);
    let tp = phi.is_trace_preserving(1e-12);
    let (cp, choi_min) = phi.is_completely_positive(1e-9);
    let sign = phi.sign_verdict();
    within(
        unital && tp && cp && sign.is_none(),
        format!("unital {unital}, trace preserving {tp}, choi min {choi_min:.3e}, sign verdict {sign:?}"),
    )
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst_orth: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    let mut worst_formula: f64 = 0.0;
    for _ in 0..500 {
        let u = random_su2(rng);
        let m = match unitary_to_rotation(&u) {
            Ok(m) => m,
            Err(e) => return fail(format!("unitary_to_rotation failed: {e}")),
        };
        worst_orth = worst_orth.max((m.transpose() * m - Matrix3::identity()).amax());
        worst_det = worst_det.max((m.determinant() - 1.0).abs());
        worst_formula = worst_formula.max((m - bloch_of_unitary(&u)).amax());
    }
    let mut worst_lift: f64 = 0.0;
    let mut worst_unitarity: f64 = 0.0;
    for k in 0..500 {
        let axis = Vector3::new(gaussian(rng), gaussian(rng), gaussian(rng)).normalize();
        // Cover the awkward angles near 0 and π as well as the bulk.
        let angle = match k % 5 {
            0 => rng.random_range(0.0..1e-6),
            1 => std::f64::consts::PI - rng.random_range(0.0..1e-6),
            _ => rng.random_range(0.0..std::f64::consts::PI),
        };
        let r = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle).into_inner();
        let lift = match rotation_to_unitary(&r) {
            Ok(l) => l,
            Err(e) => return fail(format!("rotation_to_unitary failed: {e}")),
        };
        let u = &lift.unitary;
        let id = ComplexMatrix::identity(2, 2);
        worst_unitarity = worst_unitarity.max(max_abs_diff(&(u.adjoint() * u), &id));
        worst_lift = worst_lift.max((bloch_of_unitary(u) - r).amax());
    }
    within(
        worst_orth <= 1e-10
            && worst_det <= 1e-10
            && worst_formula <= 1e-10
            && worst_lift <= 1e-9
            && worst_unitarity <= 1e-10,
        format!(
            "max |MᵀM-I| {worst_orth:.1e}, max |det-1| {worst_det:.1e}, trace formula {worst_formula:.1e}, \
             lift {worst_lift:.1e}, unitarity {worst_unitarity:.1e}"
        ),
    )
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst_residual: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    let mut ordering_failures = 0;
    let mut negative_det = 0;
    for _ in 0..1000 {
        let m = Matrix3::from_fn(|_, _| rng.random_range(-1.0..=1.0));
        let f = signed_svd(&m);
        worst_residual = worst_residual.max(f.residual());
        worst_det = worst_det
            .max((f.a.determinant() - 1.0).abs())
            .max((f.b.determinant() - 1.0).abs());
        // Singular values from the eigenvalues of MᵀM.
        let mut sigma: Vec<f64> = (m.transpose() * m)
            .symmetric_eigenvalues()
            .iter()
            .map(|x| x.max(0.0).sqrt())
            .collect();
        sigma.sort_by(|a, b| b.total_cmp(a));
        let d = [f.d[0], f.d[1], f.d[2]];
        let expected = if m.determinant() >= 0.0 {
            sigma.clone()
        } else {
            negative_det += 1;
            sigma.iter().map(|s| -s).collect()
        };
        let ordered = if m.determinant() >= 0.0 {
            d[0] >= d[1] && d[1] >= d[2] && d[2] >= 0.0
        } else {
            d[0] <= d[1] && d[1] <= d[2] && d[2] <= 0.0
        };
        let matches = d.iter().zip(&expected).all(|(a, b)| (a - b).abs() <= 1e-8);
        if !(ordered && matches) {
            ordering_failures += 1;
        }
    }
    within(
        worst_residual <= 1e-10 && worst_det <= 1e-10 && ordering_failures == 0,
        format!(
            "max residual {worst_residual:.1e}, max |det-1| {worst_det:.1e}, \
             {ordering_failures} ordering failures ({negative_det} with det M < 0)"
        ),
    )
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let samples = 1_000_000;
    let mut cp = 0usize;
    let mut oracle_checked = 0;
    let mut oracle_disagreements = 0;
    for k in 0..samples {
        let d = uniform_vec(rng, 3, -1.0, 1.0);
        let spec = DiagonalSpec::new(1, d).unwrap();
        let (is_cp, beta) = is_cp_diagonal(&spec, 1e-9);
        cp += usize::from(is_cp);
        if k % 100 == 0 {
            let (choi_cp, choi_min) = choi_verdict(&spec);
            if beta.min().abs() > BOUNDARY_BAND && choi_min.abs() > BOUNDARY_BAND {
                oracle_checked += 1;
                if choi_cp != is_cp {
                    oracle_disagreements += 1;
                }
            }
        }
    }
    let fraction = cp as f64 / samples as f64;
    within(
        (fraction - 1.0 / 3.0).abs() <= 0.002 && oracle_disagreements == 0,
        format!(
            "fraction {fraction:.5} (target 0.33333 ± 0.002), oracle subsample {oracle_checked} with \
             {oracle_disagreements} disagreements"
        ),
    )
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst_purity: f64 = 0.0;
    let mut worst_round_trip: f64 = 0.0;
    for n in 1..=3usize {
        let len = (1 << (2 * n)) - 1;
        for _ in 0..1000 {
            let mut r: Vec<f64> = (0..len).map(|_| gaussian(rng)).collect();
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            let radius: f64 = rng.random_range(0.0..=1.0);
            r.iter_mut().for_each(|x| *x *= radius / norm);
            let v = BlochVector::new(n, r).unwrap();
            let rho = density_from_bloch(&v);
            let tr_sq: f64 = rho.iter().map(Complex64::norm_sqr).sum();
            worst_purity = worst_purity.max((purity(&v) - tr_sq).abs());
            let back = match bloch_from_density(&rho, n) {
                Ok(b) => b,
                Err(e) => return fail(format!("bloch_from_density failed: {e}")),
            };
            let err = back
                .components()
                .iter()
                .zip(v.components())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst_round_trip = worst_round_trip.max(err);
        }
    }
    within(
        worst_purity <= 1e-12 && worst_round_trip <= 1e-12,
        format!("max purity error {worst_purity:.1e}, max round-trip error {worst_round_trip:.1e}"),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("one-qubit AF equivalence", Box::new(criterion_1)),
        ("n-qubit beta test vs Choi oracle", Box::new(criterion_2)),
        ("transpose fixture", Box::new(|_| criterion_3())),
        ("dependent-elements fixture", Box::new(|_| criterion_4())),
        ("rotation correspondence", Box::new(criterion_5)),
        ("rotation-diagonal-rotation factorization", Box::new(criterion_6)),
        ("CP-region volume", Box::new(criterion_7)),
        ("purity and round trip", Box::new(criterion_8)),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut rng);
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        failures += usize::from(!outcome.ok);
        println!(
            "{status} [{}] {name}: {} ({:.2} s)",
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
