use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use unital_core::{
    decompose_unital, diagonal_from_channel, is_cp_diagonal, is_unital_quantum_operation,
    kraus_from_spec, one_qubit_af_inequalities, one_qubit_positivity, signed_svd,
    ComplexMatrix, SignedOperatorSum, BOUNDARY_BAND, DEFAULT_TOL,
};

use crate::report::{
    complex_rows, fmt_complex_matrix, fmt_real_rows, fmt_vec, matrix3_rows, real_rows, terms_of,
    write_json, Report, TermOut,
};
use crate::spec_file::{load_spec, ChannelSpec};
use crate::CliError;

/// A verdict from one of the fast tests together with its signed margin
/// (negative means not CP).
struct FastVerdict {
    is_cp: bool,
    margin: f64,
    source: &'static str,
}

fn tp_tol(tol: f64) -> f64 {
    DEFAULT_TOL.max(tol)
}

/// Compares a fast verdict with the Choi oracle. Disagreement outside the
/// boundary band is an internal inconsistency.
fn reconcile(fast: &FastVerdict, oracle_cp: bool, oracle_min: f64) -> Result<bool, CliError> {
    let agrees = fast.is_cp == oracle_cp;
    if !agrees && fast.margin.abs() > BOUNDARY_BAND && oracle_min.abs() > BOUNDARY_BAND {
        return Err(CliError::Inconsistent(format!(
            "{} says {} (margin {:e}) but the Choi oracle says {} (min eigenvalue {:e})",
            fast.source,
            if fast.is_cp { "CP" } else { "not CP" },
            fast.margin,
            if oracle_cp { "CP" } else { "not CP" },
            oracle_min
        )));
    }
    Ok(agrees)
}

/// Picks the strongest decomposition-free test applicable to an operator sum.
fn fast_path_for_sum(phi: &SignedOperatorSum, tol: f64) -> Option<(FastVerdict, Option<Vec<f64>>)> {
    if let Some(v) = phi.sign_verdict() {
        let margin = phi.weights().fold(f64::INFINITY, f64::min);
        return Some((
            FastVerdict {
                is_cp: v,
                margin,
                source: "sign pattern of independent elements",
            },
            None,
        ));
    }
    if !(phi.is_unital(tp_tol(tol)) && phi.is_trace_preserving(tp_tol(tol))) {
        return None;
    }
    if let Ok(Some(spec)) = diagonal_from_channel(phi, 1e-9) {
        let (cp, beta) = is_cp_diagonal(&spec, tol);
        return Some((
            FastVerdict {
                is_cp: cp,
                margin: beta.min(),
                source: "diagonal beta test",
            },
            Some(beta.into_vec()),
        ));
    }
    if phi.n() == 1 {
        let m = phi.bloch_matrix(tp_tol(tol)).ok()?;
        let m3 = nalgebra::Matrix3::from_fn(|i, j| m[(i, j)]);
        let (cp, beta) = is_unital_quantum_operation(&m3, tol);
        return Some((
            FastVerdict {
                is_cp: cp,
                margin: beta.min(),
                source: "rotation reduction + beta test",
            },
            Some(beta.into_vec()),
        ));
    }
    None
}

pub fn check(path: &Path, tol: f64, oracle: bool, out: Option<&Path>) -> Result<Report, CliError> {
    let start = Instant::now();
    let spec = load_spec(path).map_err(CliError::Input)?;
    let n = spec.n();

    let (channel, fast, beta, af, bloch) = match &spec {
        ChannelSpec::Diagonal(s) => {
            let (cp, beta) = is_cp_diagonal(s, tol);
            let af = (n == 1).then(|| {
                let d = s.diagonal();
                one_qubit_af_inequalities(d[0], d[1], d[2])
            });
            let bloch = (n <= 2).then(|| {
                let m = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
                    s.diagonal().to_vec(),
                ));
                real_rows(&m)
            });
            let fast = FastVerdict {
                is_cp: cp,
                margin: beta.min(),
                source: "diagonal beta test",
            };
            (kraus_from_spec(s), Some(fast), Some(beta.into_vec()), af, bloch)
        }
        ChannelSpec::BlochMatrix(m) => {
            let (cp, beta) = is_unital_quantum_operation(m, tol);
            let d = signed_svd(m).d;
            let af = Some(one_qubit_af_inequalities(d[0], d[1], d[2]));
            let fast = FastVerdict {
                is_cp: cp,
                margin: beta.min(),
                source: "rotation reduction + beta test",
            };
            (
                decompose_unital(m),
                Some(fast),
                Some(beta.into_vec()),
                af,
                Some(matrix3_rows(m)),
            )
        }
        ChannelSpec::OperatorSum(phi) => {
            let fast = fast_path_for_sum(phi, tol);
            let (fast, beta) = match fast {
                Some((f, b)) => (Some(f), b),
                None => (None, None),
            };
            let bloch = if n <= 2 {
                phi.bloch_matrix(tp_tol(tol)).ok().map(|m| real_rows(&m))
            } else {
                None
            };
            (phi.clone(), fast, beta, None, bloch)
        }
    };

    // The four-weight inequalities and the beta test are the same statement;
    // any disagreement away from the boundary is a bug.
    if let (Some(af), Some(f)) = (af, &fast) {
        if af != f.is_cp && f.margin.abs() > BOUNDARY_BAND {
            return Err(CliError::Inconsistent(format!(
                "one-qubit inequalities say {af} but the beta test says {} (min beta {:e})",
                f.is_cp, f.margin
            )));
        }
    }

    let run_oracle = oracle || fast.is_none();
    let (choi_min, oracle_cp) = if run_oracle {
        let (cp, min) = channel.is_completely_positive(tol);
        (Some(min), Some(cp))
    } else {
        (None, None)
    };

    let (is_cp, source, margin, oracle_agrees) = match (&fast, oracle_cp) {
        (Some(f), Some(ocp)) => {
            let agrees = reconcile(f, ocp, choi_min.unwrap())?;
            (f.is_cp, f.source, f.margin, Some(agrees))
        }
        (Some(f), None) => (f.is_cp, f.source, f.margin, None),
        (None, Some(ocp)) => (ocp, "choi oracle", choi_min.unwrap(), None),
        (None, None) => unreachable!("oracle runs when no fast path applies"),
    };

    let positivity = match (&spec, &beta) {
        (ChannelSpec::Diagonal(_), Some(b)) if n == 1 => Some(one_qubit_positivity([b[0], b[1], b[2], b[3]])),
        _ => None,
    };
    let elements_independent = channel.elements_linearly_independent();
    let report = Report {
        kind: spec.kind().to_string(),
        n,
        tol,
        is_cp,
        verdict_source: source.to_string(),
        boundary: margin.abs() <= BOUNDARY_BAND,
        min_beta: beta.as_ref().map(|b| b.iter().copied().fold(f64::INFINITY, f64::min)),
        beta,
        af_inequalities: af,
        positivity,
        sign_verdict: elements_independent.then(|| channel.weights().all(|w| w >= 0.0)),
        elements_independent,
        is_trace_preserving: channel.is_trace_preserving(tp_tol(tol)),
        is_unital: channel.is_unital(tp_tol(tol)),
        bloch_matrix: bloch,
        kraus_terms: terms_of(&channel),
        min_choi_eigenvalue: choi_min,
        oracle_agrees,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if let Some(out) = out {
        write_json(out, &report)?;
    }
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct KrausListing {
    pub kind: String,
    pub n: usize,
    pub folded: bool,
    pub terms: Vec<TermOut>,
    /// max |Σ K†K - I| for folded output.
    pub completeness_error: Option<f64>,
}

impl KrausListing {
    pub fn human(&self) -> String {
        let mut s = format!(
            "kind: {}\nn: {}\n{} terms{}\n",
            self.kind,
            self.n,
            self.terms.len(),
            if self.folded { " (weights folded into elements)" } else { "" }
        );
        for (k, t) in self.terms.iter().enumerate() {
            if self.folded {
                s.push_str(&format!("K[{k}]:\n"));
            } else {
                s.push_str(&format!("term {k}: weight {}\n", t.weight));
            }
            let m = ComplexMatrix::from_fn(t.element.len(), t.element.len(), |i, j| {
                unital_core::Complex64::new(t.element[i][j][0], t.element[i][j][1])
            });
            s.push_str(&fmt_complex_matrix(&m, "  "));
        }
        if let Some(e) = self.completeness_error {
            s.push_str(&format!("sum K^dagger K = I (max deviation {e:e})\n"));
        }
        s
    }
}

pub fn kraus(path: &Path, tol: f64, fold: bool, out: Option<&Path>) -> Result<KrausListing, CliError> {
    let spec = load_spec(path).map_err(CliError::Input)?;
    let phi = match &spec {
        ChannelSpec::Diagonal(s) => kraus_from_spec(s),
        ChannelSpec::BlochMatrix(m) => decompose_unital(m),
        ChannelSpec::OperatorSum(phi) => phi.clone(),
    };
    let listing = if fold {
        if let Some((k, t)) = phi.terms().iter().enumerate().find(|(_, t)| t.weight < -tol) {
            return Err(CliError::NotCp(format!(
                "cannot fold weights: term {k} has negative weight {}; \
                 this decomposition is not a Kraus decomposition",
                t.weight
            )));
        }
        let ks: Vec<ComplexMatrix> = phi
            .terms()
            .iter()
            .filter(|t| t.weight > 0.0)
            .map(|t| t.element.scale(t.weight.sqrt()))
            .collect();
        let dim = phi.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &ks {
            sum += k.adjoint() * k;
        }
        let err = unital_core::linalg::max_abs_diff(&sum, &ComplexMatrix::identity(dim, dim));
        if err > tp_tol(tol) {
            return Err(CliError::NotCp(format!(
                "folded operators are not trace preserving: max |sum K^dagger K - I| = {err:e}"
            )));
        }
        KrausListing {
            kind: spec.kind().into(),
            n: spec.n(),
            folded: true,
            terms: ks.iter().map(|k| TermOut::new(1.0, k)).collect(),
            completeness_error: Some(err),
        }
    } else {
        KrausListing {
            kind: spec.kind().into(),
            n: spec.n(),
            folded: false,
            terms: terms_of(&phi),
            completeness_error: None,
        }
    };
    if let Some(out) = out {
        write_json(out, &listing)?;
    }
    Ok(listing)
}

#[derive(Debug, Serialize)]
pub struct FactorListing {
    pub m: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub d: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub det_m: f64,
    pub residual: f64,
}

impl FactorListing {
    pub fn human(&self) -> String {
        format!(
            "B:\n{}D: {}\nA:\n{}det M: {}\nresidual max|BDA - M|: {:e}\n",
            fmt_real_rows(&self.b, "  "),
            fmt_vec(&self.d),
            fmt_real_rows(&self.a, "  "),
            self.det_m,
            self.residual
        )
    }
}

pub fn factor(path: &Path, out: Option<&Path>) -> Result<FactorListing, CliError> {
    let spec = load_spec(path).map_err(CliError::Input)?;
    let ChannelSpec::BlochMatrix(m) = spec else {
        return Err(CliError::Input(format!(
            "{}: factor needs kind bloch_matrix_3x3, got {}",
            path.display(),
            spec.kind()
        )));
    };
    let f = signed_svd(&m);
    let listing = FactorListing {
        m: matrix3_rows(&m),
        b: matrix3_rows(&f.b),
        d: f.d.iter().copied().collect(),
        a: matrix3_rows(&f.a),
        det_m: m.determinant(),
        residual: f.residual(),
    };
    if let Some(out) = out {
        write_json(out, &listing)?;
    }
    Ok(listing)
}

#[derive(Debug, Serialize)]
pub struct ChoiListing {
    pub kind: String,
    pub n: usize,
    pub choi: Vec<Vec<[f64; 2]>>,
    pub eigenvalues: Vec<f64>,
    pub is_cp: bool,
}

impl ChoiListing {
    pub fn human(&self) -> String {
        let dim = self.choi.len();
        let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
            unital_core::Complex64::new(self.choi[i][j][0], self.choi[i][j][1])
        });
        format!(
            "kind: {}\nn: {}\nchoi matrix ({dim}x{dim}):\n{}eigenvalues: {}\ncompletely positive: {}\n",
            self.kind,
            self.n,
            fmt_complex_matrix(&m, "  "),
            fmt_vec(&self.eigenvalues),
            self.is_cp
        )
    }
}

pub fn choi(path: &Path, tol: f64, out: Option<&Path>) -> Result<ChoiListing, CliError> {
    let spec = load_spec(path).map_err(CliError::Input)?;
    let phi = match &spec {
        ChannelSpec::Diagonal(s) => kraus_from_spec(s),
        ChannelSpec::BlochMatrix(m) => decompose_unital(m),
        ChannelSpec::OperatorSum(phi) => phi.clone(),
    };
    let j = phi.choi_matrix();
    let eigenvalues = j.eigenvalues();
    let listing = ChoiListing {
        kind: spec.kind().into(),
        n: spec.n(),
        choi: complex_rows(j.matrix()),
        is_cp: eigenvalues[0] >= -tol,
        eigenvalues,
    };
    if let Some(out) = out {
        write_json(out, &listing)?;
    }
    Ok(listing)
}
