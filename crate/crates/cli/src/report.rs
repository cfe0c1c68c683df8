use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, Matrix3};
use serde::Serialize;
use unital_core::{ComplexMatrix, SignedOperatorSum};

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct TermOut {
    pub weight: f64,
    /// Row-major `[re, im]` grid.
    pub element: Vec<Vec<[f64; 2]>>,
}

impl TermOut {
    pub fn new(weight: f64, m: &ComplexMatrix) -> Self {
        TermOut {
            weight,
            element: complex_rows(m),
        }
    }
}

pub fn complex_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn real_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn matrix3_rows(m: &Matrix3<f64>) -> Vec<Vec<f64>> {
    (0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect()).collect()
}

pub fn terms_of(phi: &SignedOperatorSum) -> Vec<TermOut> {
    phi.terms()
        .iter()
        .map(|t| TermOut::new(t.weight, &t.element))
        .collect()
}

/// Result of `check`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub kind: String,
    pub n: usize,
    pub tol: f64,
    pub is_cp: bool,
    /// Which test produced `is_cp`.
    pub verdict_source: String,
    pub boundary: bool,
    pub beta: Option<Vec<f64>>,
    pub min_beta: Option<f64>,
    pub af_inequalities: Option<bool>,
    pub positivity: Option<bool>,
    pub sign_verdict: Option<bool>,
    pub elements_independent: bool,
    pub is_trace_preserving: bool,
    pub is_unital: bool,
    pub bloch_matrix: Option<Vec<Vec<f64>>>,
    pub kraus_terms: Vec<TermOut>,
    pub min_choi_eigenvalue: Option<f64>,
    pub oracle_agrees: Option<bool>,
    pub elapsed_ms: f64,
}

fn fmt_opt_bool(v: Option<bool>) -> String {
    v.map_or_else(|| "n/a".to_string(), |b| b.to_string())
}

pub fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn fmt_complex(re: f64, im: f64) -> String {
    // Adding 0.0 turns -0.0 into 0.0.
    let (re, im) = (re + 0.0, im + 0.0);
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("{re:.6}{}{:.6}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

pub fn fmt_complex_matrix(m: &ComplexMatrix, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:>20}", fmt_complex(m[(i, j)].re, m[(i, j)].im)))
            .collect();
        let _ = writeln!(out, "{indent}{}", row.join(" "));
    }
    out
}

pub fn fmt_real_rows(rows: &[Vec<f64>], indent: &str) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>12.6}")).collect();
        let _ = writeln!(out, "{indent}{}", cells.join(" "));
    }
    out
}

impl Report {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind: {}", self.kind);
        let _ = writeln!(s, "n: {}", self.n);
        let verdict = match (self.is_cp, self.boundary) {
            (true, false) => "completely positive",
            (false, false) => "NOT completely positive",
            (true, true) => "completely positive (boundary)",
            (false, true) => "NOT completely positive (boundary)",
        };
        let _ = writeln!(s, "verdict: {verdict} [{}]", self.verdict_source);
        if let Some(beta) = &self.beta {
            let _ = writeln!(s, "beta: {}", fmt_vec(beta));
        }
        if let Some(m) = self.min_beta {
            let _ = writeln!(s, "min beta: {m}");
        }
        if self.af_inequalities.is_some() {
            let _ = writeln!(s, "af inequalities: {}", fmt_opt_bool(self.af_inequalities));
        }
        if self.positivity.is_some() {
            let _ = writeln!(s, "positive: {}", fmt_opt_bool(self.positivity));
        }
        let _ = writeln!(s, "sign verdict: {}", fmt_opt_bool(self.sign_verdict));
        let _ = writeln!(s, "elements independent: {}", self.elements_independent);
        let _ = writeln!(s, "trace preserving: {}", self.is_trace_preserving);
        let _ = writeln!(s, "unital: {}", self.is_unital);
        if let Some(m) = self.min_choi_eigenvalue {
            let _ = writeln!(s, "choi min eigenvalue: {m}");
        }
        if let Some(a) = self.oracle_agrees {
            let _ = writeln!(s, "oracle agrees: {a}");
        }
        if let Some(rows) = &self.bloch_matrix {
            let _ = writeln!(s, "bloch matrix:");
            s.push_str(&fmt_real_rows(rows, "  "));
        }
        let _ = writeln!(s, "kraus terms: {}", self.kraus_terms.len());
        let _ = writeln!(s, "elapsed: {:.3} ms", self.elapsed_ms);
        s
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("cannot serialize output: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Input(format!("{}: cannot write: {e}", path.display())))
}
