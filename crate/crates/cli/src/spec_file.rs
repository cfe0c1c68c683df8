//! Version 1 channel description files.
//!
//! ```json
//! { "version": 1, "kind": "diagonal", "n": 1, "payload": [1.0, -1.0, 1.0] }
//! { "version": 1, "kind": "bloch_matrix_3x3", "n": 1,
//!   "payload": [[0.9, 0, 0], [0, 0.9, 0], [0, 0, 0.9]] }
//! { "version": 1, "kind": "operator_sum", "n": 1,
//!   "payload": [{ "weight": 1.0, "element": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]] }] }
//! ```
//!
//! Matrices are row-major; complex entries are `[re, im]` pairs. Unknown
//! fields are rejected. Every error carries a line and column; semantic
//! errors point at the key they concern.

use std::path::Path;

use nalgebra::Matrix3;
use serde::Deserialize;
use unital_core::{Complex64, ComplexMatrix, DiagonalSpec, SignedOperatorSum};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub enum ChannelSpec {
    Diagonal(DiagonalSpec),
    BlochMatrix(Matrix3<f64>),
    OperatorSum(SignedOperatorSum),
}

impl ChannelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ChannelSpec::Diagonal(_) => "diagonal",
            ChannelSpec::BlochMatrix(_) => "bloch_matrix_3x3",
            ChannelSpec::OperatorSum(_) => "operator_sum",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ChannelSpec::Diagonal(s) => s.n(),
            ChannelSpec::BlochMatrix(_) => 1,
            ChannelSpec::OperatorSum(phi) => phi.n(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    version: u32,
    kind: String,
    n: usize,
    payload: serde_json::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    weight: f64,
    element: Vec<Vec<[f64; 2]>>,
}

/// Semantic error: the key it concerns and a message.
type FieldError = (&'static str, String);

fn validate(raw: RawSpec) -> Result<ChannelSpec, FieldError> {
    if raw.version != FORMAT_VERSION {
        return Err((
            "version",
            format!("unsupported version {} (expected {FORMAT_VERSION})", raw.version),
        ));
    }
    let n = raw.n;
    if n == 0 || n > unital_core::MAX_QUBITS {
        return Err(("n", format!("n must be in 1..={}, got {n}", unital_core::MAX_QUBITS)));
    }
    let payload = |msg: String| ("payload", msg);
    match raw.kind.as_str() {
        "diagonal" => {
            let d: Vec<f64> = serde_json::from_value(raw.payload)
                .map_err(|e| payload(format!("diagonal payload must be an array of numbers: {e}")))?;
            let spec = DiagonalSpec::new(n, d).map_err(|e| payload(e.to_string()))?;
            Ok(ChannelSpec::Diagonal(spec))
        }
        "bloch_matrix_3x3" => {
            if n != 1 {
                return Err(("n", format!("kind bloch_matrix_3x3 requires n = 1, got {n}")));
            }
            let rows: Vec<Vec<f64>> = serde_json::from_value(raw.payload)
                .map_err(|e| payload(format!("bloch_matrix_3x3 payload must be a 3x3 array: {e}")))?;
            if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
                return Err(payload("bloch_matrix_3x3 payload must have 3 rows of 3 numbers".into()));
            }
            Ok(ChannelSpec::BlochMatrix(Matrix3::from_fn(|i, j| rows[i][j])))
        }
        "operator_sum" => {
            let terms: Vec<RawTerm> = serde_json::from_value(raw.payload)
                .map_err(|e| payload(format!("operator_sum payload: {e}")))?;
            if terms.is_empty() {
                return Err(payload("operator_sum payload has no terms".into()));
            }
            let dim = 1usize << n;
            let mut parsed = Vec::with_capacity(terms.len());
            for (k, t) in terms.into_iter().enumerate() {
                if t.element.len() != dim || t.element.iter().any(|r| r.len() != dim) {
                    return Err(payload(format!("term {k}: element must be {dim}x{dim} for n = {n}")));
                }
                let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
                    let [re, im] = t.element[i][j];
                    Complex64::new(re, im)
                });
                parsed.push((t.weight, m));
            }
            let phi = SignedOperatorSum::new(n, parsed).map_err(|e| payload(e.to_string()))?;
            Ok(ChannelSpec::OperatorSum(phi))
        }
        other => Err((
            "kind",
            format!("unknown kind {other:?} (expected diagonal, bloch_matrix_3x3 or operator_sum)"),
        )),
    }
}

/// 1-based line and column of the first `"key"` in `text`, or (1, 1).
fn key_position(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    let Some(offset) = text.find(&needle) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, column)
}

/// Parses a spec from text. Errors read `line L, column C: message`.
pub fn parse_spec(text: &str) -> Result<ChannelSpec, String> {
    let raw = serde_json::from_str::<RawSpec>(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg
            .rsplit_once(" at line ")
            .map(|(head, _)| head.to_string())
            .unwrap_or(msg);
        format!("line {}, column {}: {msg}", e.line(), e.column())
    })?;
    validate(raw).map_err(|(key, msg)| {
        let (line, column) = key_position(text, key);
        format!("line {line}, column {column}: {msg}")
    })
}

pub fn load_spec(path: &Path) -> Result<ChannelSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: cannot read: {e}", path.display()))?;
    parse_spec(&text).map_err(|e| format!("{}: {e}", path.display()))
}
