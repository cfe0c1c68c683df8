//! Region sweeps over diagonal specs, written as CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use unital_core::{is_cp_diagonal, kraus_from_spec, DiagonalSpec, BOUNDARY_BAND, MAX_QUBITS};

use crate::CliError;

/// Upper bound on the number of rows a single sweep may produce.
pub const MAX_POINTS: usize = 5_000_000;

#[derive(Debug, Clone, Copy)]
pub enum Sampling {
    /// `k` points per axis, endpoints included.
    Grid(usize),
    /// `k` uniform samples.
    Random(usize),
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n: usize,
    pub sampling: Sampling,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub rows: usize,
    pub cp: usize,
    pub boundary: usize,
    pub not_cp: usize,
    /// Rows with min β ≥ -tol, over all rows.
    pub cp_fraction: f64,
    pub oracle_disagreements: usize,
}

struct Row {
    d: Vec<f64>,
    min_beta: f64,
    choi_min: Option<f64>,
}

fn points(cfg: &SweepConfig) -> Result<Vec<Vec<f64>>, CliError> {
    let dims = (1usize << (2 * cfg.n)) - 1;
    match cfg.sampling {
        Sampling::Grid(k) => {
            if k < 2 {
                return Err(CliError::Input("grid needs at least 2 points per axis".into()));
            }
            let total = (k as f64).powi(dims as i32);
            if total > MAX_POINTS as f64 {
                return Err(CliError::Input(format!(
                    "grid of {k}^{dims} points exceeds the limit of {MAX_POINTS}"
                )));
            }
            let total = total as usize;
            let step = (cfg.hi - cfg.lo) / (k - 1) as f64;
            Ok((0..total)
                .map(|mut idx| {
                    // First component varies slowest.
                    let mut d = vec![0.0; dims];
                    for slot in d.iter_mut().rev() {
                        *slot = cfg.lo + (idx % k) as f64 * step;
                        idx /= k;
                    }
                    d
                })
                .collect())
        }
        Sampling::Random(k) => {
            if k > MAX_POINTS {
                return Err(CliError::Input(format!(
                    "{k} samples exceed the limit of {MAX_POINTS}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Ok((0..k)
                .map(|_| (0..dims).map(|_| rng.random_range(cfg.lo..=cfg.hi)).collect())
                .collect())
        }
    }
}

pub fn run(cfg: &SweepConfig, out: &Path) -> Result<SweepSummary, CliError> {
    if cfg.n == 0 || cfg.n > MAX_QUBITS {
        return Err(CliError::Input(format!("--n must be in 1..={MAX_QUBITS}")));
    }
    if !(cfg.lo.is_finite() && cfg.hi.is_finite() && cfg.lo < cfg.hi) {
        return Err(CliError::Input("--min must be below --max".into()));
    }
    let file = File::create(out)
        .map_err(|e| CliError::Input(format!("{}: cannot write: {e}", out.display())))?;
    let pts = points(cfg)?;

    let rows: Vec<Row> = pts
        .into_par_iter()
        .map(|d| {
            let spec = DiagonalSpec::new(cfg.n, d).expect("length matches n");
            let (_, beta) = is_cp_diagonal(&spec, cfg.tol);
            let choi_min = cfg
                .oracle
                .then(|| kraus_from_spec(&spec).is_completely_positive(cfg.tol).1);
            Row {
                min_beta: beta.min(),
                d: spec.diagonal().to_vec(),
                choi_min,
            }
        })
        .collect();

    let mut w = BufWriter::new(file);
    let io_err = |e: std::io::Error| CliError::Input(format!("{}: write failed: {e}", out.display()));
    let dims = (1usize << (2 * cfg.n)) - 1;
    let mut header: Vec<String> = (1..=dims).map(|i| format!("d{i}")).collect();
    header.push("min_beta".into());
    header.push("is_cp".into());
    if cfg.oracle {
        header.push("choi_min_eig".into());
    }
    writeln!(w, "{}", header.join(",")).map_err(io_err)?;

    let mut summary = SweepSummary {
        rows: rows.len(),
        cp: 0,
        boundary: 0,
        not_cp: 0,
        cp_fraction: 0.0,
        oracle_disagreements: 0,
    };
    let mut closed_cp = 0usize;
    let mut line = String::new();
    for row in &rows {
        let label = if row.min_beta.abs() <= BOUNDARY_BAND {
            summary.boundary += 1;
            "boundary"
        } else if row.min_beta >= 0.0 {
            summary.cp += 1;
            "true"
        } else {
            summary.not_cp += 1;
            "false"
        };
        if row.min_beta >= -cfg.tol {
            closed_cp += 1;
        }
        if let Some(choi) = row.choi_min {
            let fast = row.min_beta >= -cfg.tol;
            let oracle = choi >= -cfg.tol;
            if fast != oracle && label != "boundary" && choi.abs() > BOUNDARY_BAND {
                summary.oracle_disagreements += 1;
            }
        }
        line.clear();
        for x in &row.d {
            line.push_str(&format!("{x:.16e},"));
        }
        line.push_str(&format!("{:.16e},{label}", row.min_beta));
        if let Some(choi) = row.choi_min {
            line.push_str(&format!(",{choi:.16e}"));
        }
        writeln!(w, "{line}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    summary.cp_fraction = if rows.is_empty() {
        0.0
    } else {
        closed_cp as f64 / rows.len() as f64
    };
    if summary.oracle_disagreements > 0 {
        return Err(CliError::Inconsistent(format!(
            "{} rows where the beta test and the Choi oracle disagree (see {})",
            summary.oracle_disagreements,
            out.display()
        )));
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sampling: Sampling) -> SweepConfig {
        SweepConfig {
            n: 1,
            sampling,
            seed: 7,
            lo: -1.0,
            hi: 1.0,
            tol: 1e-9,
            oracle: false,
        }
    }

    #[test]
    fn grid_enumerates_every_point_once() {
        let pts = points(&cfg(Sampling::Grid(3))).unwrap();
        assert_eq!(pts.len(), 27);
        assert_eq!(pts[0], vec![-1.0, -1.0, -1.0]);
        assert_eq!(pts[1], vec![-1.0, -1.0, 0.0]);
        assert_eq!(pts[26], vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn random_points_are_seeded() {
        let a = points(&cfg(Sampling::Random(10))).unwrap();
        let b = points(&cfg(Sampling::Random(10))).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|x| (-1.0..=1.0).contains(x)));
    }

    #[test]
    fn oversized_grids_are_rejected() {
        let mut c = cfg(Sampling::Grid(3));
        c.n = 2;
        assert!(matches!(points(&c), Err(CliError::Input(_))));
    }
}
