//! Random-graph experiments: generate `G(n, p)`, solve, round, aggregate.
//!
//! Every trial draws its seed from `(base_seed, cell, trial)` through
//! [`seed::derive`], so results do not depend on how trials are scheduled
//! across worker threads. Aggregates are summed in trial order.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::gen_erdos_renyi;
use crate::oracle::{brute_force_maxcut, MAX_EXACT_VERTICES};
use crate::qp::{solve_qp, QpConfig};
use crate::rounding::{ambiguity_fraction, default_etas, round_all};
use crate::{seed, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub cells: Vec<Cell>,
    #[serde(default)]
    pub qp_config: QpConfig,
    #[serde(default = "default_etas")]
    pub etas: Vec<f64>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub compare_exact: bool,
}

impl ExperimentSpec {
    /// The five random-graph cells of the reference comparison at `trials`
    /// graphs each.
    pub fn reference(trials: usize) -> Self {
        let cells = [(50, 0.3), (50, 0.5), (100, 0.1), (100, 0.5), (200, 0.1)]
            .into_iter()
            .map(|(n, p)| Cell { n, p, trials })
            .collect();
        Self {
            cells,
            qp_config: QpConfig::default(),
            etas: default_etas(),
            base_seed: 0,
            compare_exact: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.cells {
            if c.trials == 0 {
                return Err(Error::InvalidParameter(format!(
                    "cell n={} p={} has no trials",
                    c.n, c.p
                )));
            }
            if c.n < 2 || !(0.0..=1.0).contains(&c.p) {
                return Err(Error::InvalidParameter(format!(
                    "invalid cell n={} p={}",
                    c.n, c.p
                )));
            }
        }
        self.qp_config.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub mean_cut: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std_cut: f64,
    pub mean_edges: f64,
    pub mean_baseline_cut: f64,
    pub mean_ratio_vs_exact: Option<f64>,
    pub mean_objective: f64,
    pub ambiguity_fraction: f64,
    pub failed_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub per_cell: Vec<CellResult>,
}

/// Outcome of one successful trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub edges: usize,
    pub best_cut: usize,
    pub baseline_cut: usize,
    pub objective: f64,
    pub ambiguity: f64,
    pub exact: Option<usize>,
}

pub fn trial_seed(base_seed: u64, cell: usize, trial: usize) -> u64 {
    seed::derive(&[base_seed, cell as u64, trial as u64])
}

pub fn run_trial(spec: &ExperimentSpec, cell: usize, trial: usize) -> Result<TrialOutcome> {
    let c = &spec.cells[cell];
    let s = trial_seed(spec.base_seed, cell, trial);
    let g = gen_erdos_renyi(c.n, c.p, s)?;
    let cfg = QpConfig {
        seed: seed::derive(&[s, 1]),
        ..spec.qp_config.clone()
    };
    let sol = solve_qp(&g, &cfg)?;
    let rounding = round_all(&g, &sol.point, &spec.etas, None)?;
    let exact = if spec.compare_exact && g.vertex_count() <= MAX_EXACT_VERTICES {
        Some(brute_force_maxcut(&g)?.1)
    } else {
        None
    };
    Ok(TrialOutcome {
        edges: g.edge_count(),
        best_cut: rounding.best().cut_size,
        baseline_cut: rounding.baseline.cut_size,
        objective: sol.objective,
        ambiguity: ambiguity_fraction(&g, &sol.point)?,
        exact,
    })
}

/// Runs every trial of every cell on the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let per_cell = spec
        .cells
        .iter()
        .enumerate()
        .map(|(ci, cell)| {
            let outcomes: Vec<Result<TrialOutcome>> = (0..cell.trials)
                .into_par_iter()
                .map(|t| run_trial(spec, ci, t))
                .collect();
            aggregate(cell, &outcomes)
        })
        .collect();
    Ok(ExperimentResult { per_cell })
}

fn aggregate(cell: &Cell, outcomes: &[Result<TrialOutcome>]) -> CellResult {
    let ok: Vec<&TrialOutcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let failed_trials = outcomes.len() - ok.len();
    let mean = |f: &dyn Fn(&TrialOutcome) -> f64| -> f64 {
        if ok.is_empty() {
            0.0
        } else {
            ok.iter().map(|t| f(t)).sum::<f64>() / ok.len() as f64
        }
    };
    let mean_cut = mean(&|t| t.best_cut as f64);
    let std_cut = if ok.len() > 1 {
        let ss: f64 = ok
            .iter()
            .map(|t| (t.best_cut as f64 - mean_cut).powi(2))
            .sum();
        (ss / (ok.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let ratios: Vec<f64> = ok
        .iter()
        .filter_map(|t| t.exact.map(|e| t.best_cut as f64 / e as f64))
        .collect();
    let mean_ratio_vs_exact =
        (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    CellResult {
        n: cell.n,
        p: cell.p,
        trials: cell.trials,
        mean_cut,
        std_cut,
        mean_edges: mean(&|t| t.edges as f64),
        mean_baseline_cut: mean(&|t| t.baseline_cut as f64),
        mean_ratio_vs_exact,
        mean_objective: mean(&|t| t.objective),
        ambiguity_fraction: mean(&|t| t.ambiguity),
        failed_trials,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "n,p,trials,mean_cut,std_cut,mean_edges,mean_baseline_cut,\
mean_ratio_vs_exact,mean_objective,ambiguity_fraction,failed_trials";

/// Rounds to 6 significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn rounded(c: &CellResult) -> CellResult {
    CellResult {
        p: sig6(c.p),
        mean_cut: sig6(c.mean_cut),
        std_cut: sig6(c.std_cut),
        mean_edges: sig6(c.mean_edges),
        mean_baseline_cut: sig6(c.mean_baseline_cut),
        mean_ratio_vs_exact: c.mean_ratio_vs_exact.map(sig6),
        mean_objective: sig6(c.mean_objective),
        ambiguity_fraction: sig6(c.ambiguity_fraction),
        ..c.clone()
    }
}

/// Renders the result table with floats at 6 significant digits. A missing
/// exact ratio is an empty CSV field and `null` in JSON.
pub fn emit_table(res: &ExperimentResult, format: TableFormat) -> String {
    let rows: Vec<CellResult> = res.per_cell.iter().map(rounded).collect();
    match format {
        TableFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let ratio = r
                    .mean_ratio_vs_exact
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.n,
                    r.p,
                    r.trials,
                    r.mean_cut,
                    r.std_cut,
                    r.mean_edges,
                    r.mean_baseline_cut,
                    ratio,
                    r.mean_objective,
                    r.ambiguity_fraction,
                    r.failed_trials
                );
            }
            out
        }
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&ExperimentResult { per_cell: rows })
                .expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

/// Reads a table produced by [`emit_table`].
pub fn parse_table(text: &str, format: TableFormat) -> Result<ExperimentResult> {
    match format {
        TableFormat::Json => Ok(serde_json::from_str(text)?),
        TableFormat::Csv => {
            let mut lines = text.lines().enumerate();
            match lines.next() {
                Some((_, h)) if h.trim() == CSV_HEADER => {}
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        message: "missing or unexpected CSV header".into(),
                    })
                }
            }
            let mut per_cell = Vec::new();
            for (i, line) in lines {
                if line.trim().is_empty() {
                    continue;
                }
                per_cell.push(parse_row(line, i + 1)?);
            }
            Ok(ExperimentResult { per_cell })
        }
    }
}

fn parse_row(line: &str, lineno: usize) -> Result<CellResult> {
    let f: Vec<&str> = line.split(',').collect();
    if f.len() != 11 {
        return Err(Error::Parse {
            line: lineno,
            message: format!("expected 11 fields, found {}", f.len()),
        });
    }
    let bad = |k: usize| Error::Parse {
        line: lineno,
        message: format!("bad value {:?} in column {}", f[k], k + 1),
    };
    let int = |k: usize| f[k].trim().parse::<usize>().map_err(|_| bad(k));
    let float = |k: usize| f[k].trim().parse::<f64>().map_err(|_| bad(k));
    Ok(CellResult {
        n: int(0)?,
        p: float(1)?,
        trials: int(2)?,
        mean_cut: float(3)?,
        std_cut: float(4)?,
        mean_edges: float(5)?,
        mean_baseline_cut: float(6)?,
        mean_ratio_vs_exact: if f[7].trim().is_empty() {
            None
        } else {
            Some(float(7)?)
        },
        mean_objective: float(8)?,
        ambiguity_fraction: float(9)?,
        failed_trials: int(10)?,
    })
}
