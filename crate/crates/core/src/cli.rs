//! The `qpcut` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{emit_table, run_experiment, ExperimentSpec, TableFormat};
use crate::graph::{gen_erdos_renyi, parse_auto, Graph};
use crate::oracle::{brute_force_maxcut, verify_theorem_chain};
use crate::qp::{solve_qp, QpConfig, StepRule};
use crate::rounding::{ambiguity_fraction, default_etas, eta_star, round_all};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "qpcut",
    version,
    about = "MaxCut through a degree-normalized quadratic program"
)]
pub struct Cli {
    /// Worker threads for restarts, enumeration and benchmark trials.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an Erdős–Rényi graph and write it as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the charge program and round it to a cut.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Thresholds on x_v / deg(v), comma separated.
        #[arg(long, value_delimiter = ',')]
        etas: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
    },
    /// Exact MaxCut by enumeration (at most 26 vertices).
    Exact {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Replay the approximation guarantee on one graph; exits 2 if any check fails.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Threshold used for the guarantee; defaults to (5 - sqrt 13) / 6.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Run a random-graph experiment and emit a table.
    Bench {
        /// Experiment spec (JSON). Without it the five reference cells are run.
        spec: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Trials per reference cell.
        #[arg(long, default_value_t = 100, conflicts_with = "spec")]
        trials: usize,
        /// Reference cells at 1000 trials each.
        #[arg(long, conflicts_with_all = ["spec", "trials"])]
        full: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StepKind {
    Auto,
    Fixed,
    Backtracking,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = StepKind::Auto)]
    pub step_rule: StepKind,
    /// Fixed step, or the initial step for backtracking.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[arg(long, default_value_t = 0.5)]
    pub shrink: f64,
    /// Impose sum x = beta |E| instead of sum x >= beta |E|.
    #[arg(long)]
    pub mass_equality: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    pub fn config(&self) -> QpConfig {
        let step_rule = match self.step_rule {
            StepKind::Auto => StepRule::Auto,
            StepKind::Fixed => StepRule::Fixed { step: self.step },
            StepKind::Backtracking => StepRule::Backtracking {
                shrink: self.shrink,
                init: self.step,
            },
        };
        QpConfig {
            alpha: self.alpha,
            beta: self.beta,
            max_iterations: self.max_iterations,
            step_rule,
            tolerance: self.tolerance,
            restarts: self.restarts,
            seed: self.seed,
            mass_equality: self.mass_equality,
        }
    }
}

#[derive(Debug, Serialize)]
struct ThresholdReport {
    eta: f64,
    cut_size: usize,
}

#[derive(Debug, Serialize)]
struct SolveReport {
    vertices: usize,
    edges: usize,
    objective: f64,
    status: crate::qp::SolveStatus,
    iterations_used: usize,
    start_index: usize,
    threshold_cuts: Vec<ThresholdReport>,
    baseline_cut: usize,
    best_cut: usize,
    /// Original ids on the `C` side of the best cut.
    best_side: Vec<usize>,
    /// Original ids on the other side.
    best_rest: Vec<usize>,
    ambiguity_fraction: f64,
}

#[derive(Debug, Serialize)]
struct ExactReport {
    maxcut: usize,
    side: Vec<usize>,
    rest: Vec<usize>,
}

fn load(path: &Path) -> Result<Graph> {
    parse_auto(&fs::read_to_string(path)?)
}

fn split_ids(g: &Graph, side: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let mut inside = Vec::new();
    let mut rest = Vec::new();
    for (v, &s) in side.iter().enumerate() {
        if s {
            inside.push(g.original_id(v));
        } else {
            rest.push(g.original_id(v));
        }
    }
    (inside, rest)
}

fn join(ids: &[usize]) -> String {
    ids.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs one invocation, writing results to `out`. Returns `false` when the
/// computation completed but a verification check failed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    let mut buf = Vec::new();
    let outcome = match cli.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            pool.install(|| dispatch(cli.command, &mut buf))
        }
        None => dispatch(cli.command, &mut buf),
    };
    out.write_all(&buf)?;
    outcome
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> Result<bool> {
    match command {
        Command::Gen {
            n,
            p,
            seed,
            out: path,
        } => {
            let text = gen_erdos_renyi(n, p, seed)?.to_edge_list();
            match path {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Solve {
            input,
            solver,
            etas,
            json,
        } => {
            let g = load(&input)?;
            let sol = solve_qp(&g, &solver.config())?;
            let etas = etas.unwrap_or_else(default_etas);
            let rounding = round_all(&g, &sol.point, &etas, None)?;
            let best = rounding.best();
            let (best_side, best_rest) = split_ids(&g, &best.side);
            let report = SolveReport {
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                objective: sol.objective,
                status: sol.status,
                iterations_used: sol.iterations_used,
                start_index: sol.start_index,
                threshold_cuts: rounding
                    .thresholds
                    .iter()
                    .map(|(eta, c)| ThresholdReport {
                        eta: *eta,
                        cut_size: c.cut_size,
                    })
                    .collect(),
                baseline_cut: rounding.baseline.cut_size,
                best_cut: best.cut_size,
                best_side,
                best_rest,
                ambiguity_fraction: ambiguity_fraction(&g, &sol.point)?,
            };
            if json {
                serde_json::to_writer_pretty(&mut *out, &report)?;
                writeln!(out)?;
            } else {
                writeln!(out, "vertices {} edges {}", report.vertices, report.edges)?;
                writeln!(
                    out,
                    "objective {} ({:?} after {} iterations, start {})",
                    report.objective, report.status, report.iterations_used, report.start_index
                )?;
                for t in &report.threshold_cuts {
                    writeln!(out, "threshold {} cut {}", t.eta, t.cut_size)?;
                }
                writeln!(out, "baseline cut {}", report.baseline_cut)?;
                writeln!(out, "best cut {}", report.best_cut)?;
                writeln!(out, "side {}", join(&report.best_side))?;
                writeln!(out, "rest {}", join(&report.best_rest))?;
                writeln!(out, "ambiguity {}", report.ambiguity_fraction)?;
            }
        }
        Command::Exact { input, json } => {
            let g = load(&input)?;
            let (cut, size) = brute_force_maxcut(&g)?;
            if json {
                let (side, rest) = split_ids(&g, &cut.side);
                serde_json::to_writer_pretty(
                    &mut *out,
                    &ExactReport {
                        maxcut: size,
                        side,
                        rest,
                    },
                )?;
                writeln!(out)?;
            } else {
                writeln!(out, "{size}")?;
            }
        }
        Command::Verify { input, solver, eta } => {
            let g = load(&input)?;
            let report = verify_theorem_chain(&g, &solver.config(), eta.unwrap_or_else(eta_star))?;
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
            return Ok(report.passed());
        }
        Command::Bench {
            spec,
            out: path,
            format,
            trials,
            full,
        } => {
            let spec = match spec {
                Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
                None => ExperimentSpec::reference(if full { 1000 } else { trials }),
            };
            let table = emit_table(&run_experiment(&spec)?, format);
            match path {
                Some(path) => fs::write(path, table)?,
                None => out.write_all(table.as_bytes())?,
            }
        }
    }
    Ok(true)
}
