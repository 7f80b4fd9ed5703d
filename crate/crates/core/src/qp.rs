//! The charge quadratic program.
//!
//! ```text
//! minimize    <x, D^-1 A D^-1 x>
//! subject to  0 <= x_v <= alpha * deg(v)
//!             sum_v x_v >= beta * |E|
//! ```
//!
//! `alpha = beta = 1` is the base program. The matrix `D^-1 A D^-1` is never
//! built; the objective and gradient are evaluated edge by edge. The program
//! is not convex, so [`solve_qp`] returns the best of several local descents.

use std::ops::Deref;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{seed, Error, Result};

/// Relative band within which box and mass constraints count as satisfied.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Number of iterations over which the relative objective decrease is measured.
const SWEEP: usize = 10;

/// Smallest step the descent will shrink to before declaring a start stuck.
const MIN_STEP: f64 = 1e-14;

/// The point `x`: `x_v` is the charge held by vertex `v`, at most
/// `alpha * deg(v)`. The fractional charge `x_v / deg(v)` is what rounding
/// thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChargeVector(Vec<f64>);

impl ChargeVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// `p = D^-1 x`.
    pub fn normalized(&self, g: &Graph) -> Result<Vec<f64>> {
        g.check_len(self.0.len())?;
        Ok(self
            .0
            .iter()
            .zip(g.degrees())
            .map(|(x, &d)| x / d as f64)
            .collect())
    }
}

impl Deref for ChargeVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `0.9 * min_deg^2 / (2 * max_deg)`, halved whenever a step would
    /// raise the objective.
    Auto,
    /// A fixed step, halved whenever it would raise the objective.
    Fixed { step: f64 },
    /// Armijo backtracking from `init`, multiplying by `shrink` until the
    /// projected step satisfies the sufficient-decrease test.
    Backtracking { shrink: f64, init: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QpConfig {
    pub alpha: f64,
    pub beta: f64,
    pub max_iterations: usize,
    pub step_rule: StepRule,
    pub tolerance: f64,
    /// Random feasible starts in addition to the deterministic one.
    pub restarts: usize,
    pub seed: u64,
    /// Replace `sum x >= beta |E|` by `sum x = beta |E|`.
    pub mass_equality: bool,
}

impl Default for QpConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            max_iterations: 5000,
            step_rule: StepRule::Auto,
            tolerance: 1e-8,
            restarts: 8,
            seed: 0,
            mass_equality: false,
        }
    }
}

impl QpConfig {
    pub fn validate(&self) -> Result<()> {
        check_params(self.alpha, self.beta)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be positive".into(),
            ));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerance = {} must be positive",
                self.tolerance
            )));
        }
        match self.step_rule {
            StepRule::Auto => {}
            StepRule::Fixed { step } if step > 0.0 && step.is_finite() => {}
            StepRule::Backtracking { shrink, init }
                if shrink > 0.0 && shrink < 1.0 && init > 0.0 && init.is_finite() => {}
            rule => {
                return Err(Error::InvalidParameter(format!("bad step rule {rule:?}")));
            }
        }
        Ok(())
    }

    fn constraint(&self) -> Mass {
        if self.mass_equality {
            Mass::Exactly
        } else {
            Mass::AtLeast
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpSolution {
    pub point: ChargeVector,
    pub objective: f64,
    pub iterations_used: usize,
    pub status: SolveStatus,
    /// 0 is the deterministic start, `1..=restarts` the random ones, then
    /// any caller-supplied starts in order.
    pub start_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartKind {
    /// `x = (beta / 2) * deg`.
    Deterministic,
    /// Projection of a uniform sample from the box.
    Random(u64),
}

/// How the total-mass constraint is imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mass {
    AtLeast,
    Exactly,
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} outside (0, 1]"
        )));
    }
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta = {beta} must be positive"
        )));
    }
    if beta > 2.0 * alpha {
        return Err(Error::Infeasible { alpha, beta });
    }
    Ok(())
}

/// `<x, D^-1 A D^-1 x> = 2 * sum_{uv in E} (x_u / deg u) (x_v / deg v)`.
pub fn quadratic_form(g: &Graph, x: &[f64]) -> Result<f64> {
    g.check_len(x.len())?;
    Ok(form_unchecked(g, x))
}

fn form_unchecked(g: &Graph, x: &[f64]) -> f64 {
    let d = g.degrees();
    let sum: f64 = g
        .edges()
        .iter()
        .map(|&(u, v)| (x[u] / d[u] as f64) * (x[v] / d[v] as f64))
        .sum();
    2.0 * sum
}

/// `2 D^-1 A D^-1 x`; component `v` is `(2 / deg v) * sum_{u ~ v} x_u / deg u`.
pub fn gradient(g: &Graph, x: &[f64]) -> Result<Vec<f64>> {
    g.check_len(x.len())?;
    let mut out = vec![0.0; x.len()];
    gradient_into(g, x, &mut out);
    Ok(out)
}

fn gradient_into(g: &Graph, x: &[f64], out: &mut [f64]) {
    let d = g.degrees();
    for (v, slot) in out.iter_mut().enumerate() {
        let s: f64 = g.neighbors(v).iter().map(|&u| x[u] / d[u] as f64).sum();
        *slot = 2.0 * s / d[v] as f64;
    }
}

/// Whether `x` satisfies the `(alpha, beta)` constraints up to
/// [`FEASIBILITY_TOL`].
pub fn is_feasible(g: &Graph, x: &[f64], alpha: f64, beta: f64) -> bool {
    if x.len() != g.vertex_count() {
        return false;
    }
    let boxed = x.iter().zip(g.degrees()).all(|(&xi, &d)| {
        let slack = FEASIBILITY_TOL * (d as f64).max(1.0);
        xi >= -slack && xi <= alpha * d as f64 + slack
    });
    let m = g.edge_count() as f64;
    boxed && x.iter().sum::<f64>() >= beta * m - FEASIBILITY_TOL * m
}

/// Euclidean projection of `p` onto `{0 <= x <= alpha deg} ∩ {sum x >= beta |E|}`.
pub fn project_feasible(g: &Graph, p: &[f64], alpha: f64, beta: f64) -> Result<ChargeVector> {
    project_with(g, p, alpha, beta, Mass::AtLeast)
}

/// Projection onto the box intersected with either the mass halfspace or
/// the mass hyperplane.
///
/// The result is `clip(p + lambda)` for the unique shift `lambda` that puts
/// the mass on the boundary (`lambda = 0` when the clipped point already
/// satisfies the halfspace). The shift is solved exactly by sweeping the
/// sorted breakpoints of the piecewise-linear mass function.
pub fn project_with(
    g: &Graph,
    p: &[f64],
    alpha: f64,
    beta: f64,
    mass: Mass,
) -> Result<ChargeVector> {
    check_params(alpha, beta)?;
    g.check_len(p.len())?;
    if let Some(bad) = p.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite coordinate {bad}"
        )));
    }
    let upper: Vec<f64> = g.degrees().iter().map(|&d| alpha * d as f64).collect();
    Ok(ChargeVector(project_onto(
        p,
        &upper,
        beta * g.edge_count() as f64,
        mass,
    )))
}

fn project_onto(p: &[f64], upper: &[f64], target: f64, mass: Mass) -> Vec<f64> {
    let clipped: Vec<f64> = p
        .iter()
        .zip(upper)
        .map(|(&v, &u)| v.clamp(0.0, u))
        .collect();
    let sum: f64 = clipped.iter().sum();
    let band = FEASIBILITY_TOL * (target.max(1.0));
    let done = match mass {
        Mass::AtLeast => sum >= target - band,
        Mass::Exactly => (sum - target).abs() <= band,
    };
    if done {
        return clipped;
    }
    let lambda = mass_shift(p, upper, target);
    p.iter()
        .zip(upper)
        .map(|(&v, &u)| (v + lambda).clamp(0.0, u))
        .collect()
}

/// Solves `sum_i clip(p_i + lambda, 0, u_i) = target` for `lambda`.
///
/// Requires `0 <= target <= sum u`. The mass function is nondecreasing and
/// piecewise linear with kinks at `-p_i` and `u_i - p_i`; the sweep finds the
/// segment containing the target and the shift is then recomputed from that
/// segment's active set rather than from accumulated partial sums.
fn mass_shift(p: &[f64], upper: &[f64], target: f64) -> f64 {
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * p.len());
    for (&v, &u) in p.iter().zip(upper) {
        events.push((-v, 1));
        events.push((u - v, -1));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));

    let mut value = 0.0;
    let mut slope = 0i64;
    let mut prev = events[0].0;
    let mut segment = (prev, prev);
    let mut found = false;
    for &(pos, delta) in &events {
        let next = value + slope as f64 * (pos - prev);
        if slope > 0 && next >= target {
            segment = (prev, pos);
            found = true;
            break;
        }
        value = next;
        prev = pos;
        slope += delta as i64;
    }
    if !found {
        // target equals the full box mass, reached at the last breakpoint.
        let last = events[events.len() - 1].0;
        return last;
    }

    // Classify each coordinate by where it sits on the open segment.
    let (lo, hi) = segment;
    let mid = 0.5 * (lo + hi);
    let mut fixed_mass = 0.0;
    let mut free_sum = 0.0;
    let mut free = 0usize;
    for (&v, &u) in p.iter().zip(upper) {
        if v + mid >= u {
            fixed_mass += u;
        } else if v + mid > 0.0 {
            free_sum += v;
            free += 1;
        }
    }
    if free == 0 {
        return mid;
    }
    ((target - fixed_mass - free_sum) / free as f64).clamp(lo, hi)
}

/// Starting point for a descent.
pub fn initial_point(g: &Graph, alpha: f64, beta: f64, kind: StartKind) -> Result<ChargeVector> {
    initial_point_with(g, alpha, beta, kind, Mass::AtLeast)
}

fn initial_point_with(
    g: &Graph,
    alpha: f64,
    beta: f64,
    kind: StartKind,
    mass: Mass,
) -> Result<ChargeVector> {
    check_params(alpha, beta)?;
    match kind {
        StartKind::Deterministic => Ok(ChargeVector(
            g.degrees().iter().map(|&d| 0.5 * beta * d as f64).collect(),
        )),
        StartKind::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample: Vec<f64> = g
                .degrees()
                .iter()
                .map(|&d| rng.gen::<f64>() * alpha * d as f64)
                .collect();
            project_with(g, &sample, alpha, beta, mass)
        }
    }
}

/// Result of one projected-gradient descent.
#[derive(Debug, Clone)]
pub struct Descent {
    pub point: ChargeVector,
    pub objective: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Objective after every accepted iterate, starting with the start.
    pub history: Vec<f64>,
}

/// Runs projected gradient descent from `start` (projected first).
pub fn descend(g: &Graph, cfg: &QpConfig, start: &[f64]) -> Result<Descent> {
    cfg.validate()?;
    g.check_len(start.len())?;
    let mass = cfg.constraint();
    let upper: Vec<f64> = g.degrees().iter().map(|&d| cfg.alpha * d as f64).collect();
    let target = cfg.beta * g.edge_count() as f64;

    let mut x = project_onto(start, &upper, target, mass);
    let mut f = form_unchecked(g, &x);
    let mut history = vec![f];
    let mut grad = vec![0.0; x.len()];
    let mut trial = vec![0.0; x.len()];

    let (mut step, armijo) = match cfg.step_rule {
        StepRule::Auto => {
            let (lo, hi) = (g.min_degree() as f64, g.max_degree() as f64);
            (0.9 * lo * lo / (2.0 * hi), None)
        }
        StepRule::Fixed { step } => (step, None),
        StepRule::Backtracking { shrink, init } => (init, Some((shrink, init))),
    };

    let mut status = SolveStatus::IterationLimit;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        if f == 0.0 {
            status = SolveStatus::Converged;
            break;
        }
        gradient_into(g, &x, &mut grad);
        if let Some((_, init)) = armijo {
            step = init;
        }

        let (next, f_next) = loop {
            for ((t, &xi), &gi) in trial.iter_mut().zip(&x).zip(&grad) {
                *t = xi - step * gi;
            }
            let cand = project_onto(&trial, &upper, target, mass);
            let f_cand = form_unchecked(g, &cand);
            let accept = match armijo {
                // f(y) <= f(x) + <grad, y - x> + |y - x|^2 / (2 step)
                Some(_) => {
                    let (mut lin, mut sq) = (0.0, 0.0);
                    for ((&ci, &xi), &gi) in cand.iter().zip(&x).zip(&grad) {
                        let dlt = ci - xi;
                        lin += gi * dlt;
                        sq += dlt * dlt;
                    }
                    f_cand <= f + lin + sq / (2.0 * step) && f_cand <= f
                }
                None => f_cand <= f,
            };
            if accept {
                break (cand, f_cand);
            }
            step *= armijo.map_or(0.5, |(shrink, _)| shrink);
            if step < MIN_STEP {
                break (x.clone(), f);
            }
        };

        let displacement = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        f = f_next;
        history.push(f);

        if displacement < cfg.tolerance {
            status = SolveStatus::Converged;
            break;
        }
        if history.len() > SWEEP {
            let before = history[history.len() - 1 - SWEEP];
            if before - f <= cfg.tolerance * before.abs().max(f64::MIN_POSITIVE) {
                status = SolveStatus::Converged;
                break;
            }
        }
    }

    Ok(Descent {
        point: ChargeVector(x),
        objective: f,
        iterations,
        status,
        history,
    })
}

/// Multistart projected gradient descent for the `(alpha, beta)` program.
pub fn solve_qp(g: &Graph, cfg: &QpConfig) -> Result<QpSolution> {
    solve_qp_with_starts(g, cfg, &[])
}

/// As [`solve_qp`], with additional caller-supplied starts appended after the
/// deterministic and random ones.
///
/// Starts run in parallel; the lowest objective wins, ties going to the
/// lowest start index.
pub fn solve_qp_with_starts(
    g: &Graph,
    cfg: &QpConfig,
    extra: &[ChargeVector],
) -> Result<QpSolution> {
    cfg.validate()?;
    let mass = cfg.constraint();
    let mut starts = Vec::with_capacity(1 + cfg.restarts + extra.len());
    starts.push(initial_point_with(
        g,
        cfg.alpha,
        cfg.beta,
        StartKind::Deterministic,
        mass,
    )?);
    for i in 1..=cfg.restarts {
        let s = seed::derive(&[cfg.seed, i as u64]);
        starts.push(initial_point_with(
            g,
            cfg.alpha,
            cfg.beta,
            StartKind::Random(s),
            mass,
        )?);
    }
    for x in extra {
        g.check_len(x.len())?;
        starts.push(x.clone());
    }

    let runs: Vec<Descent> = starts
        .par_iter()
        .map(|x0| descend(g, cfg, x0))
        .collect::<Result<_>>()?;

    let (start_index, best) = runs
        .into_iter()
        .enumerate()
        .reduce(|best, cur| {
            if cur.1.objective < best.1.objective {
                cur
            } else {
                best
            }
        })
        .expect("at least the deterministic start");
    Ok(QpSolution {
        point: best.point,
        objective: best.objective,
        iterations_used: best.iterations,
        status: best.status,
        start_index,
    })
}
