//! Exact small-instance ground truth.
//!
//! [`brute_force_maxcut`] enumerates every bipartition, and
//! [`verify_theorem_chain`] replays the approximation argument on one graph:
//! optimal cut, witness charge, solver objective, threshold set, and the
//! resulting guarantee, recording every inequality that fails.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{cut_from_side, Cut, Graph};
use crate::qp::{quadratic_form, solve_qp_with_starts, ChargeVector, QpConfig};
use crate::rounding::{
    best_cut, degree_mass_factor, guarantee_ratio, theorem_constants, threshold_cut,
};
use crate::{Error, Result};

/// Largest vertex count accepted by the exhaustive search.
pub const MAX_EXACT_VERTICES: usize = 26;

/// Number of high bits split off into independent chunks.
const CHUNK_BITS: usize = 6;

/// Slack for comparisons between quantities that are equal in exact arithmetic.
const REL_TOL: f64 = 1e-12;

/// Exhaustive MaxCut.
///
/// Vertex 0 stays on the `false` side, leaving `2^(n-1)` assignments. Each
/// chunk fixes the top bits and walks the rest in Gray-code order, updating
/// the cut size in O(1) per flip from neighbour bitmasks. Among optimal
/// cuts the one with the smallest encoding `sum_v side[v] << v` is returned.
pub fn brute_force_maxcut(g: &Graph) -> Result<(Cut, usize)> {
    let n = g.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(Error::TooLarge {
            n,
            cap: MAX_EXACT_VERTICES,
        });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let free = n - 1;
    let high = free.min(CHUNK_BITS).min(free.saturating_sub(8));
    let low = free - high;

    let (best, encoding) = (0u32..1 << high)
        .into_par_iter()
        .map(|chunk| scan_chunk(g, &nbr, chunk, low))
        .reduce(
            || (0, u32::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let side: Vec<bool> = (0..n).map(|v| encoding >> v & 1 == 1).collect();
    let cut = cut_from_side(g, side)?;
    debug_assert_eq!(cut.cut_size, best);
    Ok((cut, best))
}

fn scan_chunk(g: &Graph, nbr: &[u32], chunk: u32, low: usize) -> (usize, u32) {
    // Bit v of `mask` is side[v]; vertices 1..=low are the Gray-coded ones.
    let mut mask = chunk << (low + 1);
    let mut cut = g
        .edges()
        .iter()
        .filter(|&&(u, v)| (mask >> u ^ mask >> v) & 1 == 1)
        .count() as i64;
    let mut best = (cut as usize, mask);
    for k in 1u32..1 << low {
        let v = k.trailing_zeros() as usize + 1;
        let on_true = (nbr[v] & mask).count_ones() as i64;
        let deg = nbr[v].count_ones() as i64;
        let same = if mask >> v & 1 == 1 {
            on_true
        } else {
            deg - on_true
        };
        cut += 2 * same - deg;
        mask ^= 1 << v;
        let c = cut as usize;
        if c > best.0 || (c == best.0 && mask < best.1) {
            best = (c, mask);
        }
    }
    best
}

/// `y_v = deg(v)` on the side `U` of `cut` whose degree sum is at least
/// `|E|`, zero elsewhere. When both sides sum to exactly `|E|`, `U` is the
/// side of vertex 0.
pub fn witness_vector(g: &Graph, cut: &Cut) -> Result<ChargeVector> {
    g.check_len(cut.side.len())?;
    let m = g.edge_count();
    let true_mass: usize = cut.members().map(|v| g.degree(v)).sum();
    let u_side = match true_mass.cmp(&m) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => cut.side[0],
    };
    Ok(ChargeVector::new(
        cut.side
            .iter()
            .zip(g.degrees())
            .map(|(&s, &d)| if s == u_side { d as f64 } else { 0.0 })
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub maxcut_exact: usize,
    pub eps: f64,
    pub witness_objective: f64,
    pub qp_objective: f64,
    pub eta_used: f64,
    pub degree_mass_c: f64,
    pub internal_c: usize,
    pub cut_c: usize,
    pub guarantee: f64,
    pub achieved_ratio: f64,
    /// One entry per failed check; empty when the whole chain holds.
    pub violations: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the full chain on `g`, injecting the optimal-cut witness as an extra
/// solver start so the solver objective is certified below `2 eps |E|`.
pub fn verify_theorem_chain(g: &Graph, cfg: &QpConfig, eta: f64) -> Result<TheoremReport> {
    let m = g.edge_count() as f64;
    let (opt, maxcut) = brute_force_maxcut(g)?;
    let eps = 1.0 - maxcut as f64 / m;

    let witness = witness_vector(g, &opt)?;
    let witness_objective = quadratic_form(g, &witness)?;
    let sol = solve_qp_with_starts(g, cfg, std::slice::from_ref(&witness))?;

    let c = threshold_cut(g, &sol.point, eta)?;
    let degree_mass_c: usize = c.members().map(|v| g.degree(v)).sum();
    let guarantee = guarantee_ratio(eps, eta)?;
    let best = best_cut(g, &sol.point, &[eta, 0.5], None)?;
    let achieved_ratio = best.cut_size as f64 / maxcut as f64;

    let mut violations = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            violations.push(what);
        }
    };
    let slack = REL_TOL * m.max(1.0);
    check(
        (0.0..=0.5).contains(&eps),
        format!("eps = {eps} outside [0, 1/2]"),
    );
    let u_internal = {
        let u_side = witness
            .iter()
            .zip(&opt.side)
            .find(|(&y, _)| y > 0.0)
            .map(|(_, &s)| s);
        match u_side {
            Some(true) => opt.internal_c,
            _ => opt.internal_rest,
        }
    };
    check(
        witness_objective == 2.0 * u_internal as f64,
        format!(
            "witness objective {witness_objective} != 2 * #E(U,U) = {}",
            2 * u_internal
        ),
    );
    check(
        witness_objective <= 2.0 * eps * m + slack,
        format!(
            "witness objective {witness_objective} > 2 eps |E| = {}",
            2.0 * eps * m
        ),
    );
    check(
        sol.objective <= witness_objective,
        format!(
            "solver objective {} > witness objective {witness_objective}",
            sol.objective
        ),
    );
    check(
        degree_mass_c as f64 >= degree_mass_factor(eta) * m - slack,
        format!("degree mass of C {degree_mass_c} below (1-2eta)/(1-eta) |E|"),
    );
    check(
        c.internal_c as f64 <= sol.objective / (2.0 * eta * eta) + slack,
        format!("#E(C,C) = {} exceeds q / (2 eta^2)", c.internal_c),
    );
    check(
        achieved_ratio >= guarantee - REL_TOL,
        format!("achieved ratio {achieved_ratio} below instance guarantee {guarantee}"),
    );
    let ratio_star = theorem_constants().ratio_star;
    check(
        achieved_ratio >= ratio_star,
        format!("achieved ratio {achieved_ratio} below {ratio_star}"),
    );

    Ok(TheoremReport {
        maxcut_exact: maxcut,
        eps,
        witness_objective,
        qp_objective: sol.objective,
        eta_used: eta,
        degree_mass_c: degree_mass_c as f64,
        internal_c: c.internal_c,
        cut_c: c.cut_size,
        guarantee,
        achieved_ratio,
        violations,
    })
}
