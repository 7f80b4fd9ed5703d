//! From charges to cuts.
//!
//! A threshold cut puts `v` in `C` when its fractional charge
//! `x_v / deg(v)` is at least `eta`. With `eta = eta_star` this is the cut the
//! guarantee is proved for; `eta = 1/2` is the practical rule. The greedy
//! half-cut baseline covers graphs whose MaxCut is far from `|E|`, and
//! [`best_cut`] keeps whichever of these is largest.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{cut_from_side, Cut, Graph};
use crate::{Error, Result};

/// Fractional charges inside this band count as undecided.
pub const AMBIGUOUS_BAND: (f64, f64) = (0.1, 0.9);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremConstants {
    pub eta_star: f64,
    pub ratio_star: f64,
    pub eps_star: f64,
}

/// `eta_star = (5 - sqrt 13) / 6` is the threshold that maximizes the worst
/// case of [`guarantee_ratio`]; `ratio_star = (23 + 13 sqrt 13) / 139` is that
/// worst case, attained at `eps_star`.
pub fn theorem_constants() -> TheoremConstants {
    let r13 = 13f64.sqrt();
    let eta_star = (5.0 - r13) / 6.0;
    let a = degree_mass_factor(eta_star);
    let b = 2.0 / (eta_star * eta_star);
    // 2b e^2 - (2b + 2a - 1) e + (2a - 1) = 0; the roots are 1 and (2a-1)/(2b).
    let (qa, qb, qc) = (2.0 * b, -(2.0 * b + 2.0 * a - 1.0), 2.0 * a - 1.0);
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    // Larger root by the cancellation-free branch, the smaller by Vieta.
    let large = (-qb + disc) / (2.0 * qa);
    let eps_star = qc / (qa * large);
    TheoremConstants {
        eta_star,
        ratio_star: (23.0 + 13.0 * r13) / 139.0,
        eps_star,
    }
}

pub fn eta_star() -> f64 {
    theorem_constants().eta_star
}

/// `(1 - 2 eta) / (1 - eta)`: the share of `|E|` guaranteed to touch `C`.
pub fn degree_mass_factor(eta: f64) -> f64 {
    (1.0 - 2.0 * eta) / (1.0 - eta)
}

/// `max{ 1/(2-2eps), ((1-2eta)/(1-eta) - 2eps/eta^2) / (1-eps) }`, the ratio
/// to MaxCut that the better of the baseline and the threshold cut achieves
/// when `MaxCut = (1 - eps)|E|`.
pub fn guarantee_ratio(eps: f64, eta: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} outside [0, 1/2]"
        )));
    }
    check_eta(eta, false)?;
    let trivial = 1.0 / (2.0 - 2.0 * eps);
    let threshold = (degree_mass_factor(eta) - 2.0 * eps / (eta * eta)) / (1.0 - eps);
    Ok(trivial.max(threshold))
}

fn check_eta(eta: f64, allow_half: bool) -> Result<()> {
    let ok = eta > 0.0 && (eta < 0.5 || (allow_half && eta == 0.5));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "eta = {eta} outside the admissible range"
        )))
    }
}

/// `C = { v : x_v / deg(v) >= eta }`; a vertex exactly on the threshold joins `C`.
pub fn threshold_cut(g: &Graph, x: &[f64], eta: f64) -> Result<Cut> {
    g.check_len(x.len())?;
    let side = x
        .iter()
        .zip(g.degrees())
        .map(|(&xv, &d)| xv / d as f64 >= eta)
        .collect();
    cut_from_side(g, side)
}

/// Greedy derandomization of the random half cut.
///
/// Vertices are placed one at a time on the side holding fewer of their
/// already placed neighbours (ties to `false`), so at least half of every
/// vertex's back edges are cut and the total is at least `ceil(|E| / 2)`.
/// `None` visits vertices in index order; `Some(seed)` shuffles the order.
pub fn half_cut_baseline(g: &Graph, seed: Option<u64>) -> Cut {
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(s) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }
    let mut placed = vec![false; n];
    let mut side = vec![false; n];
    for v in order {
        let (mut on_true, mut on_false) = (0usize, 0usize);
        for &u in g.neighbors(v) {
            if placed[u] {
                if side[u] {
                    on_true += 1;
                } else {
                    on_false += 1;
                }
            }
        }
        side[v] = on_true < on_false;
        placed[v] = true;
    }
    cut_from_side(g, side).expect("side has one entry per vertex")
}

/// Every candidate cut considered by [`best_cut`].
#[derive(Debug, Clone)]
pub struct Rounding {
    pub baseline: Cut,
    pub thresholds: Vec<(f64, Cut)>,
}

impl Rounding {
    /// Largest cut; the earliest producer (baseline, then etas in order) wins ties.
    pub fn best(&self) -> &Cut {
        self.thresholds
            .iter()
            .map(|(_, c)| c)
            .fold(&self.baseline, |best, c| {
                if c.cut_size > best.cut_size {
                    c
                } else {
                    best
                }
            })
    }
}

pub fn round_all(g: &Graph, x: &[f64], etas: &[f64], seed: Option<u64>) -> Result<Rounding> {
    if etas.is_empty() {
        return Err(Error::InvalidParameter("no thresholds given".into()));
    }
    for &eta in etas {
        check_eta(eta, true)?;
    }
    let thresholds = etas
        .iter()
        .map(|&eta| threshold_cut(g, x, eta).map(|c| (eta, c)))
        .collect::<Result<_>>()?;
    Ok(Rounding {
        baseline: half_cut_baseline(g, seed),
        thresholds,
    })
}

/// Best of the half-cut baseline and the threshold cuts of `x` at each eta.
pub fn best_cut(g: &Graph, x: &[f64], etas: &[f64], seed: Option<u64>) -> Result<Cut> {
    Ok(round_all(g, x, etas, seed)?.best().clone())
}

/// `[eta_star, 1/2]`.
pub fn default_etas() -> Vec<f64> {
    vec![eta_star(), 0.5]
}

/// Share of vertices whose fractional charge lies in [`AMBIGUOUS_BAND`].
pub fn ambiguity_fraction(g: &Graph, x: &[f64]) -> Result<f64> {
    g.check_len(x.len())?;
    let (lo, hi) = AMBIGUOUS_BAND;
    let count = x
        .iter()
        .zip(g.degrees())
        .filter(|(&xv, &d)| {
            let p = xv / d as f64;
            (lo..=hi).contains(&p)
        })
        .count();
    Ok(count as f64 / x.len() as f64)
}
