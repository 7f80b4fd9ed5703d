//! MaxCut approximation through a degree-normalized quadratic program.
//!
//! Each vertex `v` holds a charge `x_v` with `0 <= x_v <= alpha * deg(v)` and the
//! total charge is at least `beta * |E|`. Minimizing `<x, D^-1 A D^-1 x>` pushes
//! highly charged vertices away from each other, and thresholding the
//! normalized charge `x_v / deg(v)` yields a cut.
//!
//! Modules:
//! - [`graph`]: simple undirected graphs, edge-list I/O, Erdős–Rényi generation, cut accounting.
//! - [`qp`]: objective, gradient, exact polytope projection and the multistart solver.
//! - [`rounding`]: threshold cuts, the greedy half-cut baseline and the guarantee constants.
//! - [`oracle`]: brute-force MaxCut and the per-instance guarantee-chain report.
//! - [`bench`]: seeded random-graph experiments and CSV/JSON tables.
//! - [`cli`]: the `qpcut` command line.

pub mod bench;
pub mod cli;
mod error;
pub mod graph;
pub mod oracle;
pub mod qp;
pub mod rounding;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{Cut, Graph};
pub use qp::{ChargeVector, QpConfig, QpSolution, SolveStatus, StepRule};
