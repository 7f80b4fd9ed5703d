//! Simple undirected graphs and cut accounting.
//!
//! A [`Graph`] never contains isolated vertices: they are dropped at
//! construction so that every degree is at least one and `D^-1` exists.
//! The ids a graph was built from are kept in [`Graph::original_ids`].

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    /// Sorted, `u < v`.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    original_ids: Vec<usize>,
}

impl Graph {
    /// Builds a graph from edges given in arbitrary (original) vertex ids.
    ///
    /// Duplicates and reversed duplicates collapse. Vertices are renumbered
    /// `0..n` in increasing order of original id; ids that never occur in an
    /// edge are simply absent.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (entry, (u, v)) in edges.into_iter().enumerate() {
            if u == v {
                return Err(Error::SelfLoop {
                    vertex: u,
                    line: Some(entry + 1),
                });
            }
            set.insert((u.min(v), u.max(v)));
        }
        Self::from_canonical_set(set)
    }

    fn from_canonical_set(set: BTreeSet<(usize, usize)>) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let ids: BTreeSet<usize> = set.iter().flat_map(|&(u, v)| [u, v]).collect();
        let original_ids: Vec<usize> = ids.into_iter().collect();
        let index = |id: usize| original_ids.binary_search(&id).expect("id collected above");

        let n = original_ids.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(set.len());
        for (u, v) in set {
            let (a, b) = (index(u), index(v));
            edges.push((a, b));
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        // Renumbering is monotone, so `edges` is still sorted.
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let degrees = adjacency.iter().map(Vec::len).collect();
        Ok(Self {
            vertex_count: n,
            edges,
            adjacency,
            degrees,
            original_ids,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Original id of internal vertex `v`.
    pub fn original_id(&self, v: usize) -> usize {
        self.original_ids[v]
    }

    pub fn original_ids(&self) -> &[usize] {
        &self.original_ids
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Canonical edge-list text in original ids, one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 8);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", self.original_ids[u], self.original_ids[v]);
        }
        out
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.vertex_count {
            return Err(Error::Dimension {
                expected: self.vertex_count,
                found: len,
            });
        }
        Ok(())
    }
}

/// Parses the canonical 0-indexed edge-list format.
///
/// Blank lines and lines whose first non-blank character is `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut set = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let u = parse_id(tokens.next(), line)?;
        let v = parse_id(tokens.next(), line)?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line,
                message: format!("unexpected token {extra:?}"),
            });
        }
        if u == v {
            return Err(Error::SelfLoop {
                vertex: u,
                line: Some(line),
            });
        }
        set.insert((u.min(v), u.max(v)));
    }
    Graph::from_canonical_set(set)
}

/// Parses DIMACS `p edge n m` / `e u v` text (1-indexed) into a graph whose
/// original ids are shifted to 0-indexed.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut set = BTreeSet::new();
    let mut declared: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tokens = raw.split_whitespace();
        match tokens.next() {
            None | Some("c") => continue,
            Some("p") => {
                let _format = tokens.next();
                declared = Some(parse_id(tokens.next(), line)?);
            }
            Some("e") => {
                let u = parse_id(tokens.next(), line)?;
                let v = parse_id(tokens.next(), line)?;
                if u == 0 || v == 0 {
                    return Err(Error::Parse {
                        line,
                        message: "DIMACS vertex ids start at 1".into(),
                    });
                }
                if let Some(n) = declared {
                    if u > n || v > n {
                        return Err(Error::Parse {
                            line,
                            message: format!("vertex id exceeds declared count {n}"),
                        });
                    }
                }
                if u == v {
                    return Err(Error::SelfLoop {
                        vertex: u - 1,
                        line: Some(line),
                    });
                }
                set.insert(((u - 1).min(v - 1), (u - 1).max(v - 1)));
            }
            Some(other) => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown DIMACS line type {other:?}"),
                })
            }
        }
    }
    Graph::from_canonical_set(set)
}

/// Picks the DIMACS reader if the text carries a `p` header line, else the
/// edge-list reader.
pub fn parse_auto(text: &str) -> Result<Graph> {
    let is_dimacs = text
        .lines()
        .any(|l| l.split_whitespace().next() == Some("p"));
    if is_dimacs {
        parse_dimacs(text)
    } else {
        parse_edge_list(text)
    }
}

fn parse_id(token: Option<&str>, line: usize) -> Result<usize> {
    let token = token.ok_or_else(|| Error::Parse {
        line,
        message: "expected two vertex ids".into(),
    })?;
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid vertex id {token:?}"),
    })
}

/// Samples `G(n, p)`: each of the `n(n-1)/2` pairs independently with
/// probability `p`, pairs visited in lexicographic order from a ChaCha8
/// stream seeded by `seed`. Isolated vertices are dropped.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n}, need n >= 2")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                set.insert((u, v));
            }
        }
    }
    Graph::from_canonical_set(set)
}

/// A bipartition `(C, V \ C)` with its edge accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// `side[v]` is true iff `v` is in `C`.
    pub side: Vec<bool>,
    pub cut_size: usize,
    pub internal_c: usize,
    pub internal_rest: usize,
}

impl Cut {
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.side
            .iter()
            .enumerate()
            .filter_map(|(v, &s)| s.then_some(v))
    }
}

pub fn cut_from_side(g: &Graph, side: Vec<bool>) -> Result<Cut> {
    g.check_len(side.len())?;
    let (mut cut_size, mut internal_c, mut internal_rest) = (0, 0, 0);
    for &(u, v) in g.edges() {
        match (side[u], side[v]) {
            (true, true) => internal_c += 1,
            (false, false) => internal_rest += 1,
            _ => cut_size += 1,
        }
    }
    Ok(Cut {
        side,
        cut_size,
        internal_c,
        internal_rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_simple(g: &Graph) {
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        for v in 0..g.vertex_count() {
            assert!(g.degree(v) >= 1);
            for &u in g.neighbors(v) {
                assert_ne!(u, v);
                assert!(g.neighbors(u).contains(&v));
            }
        }
    }

    #[test]
    fn single_edge() {
        let g = parse_edge_list("0 1").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(g.degrees(), &[1, 1]);
    }

    #[test]
    fn triangle() {
        let g = parse_edge_list("0 1\n1 2\n0 2").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        assert_eq!(g.degrees(), &[2, 2, 2]);
        assert_simple(&g);
    }

    #[test]
    fn duplicates_collapse() {
        let g = parse_edge_list("0 1\n0 1\n1 0").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\n\n  0 1 \n   # more\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_reports_line() {
        match parse_edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_edge_list("0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("-1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn self_loop_rejected() {
        match parse_edge_list("0 1\n# c\n3 3\n") {
            Err(Error::SelfLoop { vertex, line }) => {
                assert_eq!(vertex, 3);
                assert_eq!(line, Some(3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(parse_edge_list(""), Err(Error::EmptyGraph)));
        assert!(matches!(
            parse_edge_list("# only\n"),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn isolated_ids_are_remapped() {
        let g = parse_edge_list("2 7\n7 9\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.original_ids(), &[2, 7, 9]);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.to_edge_list(), "2 7\n7 9\n");
    }

    #[test]
    fn dimacs_adapter() {
        let g = parse_dimacs("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g, parse_edge_list("0 1\n1 2\n0 2").unwrap());
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 1 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_auto("p edge 2 1\ne 2 2\n"),
            Err(Error::SelfLoop { vertex: 1, .. })
        ));
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert!(matches!(gen_erdos_renyi(5, 0.0, 1), Err(Error::EmptyGraph)));
        let k5 = gen_erdos_renyi(5, 1.0, 7).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!(k5.degrees().iter().all(|&d| d == 4));
        assert!(gen_erdos_renyi(1, 0.5, 0).is_err());
        assert!(gen_erdos_renyi(4, 1.5, 0).is_err());
    }

    #[test]
    fn erdos_renyi_is_seeded() {
        let a = gen_erdos_renyi(30, 0.2, 99).unwrap();
        let b = gen_erdos_renyi(30, 0.2, 99).unwrap();
        let c = gen_erdos_renyi(30, 0.2, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_simple(&a);
    }

    #[test]
    fn erdos_renyi_mean_edge_count() {
        // Binomial(1225, 0.3): mean 367.5, sd of the 1000-sample mean ~0.5.
        let total: usize = (0..1000)
            .map(|s| gen_erdos_renyi(50, 0.3, s).unwrap().edge_count())
            .sum();
        let mean = total as f64 / 1000.0;
        assert!((mean - 367.5).abs() <= 3.0, "mean = {mean}");
    }

    #[test]
    fn cut_accounting() {
        let k2 = parse_edge_list("0 1").unwrap();
        let c = cut_from_side(&k2, vec![true, false]).unwrap();
        assert_eq!((c.cut_size, c.internal_c), (1, 0));

        let k3 = parse_edge_list("0 1\n1 2\n0 2").unwrap();
        let c = cut_from_side(&k3, vec![true, true, false]).unwrap();
        assert_eq!((c.cut_size, c.internal_c, c.internal_rest), (2, 1, 0));
        let c = cut_from_side(&k3, vec![true, true, true]).unwrap();
        assert_eq!((c.cut_size, c.internal_c), (0, 3));
        assert_eq!(c.members().collect::<Vec<_>>(), vec![0, 1, 2]);

        assert!(matches!(
            cut_from_side(&k3, vec![true]),
            Err(Error::Dimension {
                expected: 3,
                found: 1
            })
        ));
    }
}
