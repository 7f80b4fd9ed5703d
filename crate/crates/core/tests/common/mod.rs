//! Test corpora shared by the integration targets.
#![allow(dead_code)]

use std::collections::HashSet;

use qpcut::graph::gen_erdos_renyi;
use qpcut::Graph;

/// All permutations of `0..n` (Heap's algorithm).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

fn pair_bit(u: usize, v: usize) -> u32 {
    let (a, b) = (u.min(v), u.max(v));
    1 << (b * (b - 1) / 2 + a)
}

fn edges_of(code: u32, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if code & pair_bit(a, b) != 0 {
                out.push((a, b));
            }
        }
    }
    out
}

fn canonical(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> u32 {
    perms
        .iter()
        .map(|p| {
            edges
                .iter()
                .fold(0u32, |c, &(u, v)| c | pair_bit(p[u], p[v]))
        })
        .min()
        .unwrap_or(0)
}

fn connected(edges: &[(usize, usize)], n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One representative edge list per isomorphism class of graphs on `n`
/// vertices, for every `n` in `1..=max_n`. Index `k` holds the classes on
/// `k + 1` vertices.
pub fn all_graph_classes(max_n: usize) -> Vec<Vec<Vec<(usize, usize)>>> {
    let mut levels: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![vec![]]];
    for n in 2..=max_n {
        let perms = permutations(n);
        let mut seen = HashSet::new();
        let mut level = Vec::new();
        for base in &levels[n - 2] {
            for mask in 0u32..1 << (n - 1) {
                let mut edges = base.clone();
                edges.extend(
                    (0..n - 1)
                        .filter(|&u| mask >> u & 1 == 1)
                        .map(|u| (u, n - 1)),
                );
                let code = canonical(&edges, &perms);
                if seen.insert(code) {
                    level.push(edges_of(code, n));
                }
            }
        }
        levels.push(level);
    }
    levels
}

/// Connected graphs with 2..=max_n vertices, one per isomorphism class.
pub fn connected_classes(max_n: usize) -> Vec<Graph> {
    all_graph_classes(max_n)
        .into_iter()
        .enumerate()
        .flat_map(|(k, level)| {
            let n = k + 1;
            level
                .into_iter()
                .filter(move |e| n >= 2 && connected(e, n))
                .map(|e| Graph::from_edges(e).unwrap())
        })
        .collect()
}

/// `count` seeded `G(n, p)` graphs with `lo <= n <= hi` retained vertices.
pub fn random_graphs(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Graph> {
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        s = qpcut::seed::derive(&[seed, s]);
        let n = lo + (s % (hi - lo + 1) as u64) as usize;
        let p = 0.1 + 0.8 * ((s >> 20) % 1000) as f64 / 1000.0;
        if let Ok(g) = gen_erdos_renyi(n, p, s) {
            if g.vertex_count() >= lo {
                out.push(g);
            }
        }
    }
    out
}
