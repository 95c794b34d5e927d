#![allow(dead_code)]

use hyperspec::hypergraph::{random_connected, Hypergraph};
use rand::Rng;

pub const EIGHT_VERTEX: &str = "3 8 8\n1 2 3\n1 4 5\n2 4 5\n3 4 5\n4 5 6\n4 5 7\n4 5 8\n6 7 8\n";
pub const SINGLE6: &str = "6 6 1\n1 2 3 4 5 6\n";
pub const PATH: &str = "3 4 2\n1 2 3\n2 3 4\n";

pub fn graph(text: &str) -> Hypergraph {
    Hypergraph::parse(text).unwrap()
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |c, i| c * (n - i) / (i + 1))
}

/// Fewest edges a connected k-graph on `n` vertices can have.
pub fn min_edges(k: usize, n: usize) -> usize {
    1 + (n - k).div_ceil(k - 1)
}

/// A random connected k-graph with `k` drawn from `ks`, `n <= max_n` and
/// `m <= max_m`.
pub fn random_graph<R: Rng>(rng: &mut R, ks: &[usize], max_n: usize, max_m: usize) -> Hypergraph {
    loop {
        let k = ks[rng.random_range(0..ks.len())];
        if k > max_n {
            continue;
        }
        let n = rng.random_range(k..=max_n);
        let lo = min_edges(k, n);
        let hi = max_m.min(binomial(n, k));
        if lo > hi {
            continue;
        }
        let m = rng.random_range(lo..=hi);
        if let Some(h) = random_connected(k, n, m, rng) {
            return h;
        }
    }
}

/// Every k-graph on `n` vertices without isolated vertices, as edge lists
/// over the lexicographically ordered k-subsets.
pub fn all_graphs(k: usize, n: usize) -> Vec<Hypergraph> {
    let mut subsets = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut subsets);
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << subsets.len()) {
        let edges: Vec<Vec<usize>> = (0..subsets.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| subsets[i].clone())
            .collect();
        if let Ok(h) = Hypergraph::new(k, n, edges) {
            out.push(h);
        }
    }
    out
}
