//! Brute-force references shared by the integration tests.

#![allow(dead_code)]

use makerbreaker::graph::{Graph, VertexSet};
use rand::Rng;

/// A random simple graph on `n` vertices with edge probability `p`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// A uniformly random subset of `0..n` as a mask.
pub fn random_mask<R: Rng>(n: usize, rng: &mut R) -> Vec<bool> {
    let density = rng.gen_range(0.2..0.9);
    (0..n).map(|_| rng.gen_bool(density)).collect()
}

pub fn set_of(mask: &[bool]) -> VertexSet {
    VertexSet::new(mask.len(), (0..mask.len()).filter(|&v| mask[v])).unwrap()
}

/// True iff `vs` induces a path: a connected subgraph with |vs|-1 edges and
/// no vertex of degree above two.
pub fn induces_path(g: &Graph, vs: &[usize]) -> bool {
    let k = vs.len();
    if k <= 1 {
        return true;
    }
    let mut edges = 0;
    for (i, &u) in vs.iter().enumerate() {
        let deg = vs.iter().filter(|&&w| g.has_edge(u, w)).count();
        if deg > 2 || deg == 0 {
            return false;
        }
        edges += vs[i + 1..].iter().filter(|&&w| g.has_edge(u, w)).count();
    }
    if edges != k - 1 {
        return false;
    }
    let mut seen = vec![vs[0]];
    let mut frontier = vec![vs[0]];
    while let Some(u) = frontier.pop() {
        for &w in vs {
            if g.has_edge(u, w) && !seen.contains(&w) {
                seen.push(w);
                frontier.push(w);
            }
        }
    }
    seen.len() == k
}

/// Exhaustive search over all `k`-subsets of the marked vertices.
pub fn brute_induced_path(g: &Graph, mask: &[bool], k: usize) -> bool {
    let marked: Vec<usize> = (0..g.n()).filter(|&v| mask[v]).collect();
    if k == 0 {
        return true;
    }
    if marked.len() < k {
        return false;
    }
    let mut chosen = Vec::with_capacity(k);
    fn rec(g: &Graph, pool: &[usize], k: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return induces_path(g, chosen);
        }
        for i in start..pool.len() {
            if pool.len() - i < k - chosen.len() {
                break;
            }
            chosen.push(pool[i]);
            if rec(g, pool, k, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(g, &marked, k, 0, &mut chosen)
}

/// Closed-neighborhood bitmask union covers every vertex.
pub fn brute_dominating(g: &Graph, mask: &[bool]) -> bool {
    let n = g.n();
    let mut covered = 0u64;
    for v in (0..n).filter(|&v| mask[v]) {
        covered |= 1 << v;
        for &w in g.neighbors(v) {
            covered |= 1 << w;
        }
    }
    covered == (1u64 << n) - 1
}
