//! Immutable boards and the graph queries used by win detection and
//! micro-strategies.
//!
//! Vertices are the integers `0..n`. Every [`Graph`] keeps its neighbor lists
//! sorted, so two graphs built from the same edge set compare equal no matter
//! the insertion order.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An undirected simple graph.
#[derive(Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    /// All-pairs hop distances, computed on first use.
    hops: OnceLock<Vec<u32>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.adj.hash(state);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edge_count())
    }
}

impl Graph {
    /// Builds a graph on `n` vertices, rejecting self-loops, duplicate edges
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge at vertex {v}")));
            }
        }
        Ok(Graph {
            adj,
            hops: OnceLock::new(),
        })
    }

    /// Hop distance between `u` and `v`, `None` across components. The
    /// first call runs a BFS from every vertex and caches the table.
    pub fn hop_distance(&self, u: usize, v: usize) -> Option<usize> {
        let n = self.n();
        let table = self.hops.get_or_init(|| {
            let mut t = vec![u32::MAX; n * n];
            for s in 0..n {
                for (w, d) in bfs_distances(self, s).into_iter().enumerate() {
                    if let Some(d) = d {
                        t[s * n + w] = d as u32;
                    }
                }
            }
            t
        });
        match table[u * n + v] {
            u32::MAX => None,
            d => Some(d as usize),
        }
    }

    /// Builds a graph from a list of edges that is known to be simple.
    fn from_simple_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self::from_edges(n, edges).expect("generator produced a non-simple graph")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Serializes to the edge-list text format: a header line `n m`, then one
    /// `u v` line per edge with `u < v`, ascending.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header declares {m} edges but {} were listed",
                edges.len()
            )));
        }
        Graph::from_edges(n, edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let mut next = || -> Result<usize> {
        parts
            .next()
            .ok_or_else(|| Error::Parse(format!("expected two integers in `{line}`")))?
            .parse()
            .map_err(|e| Error::Parse(format!("`{line}`: {e}")))
    };
    let a = next()?;
    let b = next()?;
    if parts.next().is_some() {
        return Err(Error::Parse(format!("trailing data in `{line}`")));
    }
    Ok((a, b))
}

/// A set of vertices of some host graph, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    /// Collects `members` into a set, rejecting any vertex `>= n`.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&vertex) = members.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex, n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(VertexSet { members })
    }

    pub fn all(n: usize) -> Self {
        VertexSet {
            members: (0..n).collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub(crate) fn from_mask(mask: &[bool]) -> Self {
        VertexSet {
            members: (0..mask.len()).filter(|&v| mask[v]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The `rows x cols` grid graph `P_rows x P_cols`. Cell `(r, c)` is vertex
/// `r * cols + c`.
pub fn grid_graph(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid dimensions must be positive, got {rows}x{cols}"
        )));
    }
    let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Ok(Graph::from_simple_edges(rows * cols, edges))
}

/// Erdős–Rényi `G(n, p)`. Pairs `(u, v)` are visited in lexicographic order
/// and each consumes exactly one uniform draw, so the graph is a pure function
/// of `(n, p, seed)`.
pub fn er_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("G(n, p) needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let draw: f64 = rng.gen();
            if draw < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_simple_edges(n, edges))
}

/// The Flower Snark `J_t` for odd `t >= 5`.
///
/// Star `i` has center `a_i = 4i` and leaves `b_i = 4i+1`, `c_i = 4i+2`,
/// `d_i = 4i+3`. The `b_i` form a `t`-cycle and the `c_i, d_i` form the single
/// `2t`-cycle `c_0 .. c_{t-1} d_0 .. d_{t-1} c_0`.
pub fn flower_snark(t: usize) -> Result<Graph> {
    if t < 5 || t % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "flower snark needs an odd t >= 5, got {t}"
        )));
    }
    let (a, b, c, d) = (|i| 4 * i, |i| 4 * i + 1, |i| 4 * i + 2, |i| 4 * i + 3);
    let mut edges = Vec::with_capacity(6 * t);
    for i in 0..t {
        let next = (i + 1) % t;
        edges.extend([(a(i), b(i)), (a(i), c(i)), (a(i), d(i))]);
        edges.push((b(i), b(next)));
        if i + 1 < t {
            edges.push((c(i), c(next)));
            edges.push((d(i), d(next)));
        }
    }
    edges.push((c(t - 1), d(0)));
    edges.push((d(t - 1), c(0)));
    Ok(Graph::from_simple_edges(4 * t, edges))
}

/// Hop distances from `source`; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<usize>> {
    multi_source_distances(g, std::iter::once(source))
}

/// Hop distance from each vertex to the nearest of `sources`.
pub fn multi_source_distances(
    g: &Graph,
    sources: impl IntoIterator<Item = usize>,
) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Connected components of the subgraph induced by `restriction`, ordered by
/// smallest member.
pub fn components(g: &Graph, restriction: &VertexSet) -> Vec<VertexSet> {
    let allowed = restriction.to_mask(g.n());
    component_labels(g, &allowed)
        .1
        .into_iter()
        .map(|members| VertexSet { members })
        .collect()
}

/// Labels each allowed vertex with its component index. Returns the labels
/// (`usize::MAX` for excluded vertices) and the sorted member lists.
pub(crate) fn component_labels(g: &Graph, allowed: &[bool]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut label = vec![usize::MAX; g.n()];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..g.n() {
        if !allowed[start] || label[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        label[start] = id;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if allowed[w] && label[w] == usize::MAX {
                    label[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    (label, comps)
}

/// True iff every vertex is in `s` or adjacent to a member of `s`.
pub fn is_dominating(g: &Graph, s: &VertexSet) -> bool {
    let mut covered = vec![false; g.n()];
    for v in s.iter() {
        covered[v] = true;
        for &w in g.neighbors(v) {
            covered[w] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

/// True iff some `k` vertices of `marked` induce a path on `k` vertices.
pub fn contains_induced_k_path(g: &Graph, marked: &VertexSet, k: usize) -> bool {
    has_induced_path(g, &marked.to_mask(g.n()), k)
}

pub(crate) fn has_induced_path(g: &Graph, allowed: &[bool], k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let mut search = PathSearch::new(g, allowed, k);
    (0..g.n()).any(|start| allowed[start] && search.from_endpoint(start))
}

/// True iff some induced path on `k` allowed vertices passes through `v`.
/// `v` itself must be allowed.
pub(crate) fn has_induced_path_through(g: &Graph, allowed: &[bool], v: usize, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if !allowed[v] {
        return false;
    }
    PathSearch::new(g, allowed, k).through(v)
}

/// Depth-bounded extension search for induced paths.
///
/// `touch[u]` counts the path vertices adjacent to `u`. A neighbor `w` of the
/// current endpoint may extend the path iff `touch[w] == 1`, i.e. the endpoint
/// is its only neighbor on the path.
pub(crate) struct PathSearch<'a> {
    g: &'a Graph,
    allowed: &'a [bool],
    k: usize,
    on_path: Vec<bool>,
    touch: Vec<u32>,
    len: usize,
    buf: Vec<usize>,
    options: Vec<usize>,
}

thread_local! {
    static SCRATCH: RefCell<(Vec<bool>, Vec<u32>)> = const { RefCell::new((Vec::new(), Vec::new())) };
}

impl Drop for PathSearch<'_> {
    fn drop(&mut self) {
        let scratch = (std::mem::take(&mut self.on_path), std::mem::take(&mut self.touch));
        SCRATCH.with(|s| *s.borrow_mut() = scratch);
    }
}

impl<'a> PathSearch<'a> {
    pub(crate) fn new(g: &'a Graph, allowed: &'a [bool], k: usize) -> Self {
        // Searches run inside every rollout step, so the scratch vectors are
        // recycled per thread. They come back all-false and all-zero because
        // every push is matched by a pop.
        let (mut on_path, mut touch) = SCRATCH.with(|s| std::mem::take(&mut *s.borrow_mut()));
        on_path.clear();
        on_path.resize(g.n(), false);
        touch.clear();
        touch.resize(g.n(), 0);
        PathSearch {
            g,
            allowed,
            k,
            on_path,
            touch,
            len: 0,
            buf: Vec::new(),
            options: Vec::new(),
        }
    }

    fn push(&mut self, v: usize) {
        self.on_path[v] = true;
        self.len += 1;
        for &w in self.g.neighbors(v) {
            self.touch[w] += 1;
        }
    }

    fn pop(&mut self, v: usize) {
        self.on_path[v] = false;
        self.len -= 1;
        for &w in self.g.neighbors(v) {
            self.touch[w] -= 1;
        }
    }

    /// Paths having `start` as an endpoint.
    fn from_endpoint(&mut self, start: usize) -> bool {
        self.push(start);
        let found = self.extend_one_end(start);
        self.pop(start);
        found
    }

    fn extend_one_end(&mut self, end: usize) -> bool {
        if self.len == self.k {
            return true;
        }
        let g = self.g;
        for &w in g.neighbors(end) {
            if self.allowed[w] && !self.on_path[w] && self.touch[w] == 1 {
                self.push(w);
                let found = self.extend_one_end(w);
                self.pop(w);
                if found {
                    return true;
                }
            }
        }
        false
    }

    /// Paths containing `v` anywhere: grow the tail arm first, and at every
    /// tail length also try completing the path by growing the head arm.
    fn through(&mut self, v: usize) -> bool {
        self.push(v);
        let found = self.grow_tail(v, v);
        self.pop(v);
        found
    }

    fn grow_tail(&mut self, head: usize, tail: usize) -> bool {
        if self.len == self.k || self.extend_one_end(head) {
            return true;
        }
        let g = self.g;
        for &w in g.neighbors(tail) {
            if self.allowed[w] && !self.on_path[w] && self.touch[w] == 1 {
                self.push(w);
                let found = self.grow_tail(head, w);
                self.pop(w);
                if found {
                    return true;
                }
            }
        }
        false
    }

    /// A random induced path through `v` grown by alternately extending a
    /// random end with a random admissible neighbor. Returns the path's
    /// vertices when it reaches `k` vertices, `None` when it gets stuck.
    pub(crate) fn sample_through<R: Rng + ?Sized>(&mut self, v: usize, rng: &mut R) -> Option<&[usize]> {
        // The path lives in buf[lo..hi], growing both ways from the middle.
        let k = self.k;
        self.buf.resize(2 * k, 0);
        let (mut lo, mut hi) = (k, k + 1);
        self.buf[k] = v;
        self.push(v);
        while hi - lo < k {
            // One draw per step: the low bit picks the end, the high half
            // picks the neighbor.
            let r = rng.next_u64();
            let first_back = r & 1 == 1;
            let mut grown = false;
            for back in [first_back, !first_back] {
                let end = if back { self.buf[hi - 1] } else { self.buf[lo] };
                self.options.clear();
                for &w in self.g.neighbors(end) {
                    if self.allowed[w] && !self.on_path[w] && self.touch[w] == 1 {
                        self.options.push(w);
                    }
                }
                if !self.options.is_empty() {
                    let w = self.options[((r >> 32) * self.options.len() as u64 >> 32) as usize];
                    self.push(w);
                    if back {
                        self.buf[hi] = w;
                        hi += 1;
                    } else {
                        lo -= 1;
                        self.buf[lo] = w;
                    }
                    grown = true;
                    break;
                }
            }
            if !grown {
                break;
            }
        }
        for i in lo..hi {
            self.pop(self.buf[i]);
        }
        (hi - lo == k).then(|| &self.buf[lo..hi])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &Graph) -> Vec<usize> {
        (0..g.n()).map(|v| g.degree(v)).collect()
    }

    fn set(g: &Graph, vs: &[usize]) -> VertexSet {
        VertexSet::new(g.n(), vs.iter().copied()).unwrap()
    }

    #[test]
    fn grid_examples() {
        let g = grid_graph(1, 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
        let g = grid_graph(5, 3).unwrap();
        assert_eq!((g.n(), g.edge_count()), (15, 22));
        let g = grid_graph(2, 2).unwrap();
        assert_eq!(degrees(&g), vec![2; 4]);
        assert!(grid_graph(0, 3).is_err());
        assert!(grid_graph(3, 0).is_err());
    }

    #[test]
    fn grid_edge_count_formula() {
        for r in 1..=12 {
            for c in 1..=12 {
                let g = grid_graph(r, c).unwrap();
                assert_eq!(g.edge_count(), r * (c - 1) + c * (r - 1), "{r}x{c}");
            }
        }
    }

    #[test]
    fn er_examples() {
        assert_eq!(er_graph(12, 0.0, 5).unwrap().edge_count(), 0);
        assert_eq!(er_graph(12, 1.0, 5).unwrap().edge_count(), 66);
        assert_eq!(er_graph(12, 0.3, 7).unwrap(), er_graph(12, 0.3, 7).unwrap());
        assert!(er_graph(12, 1.5, 0).is_err());
        assert!(er_graph(12, -0.1, 0).is_err());
        assert!(er_graph(12, f64::NAN, 0).is_err());
    }

    #[test]
    fn flower_snark_examples() {
        for t in [5, 7, 9] {
            let g = flower_snark(t).unwrap();
            assert_eq!(g.n(), 4 * t);
            assert_eq!(g.edge_count(), 6 * t);
            assert!(degrees(&g).iter().all(|&d| d == 3));
        }
        assert_eq!(flower_snark(7).unwrap().n(), 28);
        assert!(flower_snark(6).is_err());
        assert!(flower_snark(3).is_err());
    }

    #[test]
    fn flower_snark_fixture() {
        for t in [5, 7] {
            let text = std::fs::read_to_string(format!(
                "{}/fixtures/flower_snark_{t}.txt",
                env!("CARGO_MANIFEST_DIR")
            ))
            .unwrap();
            assert_eq!(Graph::from_edge_list(&text).unwrap(), flower_snark(t).unwrap());
        }
    }

    #[test]
    fn bfs_examples() {
        let path = grid_graph(1, 3).unwrap();
        assert_eq!(bfs_distances(&path, 0), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(bfs_distances(&path, 1)[1], Some(0));
        let empty = Graph::from_edges(3, []).unwrap();
        assert_eq!(bfs_distances(&empty, 0), vec![Some(0), None, None]);
    }

    #[test]
    fn component_examples() {
        let g = grid_graph(1, 3).unwrap();
        assert!(components(&g, &VertexSet::empty()).is_empty());
        let all = components(&g, &VertexSet::all(3));
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].len(), 3);
        let split = components(&g, &set(&g, &[0, 2]));
        assert_eq!(split, vec![set(&g, &[0]), set(&g, &[2])]);
    }

    #[test]
    fn dominating_examples() {
        let square = grid_graph(2, 2).unwrap();
        assert!(is_dominating(&square, &VertexSet::all(4)));
        assert!(!is_dominating(&square, &set(&square, &[0])));
        let path = grid_graph(1, 3).unwrap();
        assert!(is_dominating(&path, &set(&path, &[1])));
    }

    #[test]
    fn induced_path_examples() {
        let path = grid_graph(1, 3).unwrap();
        assert!(!contains_induced_k_path(&path, &VertexSet::empty(), 3));
        assert!(contains_induced_k_path(&path, &VertexSet::all(3), 3));
        let square = grid_graph(2, 2).unwrap();
        assert!(!contains_induced_k_path(&square, &VertexSet::all(4), 4));
        assert!(contains_induced_k_path(&square, &VertexSet::all(4), 3));
    }

    #[test]
    fn induced_path_through_vertex() {
        // 1x5 path: the 3-path {1,2,3} passes through 2 but not through 0.
        let g = grid_graph(1, 5).unwrap();
        let allowed = [false, true, true, true, false];
        assert!(has_induced_path_through(&g, &allowed, 2, 3));
        assert!(has_induced_path_through(&g, &allowed, 1, 3));
        assert!(!has_induced_path_through(&g, &allowed, 0, 3));
        assert!(!has_induced_path_through(&g, &allowed, 2, 4));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = grid_graph(2, 3).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text.lines().next(), Some("6 7"));
        assert_eq!(Graph::from_edge_list(&text).unwrap(), g);
        assert!(Graph::from_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::from_edge_list("2 1\n0 0\n").is_err());
        assert!(Graph::from_edge_list("2 2\n0 1\n1 0\n").is_err());
    }

    #[test]
    fn vertex_set_rejects_out_of_range() {
        assert!(VertexSet::new(3, [0, 3]).is_err());
        assert_eq!(VertexSet::new(3, [2, 0, 2]).unwrap().as_slice(), &[0, 2]);
    }
}
