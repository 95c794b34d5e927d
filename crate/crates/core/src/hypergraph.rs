//! k-uniform hypergraphs: parsing, degree statistics, components, cuts and
//! disjoint unions.
//!
//! A [`Hypergraph`] is the single source of truth for the adjacency, Laplacian
//! and signless Laplacian tensors; none of them is ever materialized.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Where a validation error was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line of a `.khg` document.
    Line(usize),
    /// 0-based edge index of a programmatically built graph.
    Edge(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::Edge(p) => write!(f, "edge {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("{at}: malformed header: {reason}")]
    MalformedHeader { at: Location, reason: String },
    #[error("{at}: invalid vertex id {token:?}")]
    InvalidToken { at: Location, token: String },
    #[error("{at}: edge has {found} vertices, expected k = {expected}")]
    WrongCardinality {
        at: Location,
        expected: usize,
        found: usize,
    },
    #[error("{at}: vertex {vertex} repeated within an edge")]
    RepeatedVertex { at: Location, vertex: usize },
    #[error("{at}: duplicate edge (first seen at {first})")]
    DuplicateEdge { at: Location, first: Location },
    #[error("{at}: vertex id {vertex} out of range 1..={n}")]
    VertexOutOfRange {
        at: Location,
        vertex: usize,
        n: usize,
    },
    #[error("{at}: vertex {vertex} lies in no edge (isolated vertices are not allowed)")]
    IsolatedVertex { at: Location, vertex: usize },
    #[error("{at}: header announces {expected} edges but {found} were given")]
    EdgeCountMismatch {
        at: Location,
        expected: usize,
        found: usize,
    },
    #[error("edge order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("cut subset must be a proper nonempty vertex subset")]
    ImproperSubset,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    SubsetVertexOutOfRange { vertex: usize, n: usize },
    #[error("cannot join graphs of different edge order ({0} vs {1})")]
    OrderMismatch(usize, usize),
}

/// A k-uniform hypergraph on vertices `0..n`.
///
/// Invariants: every edge holds exactly `k` distinct in-range vertices, stored
/// sorted; no edge appears twice; every vertex has positive degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    /// Flattened, each chunk of `k` is one sorted edge.
    edges: Vec<usize>,
    degrees: Vec<usize>,
    incidence: Vec<Vec<usize>>,
}

/// Maximum, minimum and (exact) average degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub max: usize,
    pub min: usize,
    pub average: Ratio<u64>,
}

impl DegreeStats {
    pub fn average_f64(&self) -> f64 {
        *self.average.numer() as f64 / *self.average.denom() as f64
    }
}

/// A bipartition `(S, S̄)` together with its edge classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutInfo {
    pub subset: Vec<usize>,
    pub edges_in_subset: Vec<usize>,
    pub edges_in_complement: Vec<usize>,
    pub crossing_edges: Vec<usize>,
    /// `t(e_p) = |e_p ∩ S|`, aligned with `crossing_edges`.
    pub t_per_edge: Vec<usize>,
}

impl CutInfo {
    pub fn size(&self) -> usize {
        self.crossing_edges.len()
    }

    /// Average of `t(e_p)` over the crossing edges, `None` when nothing crosses.
    pub fn t_subset(&self) -> Option<Ratio<u64>> {
        if self.crossing_edges.is_empty() {
            return None;
        }
        let total: usize = self.t_per_edge.iter().sum();
        Some(Ratio::new(total as u64, self.crossing_edges.len() as u64))
    }

    /// The same average seen from the complement: `k - t(S)`.
    pub fn t_complement(&self, k: usize) -> Option<Ratio<u64>> {
        if self.crossing_edges.is_empty() {
            return None;
        }
        let total: usize = self.t_per_edge.iter().map(|t| k - t).sum();
        Some(Ratio::new(total as u64, self.crossing_edges.len() as u64))
    }
}

impl Hypergraph {
    /// Builds a hypergraph from 0-based edges, validating every invariant.
    pub fn new(k: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let locs: Vec<Location> = (0..edges.len()).map(Location::Edge).collect();
        Self::build(k, n, edges, &locs, Location::Edge(0), false)
    }

    fn build(
        k: usize,
        n: usize,
        edges: Vec<Vec<usize>>,
        locs: &[Location],
        header: Location,
        one_based: bool,
    ) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::OrderTooSmall(k));
        }
        let shown = |v: usize| if one_based { v + 1 } else { v };
        let mut flat = Vec::with_capacity(edges.len() * k);
        let mut seen: HashMap<Vec<usize>, Location> = HashMap::with_capacity(edges.len());
        let mut degrees = vec![0usize; n];
        let mut incidence = vec![Vec::new(); n];
        for (p, (mut edge, &at)) in edges.into_iter().zip(locs).enumerate() {
            if edge.len() != k {
                return Err(HypergraphError::WrongCardinality {
                    at,
                    expected: k,
                    found: edge.len(),
                });
            }
            if let Some(&v) = edge.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange {
                    at,
                    vertex: shown(v),
                    n,
                });
            }
            edge.sort_unstable();
            if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex {
                    at,
                    vertex: shown(w[0]),
                });
            }
            if let Some(&first) = seen.get(&edge) {
                return Err(HypergraphError::DuplicateEdge { at, first });
            }
            for &v in &edge {
                degrees[v] += 1;
                incidence[v].push(p);
            }
            flat.extend_from_slice(&edge);
            seen.insert(edge, at);
        }
        if let Some(v) = degrees.iter().position(|&d| d == 0) {
            return Err(HypergraphError::IsolatedVertex {
                at: header,
                vertex: shown(v),
            });
        }
        Ok(Self {
            k,
            n,
            edges: flat,
            degrees,
            incidence,
        })
    }

    /// Parses the `.khg` text format: a header `k n m` followed by `m` lines of
    /// `k` 1-based vertex ids. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let Some((header_line, header)) = lines.next() else {
            return Err(HypergraphError::MalformedHeader {
                at: Location::Line(1),
                reason: "empty document".into(),
            });
        };
        let header_at = Location::Line(header_line);
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(HypergraphError::MalformedHeader {
                at: header_at,
                reason: format!("expected `k n m`, found {} fields", fields.len()),
            });
        }
        let mut nums = [0usize; 3];
        for (slot, tok) in nums.iter_mut().zip(&fields) {
            *slot = tok.parse().map_err(|_| HypergraphError::MalformedHeader {
                at: header_at,
                reason: format!("{tok:?} is not a nonnegative integer"),
            })?;
        }
        let [k, n, m] = nums;
        if k < 2 {
            return Err(HypergraphError::MalformedHeader {
                at: header_at,
                reason: format!("edge order k = {k} must be at least 2"),
            });
        }

        let mut edges = Vec::with_capacity(m);
        let mut locs = Vec::with_capacity(m);
        let mut last_line = header_line;
        for (line_no, line) in lines {
            let at = Location::Line(line_no);
            last_line = line_no;
            if edges.len() == m {
                return Err(HypergraphError::EdgeCountMismatch {
                    at,
                    expected: m,
                    found: m + 1,
                });
            }
            let mut edge = Vec::with_capacity(k);
            for tok in line.split_whitespace() {
                let id: usize = tok.parse().map_err(|_| HypergraphError::InvalidToken {
                    at,
                    token: tok.to_string(),
                })?;
                if id == 0 || id > n {
                    return Err(HypergraphError::VertexOutOfRange { at, vertex: id, n });
                }
                edge.push(id - 1);
            }
            edges.push(edge);
            locs.push(at);
        }
        if edges.len() != m {
            return Err(HypergraphError::EdgeCountMismatch {
                at: Location::Line(last_line),
                expected: m,
                found: edges.len(),
            });
        }
        Self::build(k, n, edges, &locs, header_at, true)
    }

    /// Serializes back to the `.khg` format (1-based ids).
    pub fn to_khg(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.n, self.m());
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len() / self.k
    }

    pub fn edge(&self, p: usize) -> &[usize] {
        &self.edges[p * self.k..(p + 1) * self.k]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks_exact(self.k)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Indices of the edges containing vertex `i`.
    pub fn incident_edges(&self, i: usize) -> &[usize] {
        &self.incidence[i]
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn degree_stats(&self) -> DegreeStats {
        DegreeStats {
            max: self.max_degree(),
            min: self.degrees.iter().copied().min().unwrap_or(0),
            average: Ratio::new((self.k * self.m()) as u64, self.n.max(1) as u64),
        }
    }

    /// Connected components under "two vertices are adjacent if they share an
    /// edge", each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for e in self.edges() {
            for &v in &e[1..] {
                let root = find(&mut parent, e[0]);
                let r = find(&mut parent, v);
                if r != root {
                    // keep the smaller id as root so ordering stays stable
                    let (lo, hi) = if r < root { (r, root) } else { (root, r) };
                    parent[hi] = lo;
                }
            }
        }
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for v in 0..self.n {
            let r = find(&mut parent, v);
            by_root[r].push(v);
        }
        let mut comps: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// The sub-hypergraph induced on a union of components, relabelled to
    /// `0..vertices.len()` in the given (sorted) order.
    pub fn component_subgraph(&self, vertices: &[usize]) -> Hypergraph {
        let mut local = vec![usize::MAX; self.n];
        for (li, &v) in vertices.iter().enumerate() {
            local[v] = li;
        }
        let mut flat = Vec::new();
        for e in self.edges() {
            if e.iter().all(|&v| local[v] != usize::MAX) {
                let mut mapped: Vec<usize> = e.iter().map(|&v| local[v]).collect();
                mapped.sort_unstable();
                flat.extend(mapped);
            } else {
                debug_assert!(e.iter().all(|&v| local[v] == usize::MAX));
            }
        }
        Self::from_trusted(self.k, vertices.len(), flat)
    }

    fn from_trusted(k: usize, n: usize, flat: Vec<usize>) -> Hypergraph {
        let mut degrees = vec![0usize; n];
        let mut incidence = vec![Vec::new(); n];
        for (p, e) in flat.chunks_exact(k).enumerate() {
            for &v in e {
                degrees[v] += 1;
                incidence[v].push(p);
            }
        }
        Hypergraph {
            k,
            n,
            edges: flat,
            degrees,
            incidence,
        }
    }

    /// Classifies every edge against the bipartition `(S, V \ S)`.
    pub fn cut(&self, subset: &[usize]) -> Result<CutInfo, HypergraphError> {
        let mut member = vec![false; self.n];
        for &v in subset {
            if v >= self.n {
                return Err(HypergraphError::SubsetVertexOutOfRange { vertex: v, n: self.n });
            }
            member[v] = true;
        }
        let size = member.iter().filter(|&&b| b).count();
        if size == 0 || size == self.n {
            return Err(HypergraphError::ImproperSubset);
        }
        let mut info = CutInfo {
            subset: (0..self.n).filter(|&v| member[v]).collect(),
            edges_in_subset: Vec::new(),
            edges_in_complement: Vec::new(),
            crossing_edges: Vec::new(),
            t_per_edge: Vec::new(),
        };
        for (p, e) in self.edges().enumerate() {
            let t = e.iter().filter(|&&v| member[v]).count();
            if t == self.k {
                info.edges_in_subset.push(p);
            } else if t == 0 {
                info.edges_in_complement.push(p);
            } else {
                info.crossing_edges.push(p);
                info.t_per_edge.push(t);
            }
        }
        Ok(info)
    }

    /// `self ⊔ other`, with the vertices of `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
        if self.k != other.k {
            return Err(HypergraphError::OrderMismatch(self.k, other.k));
        }
        let mut flat = self.edges.clone();
        flat.extend(other.edges.iter().map(|v| v + self.n));
        Ok(Self::from_trusted(self.k, self.n + other.n, flat))
    }

    /// A copy with one extra edge; fails if the edge is invalid or present.
    pub fn with_edge(&self, edge: &[usize]) -> Result<Hypergraph, HypergraphError> {
        let mut edges: Vec<Vec<usize>> = self.edges().map(<[usize]>::to_vec).collect();
        edges.push(edge.to_vec());
        Hypergraph::new(self.k, self.n, edges)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Hypergraph {
        let edges = self
            .edges()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        Hypergraph::new(self.k, self.n, edges).expect("a relabelling preserves validity")
    }
}

/// Draws a random connected k-graph on `n` vertices with `m` edges.
///
/// Edges are grown so that each new edge touches the covered set and at least
/// one uncovered vertex until every vertex is covered; the rest are uniform.
/// Returns `None` when `m` is too small to cover `n` vertices or exceeds the
/// number of possible edges.
pub fn random_connected<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Option<Hypergraph> {
    if k < 2 || n < k {
        return None;
    }
    let min_edges = 1 + (n - k).div_ceil(k - 1);
    if m < min_edges || (m as f64) > binomial(n, k) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges: Vec<Vec<usize>> = vec![order[..k].to_vec()];
    let mut covered = k;
    while covered < n {
        let fresh = (k - 1).min(n - covered);
        let mut e: Vec<usize> = order[covered..covered + fresh].to_vec();
        for i in index::sample(rng, covered, k - fresh) {
            e.push(order[i]);
        }
        covered += fresh;
        edges.push(e);
    }
    fill_random_edges(k, n, m, &mut edges, rng);
    Hypergraph::new(k, n, edges).ok()
}

/// A random k-graph on `n` vertices with `m` edges and no isolated vertex,
/// not necessarily connected.
pub fn random_covering<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Option<Hypergraph> {
    if k < 2 || n < k || (m as f64) > binomial(n, k) || m * k < n {
        return None;
    }
    for _ in 0..1000 {
        let mut edges = Vec::new();
        fill_random_edges(k, n, m, &mut edges, rng);
        if let Ok(h) = Hypergraph::new(k, n, edges) {
            return Some(h);
        }
    }
    None
}

fn fill_random_edges<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    m: usize,
    edges: &mut Vec<Vec<usize>>,
    rng: &mut R,
) {
    let mut present: std::collections::HashSet<Vec<usize>> = edges
        .iter()
        .map(|e| {
            let mut s = e.clone();
            s.sort_unstable();
            s
        })
        .collect();
    while edges.len() < m {
        let mut e = index::sample(rng, n, k).into_vec();
        e.sort_unstable();
        if present.insert(e.clone()) {
            edges.push(e);
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
