//! Weighted undirected graphs, colorings and the traversal helpers shared by
//! every solver.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Number of colors. The whole crate is specialised to three.
pub const NUM_COLORS: usize = 3;

/// A color in `{0, 1, 2}`.
pub type Color = u8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<W> {
    /// Smaller endpoint.
    pub u: usize,
    /// Larger endpoint.
    pub v: usize,
    pub weight: W,
}

/// Simple undirected graph with nonnegative edge weights.
///
/// Immutable once built; adjacency lists are sorted by neighbor index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<W> {
    n: usize,
    edges: Vec<Edge<W>>,
    adj: Vec<Vec<(usize, W)>>,
    degree: Vec<W>,
    total: W,
}

impl<W: Weight> WeightedGraph<W> {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            degree: vec![W::zero(); n],
            total: W::zero(),
        }
    }

    /// Builds a graph from `(i, j, w)` triples. Parallel edges are merged by
    /// summing their weights; self-loops, out-of-range endpoints and negative
    /// or non-finite weights are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, W)>,
    {
        let mut b = GraphBuilder::new(n);
        for (i, j, w) in edges {
            b.add_edge(i, j, w)?;
        }
        Ok(b.build())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order (first occurrence of each pair).
    #[inline]
    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(usize, W)] {
        &self.adj[v]
    }

    /// Sum of the weights of the edges incident to `v`.
    #[inline]
    pub fn weighted_degree(&self, v: usize) -> W {
        self.degree[v]
    }

    pub fn max_weighted_degree(&self) -> W {
        self.degree.iter().copied().fold(W::zero(), W::max)
    }

    /// Sum of all edge weights.
    #[inline]
    pub fn total_weight(&self) -> W {
        self.total
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<W> {
        let row = self.adj.get(i)?;
        row.binary_search_by_key(&j, |&(u, _)| u)
            .ok()
            .map(|k| row[k].1)
    }

    /// Checks every structural invariant. Graphs produced by this module
    /// always pass; the routine exists for tests and for data coming from
    /// elsewhere.
    pub fn validate(&self) -> Result<()> {
        if self.adj.len() != self.n || self.degree.len() != self.n {
            return Err(Error::InvalidInput("adjacency size differs from n".into()));
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if e.u >= e.v || e.v >= self.n {
                return Err(Error::InvalidInput(format!("bad edge ({}, {})", e.u, e.v)));
            }
            if !e.weight.is_finite() || e.weight < W::zero() {
                return Err(Error::InvalidInput(format!("bad weight on ({}, {})", e.u, e.v)));
            }
            if !seen.insert((e.u, e.v)) {
                return Err(Error::InvalidInput(format!("duplicate edge ({}, {})", e.u, e.v)));
            }
            if self.weight(e.u, e.v) != Some(e.weight) || self.weight(e.v, e.u) != Some(e.weight) {
                return Err(Error::InvalidInput(format!(
                    "adjacency disagrees with edge ({}, {})",
                    e.u, e.v
                )));
            }
        }
        let adj_entries: usize = self.adj.iter().map(Vec::len).sum();
        if adj_entries != 2 * self.edges.len() {
            return Err(Error::InvalidInput("adjacency has extra entries".into()));
        }
        Ok(())
    }
}

/// Incremental graph construction with parallel-edge merging.
#[derive(Debug, Clone)]
pub struct GraphBuilder<W> {
    n: usize,
    index: HashMap<(usize, usize), usize>,
    edges: Vec<Edge<W>>,
}

impl<W: Weight> GraphBuilder<W> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, i: usize, j: usize, w: W) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidInput(format!(
                "edge ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        if i == j {
            return Err(Error::InvalidInput(format!("self-loop at vertex {i}")));
        }
        if !w.is_finite() || w < W::zero() {
            return Err(Error::InvalidInput(format!("edge ({i}, {j}) has weight {w}")));
        }
        let key = (i.min(j), i.max(j));
        match self.index.get(&key) {
            Some(&k) => self.edges[k].weight = self.edges[k].weight + w,
            None => {
                self.index.insert(key, self.edges.len());
                self.edges.push(Edge {
                    u: key.0,
                    v: key.1,
                    weight: w,
                });
            }
        }
        Ok(())
    }

    pub fn build(self) -> WeightedGraph<W> {
        let mut adj = vec![Vec::new(); self.n];
        let mut degree = vec![W::zero(); self.n];
        let mut total = W::zero();
        for e in &self.edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
            degree[e.u] = degree[e.u] + e.weight;
            degree[e.v] = degree[e.v] + e.weight;
            total = total + e.weight;
        }
        for row in &mut adj {
            row.sort_unstable_by_key(|&(u, _)| u);
        }
        WeightedGraph {
            n: self.n,
            edges: self.edges,
            adj,
            degree,
            total,
        }
    }
}

/// Assignment of one of three colors to every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Result<Self> {
        if let Some(i) = colors.iter().position(|&c| c as usize >= NUM_COLORS) {
            return Err(Error::InvalidInput(format!(
                "vertex {i} has color {} outside {{0, 1, 2}}",
                colors[i]
            )));
        }
        Ok(Self { colors })
    }

    /// Every vertex gets color `c`.
    pub fn uniform(n: usize, c: Color) -> Self {
        assert!((c as usize) < NUM_COLORS);
        Self { colors: vec![c; n] }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> Color {
        self.colors[v]
    }

    #[inline]
    pub fn set(&mut self, v: usize, c: Color) {
        debug_assert!((c as usize) < NUM_COLORS);
        self.colors[v] = c;
    }

    #[inline]
    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    pub fn into_vec(self) -> Vec<Color> {
        self.colors
    }

    /// Applies a permutation of the color labels to every vertex.
    pub fn relabel(&self, perm: [Color; NUM_COLORS]) -> Self {
        Self {
            colors: self.colors.iter().map(|&c| perm[c as usize]).collect(),
        }
    }

    /// Number of vertices per color.
    pub fn class_sizes(&self) -> [usize; NUM_COLORS] {
        let mut out = [0; NUM_COLORS];
        for &c in &self.colors {
            out[c as usize] += 1;
        }
        out
    }

    /// Fails unless the coloring has one entry per vertex of `g`.
    pub fn check_for<W: Weight>(&self, g: &WeightedGraph<W>) -> Result<()> {
        if self.colors.len() != g.n() {
            return Err(Error::InvalidInput(format!(
                "coloring has {} entries, graph has {} vertices",
                self.colors.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// Connected components, each sorted ascending, ordered by smallest vertex.
pub fn connected_components<W: Weight>(g: &WeightedGraph<W>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Relabeling between a subgraph and its parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    /// `to_old[new] = old`.
    pub to_old: Vec<usize>,
    pub to_new: HashMap<usize, usize>,
}

/// Subgraph induced by `subset`. Vertex `subset[k]` becomes vertex `k`.
pub fn induced_subgraph<W: Weight>(
    g: &WeightedGraph<W>,
    subset: &[usize],
) -> Result<(WeightedGraph<W>, VertexMap)> {
    let mut to_new = HashMap::with_capacity(subset.len());
    for (k, &v) in subset.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        if to_new.insert(v, k).is_some() {
            return Err(Error::InvalidInput(format!("vertex {v} listed twice")));
        }
    }
    let mut b = GraphBuilder::new(subset.len());
    for (k, &v) in subset.iter().enumerate() {
        for &(u, w) in g.neighbors(v) {
            if let Some(&ku) = to_new.get(&u) {
                if k < ku {
                    b.add_edge(k, ku, w)?;
                }
            }
        }
    }
    Ok((
        b.build(),
        VertexMap {
            to_old: subset.to_vec(),
            to_new,
        },
    ))
}

/// How far a breadth-first collection extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsLimit {
    /// Every vertex within this many hops of the root.
    Height(usize),
    /// The first `k` vertices in BFS order.
    Count(usize),
}

/// Breadth-first order from `root`. Vertices at equal depth appear in
/// ascending index order.
pub fn bfs_collect<W: Weight>(g: &WeightedGraph<W>, root: usize, limit: BfsLimit) -> Vec<usize> {
    let cap = match limit {
        BfsLimit::Count(0) => return Vec::new(),
        BfsLimit::Count(k) => k,
        BfsLimit::Height(_) => usize::MAX,
    };
    let max_depth = match limit {
        BfsLimit::Height(l) => l,
        BfsLimit::Count(_) => usize::MAX,
    };
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut order = vec![root];
    let mut level = vec![root];
    let mut depth = 0;
    while !level.is_empty() && depth < max_depth && order.len() < cap {
        let mut next = Vec::new();
        for &v in &level {
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    next.push(u);
                }
            }
        }
        next.sort_unstable();
        order.extend_from_slice(&next);
        level = next;
        depth += 1;
    }
    order.truncate(cap);
    order
}

/// Total weight of edges from `v` to neighbors accepted by `member`.
#[inline]
pub fn weight_into<W: Weight>(g: &WeightedGraph<W>, v: usize, member: impl Fn(usize) -> bool) -> W {
    g.neighbors(v)
        .iter()
        .filter(|&&(u, _)| member(u))
        .fold(W::zero(), |acc, &(_, w)| acc + w)
}

/// Total weight of edges from `v` into the vertex set `set`. `v` itself
/// need not belong to `set`.
pub fn vertex_weight_within<W: Weight>(g: &WeightedGraph<W>, set: &[usize], v: usize) -> W {
    if set.len() <= 16 {
        weight_into(g, v, |u| set.contains(&u))
    } else {
        let s: HashSet<usize> = set.iter().copied().collect();
        weight_into(g, v, |u| s.contains(&u))
    }
}
