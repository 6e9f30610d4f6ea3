//! Objective evaluation and O(deg) recoloring moves.

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, WeightedGraph, NUM_COLORS};
use crate::scalar::Weight;

/// Total weight of monochromatic edges.
pub fn objective<W: Weight>(g: &WeightedGraph<W>, c: &Coloring) -> Result<W> {
    c.check_for(g)?;
    Ok(objective_unchecked(g, c.as_slice()))
}

/// Same as [`objective`] for a raw color slice of the right length.
pub fn objective_unchecked<W: Weight>(g: &WeightedGraph<W>, colors: &[Color]) -> W {
    g.edges()
        .iter()
        .filter(|e| colors[e.u] == colors[e.v])
        .fold(W::zero(), |acc, e| acc + e.weight)
}

/// Monochromatic edges of a coloring.
pub fn conflicting_edges<'g, W: Weight>(
    g: &'g WeightedGraph<W>,
    c: &'g Coloring,
) -> impl Iterator<Item = &'g crate::graph::Edge<W>> + 'g {
    g.edges().iter().filter(move |e| c.get(e.u) == c.get(e.v))
}

/// Per-vertex, per-color weight toward neighbors of that color.
///
/// `w(v, c)` is the weight of edges from `v` to neighbors currently colored
/// `c`, so `w(v, colors[v])` is the conflict weight at `v` and the objective is
/// half the sum of those entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MonoWeightCache<W> {
    w: Vec<[W; NUM_COLORS]>,
    total: W,
}

impl<W: Weight> MonoWeightCache<W> {
    pub fn build(g: &WeightedGraph<W>, c: &Coloring) -> Result<Self> {
        c.check_for(g)?;
        let mut w = vec![[W::zero(); NUM_COLORS]; g.n()];
        for e in g.edges() {
            let (cu, cv) = (c.get(e.u) as usize, c.get(e.v) as usize);
            w[e.u][cv] = w[e.u][cv] + e.weight;
            w[e.v][cu] = w[e.v][cu] + e.weight;
        }
        Ok(Self {
            w,
            total: objective_unchecked(g, c.as_slice()),
        })
    }

    #[inline]
    pub fn total(&self) -> W {
        self.total
    }

    #[inline]
    pub fn weight_to(&self, v: usize, c: Color) -> W {
        self.w[v][c as usize]
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[W; NUM_COLORS] {
        &self.w[v]
    }
}

/// A coloring bound to its graph together with its [`MonoWeightCache`].
#[derive(Debug, Clone)]
pub struct ColoringState<'g, W> {
    graph: &'g WeightedGraph<W>,
    coloring: Coloring,
    cache: MonoWeightCache<W>,
}

impl<'g, W: Weight> ColoringState<'g, W> {
    pub fn new(graph: &'g WeightedGraph<W>, coloring: Coloring) -> Result<Self> {
        let cache = MonoWeightCache::build(graph, &coloring)?;
        Ok(Self {
            graph,
            coloring,
            cache,
        })
    }

    #[inline]
    pub fn graph(&self) -> &'g WeightedGraph<W> {
        self.graph
    }

    #[inline]
    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    #[inline]
    pub fn cache(&self) -> &MonoWeightCache<W> {
        &self.cache
    }

    #[inline]
    pub fn objective(&self) -> W {
        self.cache.total
    }

    #[inline]
    pub fn color(&self, v: usize) -> Color {
        self.coloring.get(v)
    }

    /// Change of the objective if `v` were recolored to `c`.
    #[inline]
    pub fn delta(&self, v: usize, c: Color) -> W {
        let row = &self.cache.w[v];
        row[c as usize] - row[self.coloring.get(v) as usize]
    }

    /// Change of the objective if `u` and `v` (adjacent with weight `w_uv`)
    /// were recolored to `a` and `b` simultaneously.
    pub fn pair_delta(&self, u: usize, a: Color, v: usize, b: Color, w_uv: W) -> W {
        let (cu, cv) = (self.color(u), self.color(v));
        let du = self.delta(u, a);
        // weight from v toward color x once u holds color a
        let adj = |x: Color| {
            let mut s = self.cache.w[v][x as usize];
            if x == cu {
                s = s - w_uv;
            }
            if x == a {
                s = s + w_uv;
            }
            s
        };
        du + adj(b) - adj(cv)
    }

    /// Recolors `v`, keeping the cache consistent in O(deg(v)).
    pub fn apply(&mut self, v: usize, c: Color) {
        let old = self.coloring.get(v);
        if old == c {
            return;
        }
        let d = self.delta(v, c);
        for &(u, w) in self.graph.neighbors(v) {
            let row = &mut self.cache.w[u];
            row[old as usize] = row[old as usize] - w;
            row[c as usize] = row[c as usize] + w;
        }
        self.coloring.set(v, c);
        self.cache.total = self.cache.total + d;
    }

    /// Rebuilds the cache from scratch, discarding accumulated rounding.
    pub fn refresh(&mut self) {
        self.cache = MonoWeightCache::build(self.graph, &self.coloring).expect("sized coloring");
    }

    /// Replaces the whole coloring.
    pub fn reset(&mut self, coloring: Coloring) -> Result<()> {
        self.cache = MonoWeightCache::build(self.graph, &coloring)?;
        self.coloring = coloring;
        Ok(())
    }

    pub fn into_coloring(self) -> Coloring {
        self.coloring
    }
}

fn check_move<W: Weight>(g: &WeightedGraph<W>, v: usize, c: Color) -> Result<()> {
    if v >= g.n() {
        return Err(Error::InvalidInput(format!("vertex {v} out of range")));
    }
    if c as usize >= NUM_COLORS {
        return Err(Error::InvalidInput(format!("color {c} out of range")));
    }
    Ok(())
}

/// Objective change of recoloring `v` to `c`; validates its arguments.
pub fn recolor_delta<W: Weight>(state: &ColoringState<'_, W>, v: usize, c: Color) -> Result<W> {
    check_move(state.graph, v, c)?;
    Ok(state.delta(v, c))
}

/// Recolors `v` to `c` and returns the objective change.
pub fn apply_recolor<W: Weight>(state: &mut ColoringState<'_, W>, v: usize, c: Color) -> Result<W> {
    check_move(state.graph, v, c)?;
    let d = state.delta(v, c);
    state.apply(v, c);
    Ok(d)
}
