//! Greedy construction and variable neighborhood descent.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::Result;
use crate::graph::{Color, Coloring, WeightedGraph, NUM_COLORS};
use crate::objective::ColoringState;
use crate::rng::rng_from;
use crate::scalar::Weight;

/// Greedy variant: deterministic, or randomized tie-breaking from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GreedySpec {
    pub randomized: bool,
    pub seed: u64,
}

impl GreedySpec {
    pub fn deterministic() -> Self {
        Self::default()
    }

    pub fn randomized(seed: u64) -> Self {
        Self { randomized: true, seed }
    }
}

/// Colors vertices in descending weighted degree, each with the color that
/// adds the least monochromatic weight toward already colored neighbors.
///
/// The deterministic variant breaks ties by lowest vertex index and lowest
/// color. The randomized one shuffles each group of equal-degree vertices
/// and picks uniformly among equally good colors.
pub fn greedy_construct<W: Weight>(g: &WeightedGraph<W>, spec: &GreedySpec) -> Coloring {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        g.weighted_degree(b)
            .partial_cmp(&g.weighted_degree(a))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut rng = rng_from(spec.seed);
    if spec.randomized {
        let mut i = 0;
        while i < n {
            let d = g.weighted_degree(order[i]);
            let mut j = i + 1;
            while j < n && g.weighted_degree(order[j]) == d {
                j += 1;
            }
            order[i..j].shuffle(&mut rng);
            i = j;
        }
    }

    const UNSET: Color = u8::MAX;
    let mut colors = vec![UNSET; n];
    for &v in &order {
        let mut cost = [W::zero(); NUM_COLORS];
        for &(u, w) in g.neighbors(v) {
            if colors[u] != UNSET {
                cost[colors[u] as usize] = cost[colors[u] as usize] + w;
            }
        }
        let best = cost.iter().copied().fold(W::infinity(), W::min);
        let tied: Vec<Color> = (0..NUM_COLORS as Color).filter(|&c| cost[c as usize] == best).collect();
        colors[v] = if spec.randomized && tied.len() > 1 {
            tied[rng.gen_range(0..tied.len())]
        } else {
            tied[0]
        };
    }
    Coloring::new(colors).expect("colors in range")
}

/// Variable neighborhood descent over two neighborhoods: N1 recolors one
/// vertex, N2 recolors both ends of an edge. Holds the edge scan order, so
/// build it once per graph and reuse it.
#[derive(Debug, Clone)]
pub struct Vnd {
    edge_order: Vec<usize>,
}

impl Vnd {
    pub fn new<W: Weight>(g: &WeightedGraph<W>) -> Self {
        let mut edge_order: Vec<usize> = (0..g.m()).collect();
        let e = g.edges();
        edge_order.sort_by(|&a, &b| {
            e[b].weight
                .partial_cmp(&e[a].weight)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        Self { edge_order }
    }

    /// Descends to a coloring that no N1 or N2 move improves. First
    /// improvement: N1 sweeps vertices in index order until a sweep finds
    /// nothing; N2 then scans edges by descending weight and returns to N1
    /// after its first improving move. Returns the number of moves applied.
    pub fn run<W: Weight>(&self, state: &mut ColoringState<'_, W>) -> u64 {
        let g = state.graph();
        let eps = -(W::move_eps() * (W::one() + g.max_weighted_degree()));
        let mut moves = 0;
        loop {
            loop {
                let mut improved = false;
                for v in 0..g.n() {
                    for c in 0..NUM_COLORS as Color {
                        if c != state.color(v) && state.delta(v, c) < eps {
                            state.apply(v, c);
                            moves += 1;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }

            let mut improved = false;
            'edges: for &i in &self.edge_order {
                let e = g.edges()[i];
                let (cu, cv) = (state.color(e.u), state.color(e.v));
                for a in 0..NUM_COLORS as Color {
                    for b in 0..NUM_COLORS as Color {
                        if (a, b) == (cu, cv) {
                            continue;
                        }
                        if state.pair_delta(e.u, a, e.v, b, e.weight) < eps {
                            state.apply(e.u, a);
                            state.apply(e.v, b);
                            moves += 1;
                            improved = true;
                            break 'edges;
                        }
                    }
                }
            }
            if !improved {
                return moves;
            }
        }
    }
}

/// Runs [`Vnd`] from `c` and returns the local optimum.
pub fn vnd<W: Weight>(g: &WeightedGraph<W>, c: Coloring) -> Result<Coloring> {
    let mut state = ColoringState::new(g, c)?;
    Vnd::new(g).run(&mut state);
    Ok(state.into_coloring())
}
