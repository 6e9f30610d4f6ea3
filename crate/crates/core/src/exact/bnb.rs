use std::time::{Duration, Instant};

use super::{FixedColors, SolveResult};
use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, WeightedGraph, NUM_COLORS};
use crate::objective::objective_unchecked;
use crate::scalar::Weight;

const UNSET: Color = u8::MAX;

/// Search limits. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BnbBudget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl BnbBudget {
    pub const UNLIMITED: Self = Self {
        node_limit: None,
        time_limit: None,
    };

    pub fn nodes(limit: u64) -> Self {
        Self {
            node_limit: Some(limit),
            time_limit: None,
        }
    }
}

impl Default for BnbBudget {
    /// Ten million nodes.
    fn default() -> Self {
        Self::nodes(10_000_000)
    }
}

#[derive(Debug, Clone, Default)]
pub struct BnbOptions {
    pub budget: BnbBudget,
    /// Initial incumbent; fixed vertices are overwritten with their frozen
    /// colors before use.
    pub warm_start: Option<Coloring>,
}

/// Value of the assigned part plus, for every unassigned vertex, the cheapest
/// color with respect to already assigned neighbors.
pub fn partial_bound<W: Weight>(g: &WeightedGraph<W>, partial: &[Option<Color>]) -> W {
    let mut bound = W::zero();
    for e in g.edges() {
        if let (Some(a), Some(b)) = (partial[e.u], partial[e.v]) {
            if a == b {
                bound = bound + e.weight;
            }
        }
    }
    for v in 0..g.n() {
        if partial[v].is_some() {
            continue;
        }
        let mut conf = [W::zero(); NUM_COLORS];
        for &(u, w) in g.neighbors(v) {
            if let Some(c) = partial[u] {
                conf[c as usize] = conf[c as usize] + w;
            }
        }
        bound = bound + conf.into_iter().fold(W::infinity(), W::min);
    }
    bound
}

struct Search<'a, W> {
    g: &'a WeightedGraph<W>,
    order: Vec<usize>,
    colors: Vec<Color>,
    /// weight from each vertex toward assigned vertices of each color
    conf: Vec<[W; NUM_COLORS]>,
    assigned_cost: W,
    /// sum over unassigned vertices of their cheapest `conf` entry
    pending: W,
    symmetric: bool,
    best: Vec<Color>,
    best_val: W,
    nodes: u64,
    budget: BnbBudget,
    started: Instant,
    aborted: bool,
}

#[inline]
fn min3<W: Weight>(r: &[W; NUM_COLORS]) -> W {
    r[0].min(r[1]).min(r[2])
}

impl<'a, W: Weight> Search<'a, W> {
    fn assign(&mut self, v: usize, c: Color) {
        self.pending = self.pending - min3(&self.conf[v]);
        self.assigned_cost = self.assigned_cost + self.conf[v][c as usize];
        self.colors[v] = c;
        for &(u, w) in self.g.neighbors(v) {
            let row = &mut self.conf[u];
            if self.colors[u] == UNSET {
                let before = min3(row);
                row[c as usize] = row[c as usize] + w;
                self.pending = self.pending + min3(row) - before;
            } else {
                row[c as usize] = row[c as usize] + w;
            }
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = UNSET;
        for &(u, w) in self.g.neighbors(v) {
            let row = &mut self.conf[u];
            if self.colors[u] == UNSET {
                let before = min3(row);
                row[c as usize] = row[c as usize] - w;
                self.pending = self.pending + min3(row) - before;
            } else {
                row[c as usize] = row[c as usize] - w;
            }
        }
        self.assigned_cost = self.assigned_cost - self.conf[v][c as usize];
        self.pending = self.pending + min3(&self.conf[v]);
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(limit) = self.budget.node_limit {
            if self.nodes >= limit {
                self.aborted = true;
            }
        }
        if let Some(t) = self.budget.time_limit {
            if self.nodes % 1024 == 0 && self.started.elapsed() >= t {
                self.aborted = true;
            }
        }
        self.aborted
    }

    fn dfs(&mut self, depth: usize, max_used: i32) {
        if depth == self.order.len() {
            if self.assigned_cost < self.best_val {
                self.best_val = self.assigned_cost;
                self.best.copy_from_slice(&self.colors);
            }
            return;
        }
        let v = self.order[depth];
        let allowed = if self.symmetric {
            (max_used + 2).min(NUM_COLORS as i32) as usize
        } else {
            NUM_COLORS
        };
        let mut choices: Vec<Color> = (0..allowed as Color).collect();
        let row = self.conf[v];
        choices.sort_by(|&a, &b| {
            row[a as usize]
                .partial_cmp(&row[b as usize])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        for c in choices {
            if self.aborted || self.out_of_budget() {
                return;
            }
            self.nodes += 1;
            self.assign(v, c);
            let bound = self.assigned_cost + self.pending;
            if bound < self.best_val - W::prune_eps() {
                self.dfs(depth + 1, max_used.max(c as i32));
            }
            self.unassign(v);
        }
    }
}

/// Branch and bound with the default node budget and no warm start.
pub fn branch_and_bound<W: Weight>(
    g: &WeightedGraph<W>,
    fixed: &FixedColors,
    budget: BnbBudget,
) -> Result<SolveResult<W>> {
    branch_and_bound_with(
        g,
        fixed,
        &BnbOptions {
            budget,
            warm_start: None,
        },
    )
}

/// Depth-first branch and bound.
///
/// Free vertices are branched in descending weighted degree, colors in
/// ascending order of immediate conflict weight. Without fixed vertices the
/// color labels are interchangeable, so a vertex may only open the next
/// unused color. When the budget runs out the incumbent is returned with
/// `proven_optimal == false`.
pub fn branch_and_bound_with<W: Weight>(
    g: &WeightedGraph<W>,
    fixed: &FixedColors,
    opts: &BnbOptions,
) -> Result<SolveResult<W>> {
    fixed.check_for(g)?;
    let n = g.n();
    let mut order = fixed.free_vertices(n);
    order.sort_by(|&a, &b| {
        g.weighted_degree(b)
            .partial_cmp(&g.weighted_degree(a))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut s = Search {
        g,
        order,
        colors: vec![UNSET; n],
        conf: vec![[W::zero(); NUM_COLORS]; n],
        assigned_cost: W::zero(),
        pending: W::zero(),
        symmetric: fixed.is_empty(),
        best: vec![0; n],
        best_val: W::infinity(),
        nodes: 0,
        budget: opts.budget,
        started: Instant::now(),
        aborted: false,
    };
    for (v, c) in fixed.iter() {
        s.assign(v, c);
    }

    if let Some(ws) = &opts.warm_start {
        ws.check_for(g)?;
        let mut ws = ws.clone();
        for (v, c) in fixed.iter() {
            ws.set(v, c);
        }
        s.best_val = objective_unchecked(g, ws.as_slice());
        s.best = ws.into_vec();
    }

    s.dfs(0, -1);

    if s.best_val == W::infinity() {
        // budget exhausted before the first leaf: finish greedily
        for depth in 0..s.order.len() {
            let v = s.order[depth];
            if s.colors[v] == UNSET {
                let row = s.conf[v];
                let c = (0..NUM_COLORS as Color)
                    .min_by(|&a, &b| {
                        row[a as usize]
                            .partial_cmp(&row[b as usize])
                            .unwrap_or(std::cmp::Ordering::Equal)
                    })
                    .unwrap_or(0);
                s.assign(v, c);
            }
        }
        s.best.copy_from_slice(&s.colors);
    }

    let coloring = Coloring::new(s.best).map_err(|_| Error::InvalidInput("corrupt search state".into()))?;
    Ok(SolveResult {
        value: objective_unchecked(g, coloring.as_slice()),
        coloring,
        proven_optimal: !s.aborted,
        nodes_explored: s.nodes,
    })
}
