//! Iterative partial improvement: exact re-optimization of small subgraphs
//! with their boundary colors frozen.

use rand::Rng as _;

use super::{RunMonitor, RunResult, StopCondition};
use crate::error::{Error, Result};
use crate::exact::{branch_and_bound_with, BnbBudget, BnbOptions, FixedColors};
use crate::graph::{induced_subgraph, Coloring, WeightedGraph};
use crate::objective::{objective_unchecked, ColoringState};
use crate::rng::{substream, tag, Rng};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IpiParams {
    /// Largest subgraph grown around a seed vertex.
    pub max_sub: usize,
    /// Budget of each subproblem solve.
    pub budget: BnbBudget,
}

impl Default for IpiParams {
    fn default() -> Self {
        Self {
            max_sub: 20,
            budget: BnbBudget::default(),
        }
    }
}

/// Vertex sets for one improvement round.
///
/// Starting from all vertices as candidates, a set is seeded with a random
/// candidate and grown by sampling adjacent candidates with probability
/// proportional to their edge weight into the set (uniformly if that weight
/// is zero for all of them) until it has `max_sub` vertices or no adjacent
/// candidate remains. The set's internal edges are then deleted from a
/// working copy of the graph, and the set and its neighbors stop being
/// candidates. Sets are therefore disjoint and pairwise non-adjacent.
pub fn build_subgraph_cover<W: Weight>(g: &WeightedGraph<W>, max_sub: usize, rng: &mut Rng) -> Vec<Vec<usize>> {
    let n = g.n();
    let max_sub = max_sub.max(1);
    let mut adj: Vec<Vec<(usize, W)>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut candidates: Vec<usize> = (0..n).collect();
    let mut slot: Vec<usize> = (0..n).collect();
    let mut is_candidate = vec![true; n];
    let remove = |v: usize, candidates: &mut Vec<usize>, slot: &mut Vec<usize>, is_candidate: &mut Vec<bool>| {
        if !is_candidate[v] {
            return;
        }
        is_candidate[v] = false;
        let i = slot[v];
        let last = *candidates.last().expect("nonempty");
        candidates.swap_remove(i);
        if last != v {
            slot[last] = i;
        }
    };

    let mut in_set = vec![false; n];
    let mut pull = vec![W::zero(); n];
    let mut out = Vec::new();
    while !candidates.is_empty() {
        let s = candidates[rng.gen_range(0..candidates.len())];
        let mut set = vec![s];
        in_set[s] = true;
        let mut frontier: Vec<usize> = Vec::new();
        grow(&adj[s], &in_set, &is_candidate, &mut frontier, &mut pull);
        while set.len() < max_sub && !frontier.is_empty() {
            let total = frontier.iter().fold(W::zero(), |a, &u| a + pull[u]).to_f64_lossy();
            let pick = if total > 0.0 {
                let mut x = rng.gen::<f64>() * total;
                let mut pick = frontier.len() - 1;
                for (i, &u) in frontier.iter().enumerate() {
                    let w = pull[u].to_f64_lossy();
                    if x < w {
                        pick = i;
                        break;
                    }
                    x -= w;
                }
                pick
            } else {
                rng.gen_range(0..frontier.len())
            };
            let v = frontier.swap_remove(pick);
            pull[v] = W::zero();
            in_set[v] = true;
            set.push(v);
            grow(&adj[v], &in_set, &is_candidate, &mut frontier, &mut pull);
        }
        for &u in &frontier {
            pull[u] = W::zero();
        }

        for &v in &set {
            adj[v].retain(|&(u, _)| !in_set[u]);
        }
        for &v in &set {
            remove(v, &mut candidates, &mut slot, &mut is_candidate);
            for &(u, _) in g.neighbors(v) {
                if !in_set[u] {
                    remove(u, &mut candidates, &mut slot, &mut is_candidate);
                }
            }
        }
        for &v in &set {
            in_set[v] = false;
        }
        set.sort_unstable();
        out.push(set);
    }
    out
}

fn grow<W: Weight>(edges: &[(usize, W)], in_set: &[bool], is_candidate: &[bool], frontier: &mut Vec<usize>, pull: &mut [W]) {
    for &(u, w) in edges {
        if !in_set[u] && is_candidate[u] {
            if pull[u] == W::zero() && !frontier.contains(&u) {
                frontier.push(u);
            }
            pull[u] = pull[u] + w;
        }
    }
}

/// Repeats rounds until the stop condition holds: build a fresh cover, and
/// for each set solve the subgraph made of the set and its neighbors
/// exactly, with the neighbors frozen at their current colors. A solution is
/// installed only if it lowers the objective. A round in which every set
/// had no neighbors outside it and every solve was proven optimal yields a
/// proven optimum and ends the run.
pub fn ipi<W: Weight>(
    g: &WeightedGraph<W>,
    c0: &Coloring,
    params: &IpiParams,
    stop: &StopCondition,
    seed: u64,
) -> Result<RunResult<W>> {
    let mut mon = RunMonitor::new(g, stop)?;
    let proven = ipi_monitored(g, c0, params, &mut mon, seed)?;
    Ok(mon.finish(proven))
}

pub(crate) fn ipi_monitored<W: Weight>(
    g: &WeightedGraph<W>,
    c0: &Coloring,
    params: &IpiParams,
    mon: &mut RunMonitor<W>,
    seed: u64,
) -> Result<bool> {
    if params.max_sub == 0 {
        return Err(Error::InvalidParameter("max_sub must be positive".into()));
    }
    let mut state = ColoringState::new(g, c0.clone())?;
    mon.offer_state(&state);
    let mut rng = substream(seed, tag::IPI);
    let tol = W::move_eps() * (W::one() + g.max_weighted_degree());
    let mut mark = vec![false; g.n()];

    while !mon.should_stop() && !mon.at_zero() {
        let cover = build_subgraph_cover(g, params.max_sub, &mut rng);
        let mut improved = false;
        let mut exact_round = true;
        for set in &cover {
            if mon.should_stop() {
                exact_round = false;
                break;
            }
            for &v in set {
                mark[v] = true;
            }
            let mut boundary: Vec<usize> = set
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().map(|&(u, _)| u))
                .filter(|&u| !mark[u])
                .collect();
            boundary.sort_unstable();
            boundary.dedup();
            for &v in set {
                mark[v] = false;
            }

            let mut verts = set.clone();
            verts.extend_from_slice(&boundary);
            let (sub, _) = induced_subgraph(g, &verts)?;
            let current: Vec<u8> = verts.iter().map(|&v| state.color(v)).collect();
            let fixed: FixedColors = (set.len()..verts.len()).map(|i| (i, current[i])).collect();
            let before = objective_unchecked(&sub, &current);
            let r = branch_and_bound_with(
                &sub,
                &fixed,
                &BnbOptions {
                    budget: params.budget,
                    warm_start: Some(Coloring::new(current).expect("valid")),
                },
            )?;
            mon.tick();
            exact_round &= boundary.is_empty() && r.proven_optimal;
            if r.value < before - tol {
                for (i, &v) in set.iter().enumerate() {
                    state.apply(v, r.coloring.get(i));
                }
                improved |= mon.offer_state(&state);
            }
        }
        mon.end_iteration(improved);
        if exact_round {
            return Ok(true);
        }
    }
    Ok(false)
}
