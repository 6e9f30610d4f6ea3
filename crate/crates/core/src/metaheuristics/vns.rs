//! Variable neighborhood search with BFS-ball color shifts.

use rand::Rng as _;

use super::{RunMonitor, RunResult, StopCondition};
use crate::error::{Error, Result};
use crate::graph::{bfs_collect, BfsLimit, Coloring, WeightedGraph, NUM_COLORS};
use crate::local_search::Vnd;
use crate::objective::ColoringState;
use crate::rng::{rng_from, substream, tag, Rng};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VnsParams {
    pub k_max: usize,
    pub l_max: usize,
}

impl Default for VnsParams {
    fn default() -> Self {
        Self { k_max: 10, l_max: 50 }
    }
}

/// `k` times: take the BFS ball of height `l` around a random vertex and
/// shift every color in it by the same random `s` in {1, 2} modulo 3. Stops
/// early if a ball contains every vertex.
pub fn shake_state<W: Weight>(state: &mut ColoringState<'_, W>, k: usize, l: usize, rng: &mut Rng) {
    let g = state.graph();
    let n = g.n();
    if n == 0 {
        return;
    }
    for _ in 0..k {
        let root = rng.gen_range(0..n);
        let ball = bfs_collect(g, root, BfsLimit::Height(l));
        if ball.len() == n {
            return;
        }
        let s = rng.gen_range(1..NUM_COLORS);
        for v in ball {
            let c = ((state.color(v) as usize + s) % NUM_COLORS) as u8;
            state.apply(v, c);
        }
    }
}

pub fn shake<W: Weight>(g: &WeightedGraph<W>, c: &Coloring, k: usize, l: usize, seed: u64) -> Result<Coloring> {
    let mut state = ColoringState::new(g, c.clone())?;
    shake_state(&mut state, k, l, &mut rng_from(seed));
    Ok(state.into_coloring())
}

/// One iteration handles one value of `k`: for `l = 1..=min(k, l_max)` it
/// shakes the current solution with `(k, l)`, descends, and keeps the result
/// if it is better. `k` then advances, wrapping from `k_max` back to 1.
pub fn vns<W: Weight>(
    g: &WeightedGraph<W>,
    c0: &Coloring,
    params: &VnsParams,
    stop: &StopCondition,
    seed: u64,
) -> Result<RunResult<W>> {
    let mut mon = RunMonitor::new(g, stop)?;
    vns_monitored(g, c0, params, &mut mon, seed)?;
    Ok(mon.finish(false))
}

pub(crate) fn vns_monitored<W: Weight>(
    g: &WeightedGraph<W>,
    c0: &Coloring,
    params: &VnsParams,
    mon: &mut RunMonitor<W>,
    seed: u64,
) -> Result<()> {
    if params.k_max == 0 || params.l_max == 0 {
        return Err(Error::InvalidParameter("k_max and l_max must be positive".into()));
    }
    let mut x = ColoringState::new(g, c0.clone())?;
    mon.offer_state(&x);
    let vnd = Vnd::new(g);
    let mut rng = substream(seed, tag::VNS);
    let tol = W::move_eps() * (W::one() + g.max_weighted_degree());
    let mut k = 1;
    while !mon.should_stop() && !mon.at_zero() {
        let mut improved = false;
        for l in 1..=k.min(params.l_max) {
            if mon.should_stop() {
                break;
            }
            let mut y = x.clone();
            shake_state(&mut y, k, l, &mut rng);
            vnd.run(&mut y);
            mon.tick();
            if y.objective() < x.objective() - tol {
                x = y;
                improved |= mon.offer_state(&x);
            }
        }
        mon.end_iteration(improved);
        k = if k >= params.k_max { 1 } else { k + 1 };
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_random, GenSpec};
    use crate::local_search::vnd;

    fn path(n: usize) -> WeightedGraph<f64> {
        WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn height_zero_shifts_one_vertex_per_repetition() {
        let g = path(6);
        let c = Coloring::uniform(6, 0);
        for seed in 0..20 {
            let out = shake(&g, &c, 1, 0, seed).unwrap();
            assert_eq!(out.as_slice().iter().filter(|&&x| x != 0).count(), 1);
        }
    }

    #[test]
    fn opposite_shifts_cancel() {
        let g = path(5);
        let c = Coloring::new(vec![0, 1, 2, 1, 0]).unwrap();
        let ball = bfs_collect(&g, 2, BfsLimit::Height(1));
        let mut state = ColoringState::new(&g, c.clone()).unwrap();
        for s in [1usize, 2] {
            for &v in &ball {
                let x = ((state.color(v) as usize + s) % 3) as u8;
                state.apply(v, x);
            }
        }
        assert_eq!(state.coloring(), &c);
    }

    #[test]
    fn other_components_untouched() {
        let g = WeightedGraph::from_edges(6, [(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0)]).unwrap();
        let c = Coloring::uniform(6, 0);
        for seed in 0..20 {
            let out = shake(&g, &c, 1, 5, seed).unwrap();
            let changed: Vec<usize> = (0..6).filter(|&v| out.get(v) != 0).collect();
            assert!(changed == vec![0, 1, 2] || changed == vec![3, 4, 5], "{changed:?}");
        }
    }

    #[test]
    fn ball_covering_everything_aborts() {
        let g = path(4);
        let c = Coloring::uniform(4, 0);
        assert_eq!(shake(&g, &c, 3, 10, 1).unwrap(), c);
    }

    #[test]
    fn no_iterations_leaves_input() {
        let g: WeightedGraph<f64> = gen_random(&GenSpec::random(20, 60, 3)).unwrap();
        let c = vnd(&g, Coloring::uniform(20, 0)).unwrap();
        let stop = StopCondition::iterations(0);
        let r = vns(&g, &c, &VnsParams::default(), &stop, 5).unwrap();
        assert_eq!(r.coloring(), &c);
    }

    #[test]
    fn improves_and_is_monotone() {
        let g: WeightedGraph<f64> = gen_random(&GenSpec::random(30, 120, 2)).unwrap();
        let c = Coloring::uniform(30, 0);
        let r = vns(&g, &c, &VnsParams::default(), &StopCondition::iterations(30).logical(), 5).unwrap();
        assert!(r.timeline.is_monotone());
        assert!(r.value() < r.timeline.points()[0].objective);
    }
}
