//! Simulated annealing with a descent step after every proposal.

use rand::Rng as _;

use super::{RunMonitor, RunResult, StopCondition};
use crate::error::{Error, Result};
use crate::graph::{Coloring, WeightedGraph, NUM_COLORS};
use crate::local_search::Vnd;
use crate::objective::ColoringState;
use crate::rng::{substream, tag};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsaParams {
    /// `T_i = t0 / ln(i + 1)`.
    pub t0: f64,
    /// A run ends once the temperature drops to this value.
    pub t_min: f64,
    /// Proposals per run. `None` means `max(100, 10 n)`. The logarithmic
    /// schedule reaches `t_min = 0` only in the limit, so runs need a cap.
    pub run_length: Option<u64>,
}

impl Default for HsaParams {
    fn default() -> Self {
        Self {
            t0: 100.0,
            t_min: 0.0,
            run_length: None,
        }
    }
}

impl HsaParams {
    pub fn temperature(&self, i: u64) -> f64 {
        self.t0 / ((i + 1) as f64).ln()
    }
}

/// Probability of accepting a move that changes the objective by `delta` at
/// temperature `t`.
pub fn acceptance_probability(delta: f64, t: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else if t <= 0.0 {
        0.0
    } else {
        (-delta / t).exp()
    }
}

/// Annealing runs restarted from the incumbent until the stop condition
/// holds. Each proposal recolors a random vertex to a random other color and
/// is accepted by the Metropolis rule. After every proposal a copy of the
/// annealing state is driven to a local optimum by the descent and offered
/// as incumbent; the annealing walk itself continues undescended, since a
/// descent would undo almost every single-vertex move. The stale counter
/// counts runs.
pub fn hsa<W: Weight>(
    g: &WeightedGraph<W>,
    c0: &Coloring,
    params: &HsaParams,
    stop: &StopCondition,
    seed: u64,
) -> Result<RunResult<W>> {
    let mut mon = RunMonitor::new(g, stop)?;
    hsa_monitored(g, c0, params, &mut mon, seed)?;
    Ok(mon.finish(false))
}

pub(crate) fn hsa_monitored<W: Weight>(
    g: &WeightedGraph<W>,
    c0: &Coloring,
    params: &HsaParams,
    mon: &mut RunMonitor<W>,
    seed: u64,
) -> Result<()> {
    if !(params.t0 > 0.0) || params.t_min < 0.0 {
        return Err(Error::InvalidParameter("need t0 > 0 and t_min >= 0".into()));
    }
    let n = g.n();
    let mut state = ColoringState::new(g, c0.clone())?;
    mon.offer_state(&state);
    let mut probe = state.clone();
    if n == 0 {
        return Ok(());
    }
    let vnd = Vnd::new(g);
    let mut rng = substream(seed, tag::HSA);
    let run_length = params.run_length.unwrap_or((10 * n as u64).max(100));

    while !mon.should_stop() && !mon.at_zero() {
        state.reset(mon.best_coloring().expect("offered").clone())?;
        state.refresh();
        let mut improved = false;
        let mut i = 1;
        while i <= run_length && !mon.should_stop() {
            let t = params.temperature(i);
            if t <= params.t_min {
                break;
            }
            let v = rng.gen_range(0..n);
            let c = ((state.color(v) as usize + rng.gen_range(1..NUM_COLORS)) % NUM_COLORS) as u8;
            let d = state.delta(v, c).to_f64_lossy();
            let p = acceptance_probability(d, t);
            if p >= 1.0 || rng.gen::<f64>() < p {
                state.apply(v, c);
            }
            probe.clone_from(&state);
            vnd.run(&mut probe);
            mon.tick();
            if mon.offer_state(&probe) {
                improved = true;
            }
            i += 1;
        }
        mon.end_iteration(improved);
    }
    Ok(())
}
