//! Round-robin combination of the four metaheuristics.

use super::gls::gls_monitored;
use super::hsa::hsa_monitored;
use super::ipi::ipi_monitored;
use super::vns::vns_monitored;
use super::{GlsParams, HsaParams, IpiParams, RunMonitor, RunResult, StopCondition, VnsParams};
use crate::error::Result;
use crate::graph::{Coloring, WeightedGraph};
use crate::rng::{derive_seed, tag};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AllMhParams {
    pub hsa: HsaParams,
    pub vns: VnsParams,
    pub ipi: IpiParams,
    pub gls: GlsParams,
}

/// Each round runs HSA, VNS, IPI and GLS in turn, each starting from the
/// incumbent and each with a fifth of every limit; GLS gets the incumbent
/// in its initial population. One round is one iteration of the stop
/// condition.
pub fn all_mh<W: Weight>(
    g: &WeightedGraph<W>,
    c0: &Coloring,
    params: &AllMhParams,
    stop: &StopCondition,
    seed: u64,
) -> Result<RunResult<W>> {
    let mut mon = RunMonitor::new(g, stop)?;
    mon.offer(g, c0, crate::objective::objective(g, c0)?);
    let sub_stop = stop.split(5);
    let root = derive_seed(seed, tag::ALLMH);
    let mut round = 0u64;
    let mut proven = false;
    while !mon.should_stop() && !mon.at_zero() {
        let mut improved = false;
        for step in 0..4u64 {
            if mon.should_stop() || mon.at_zero() {
                break;
            }
            let s = derive_seed(root, 4 * round + step);
            let start = mon.best_coloring().expect("offered").clone();
            let mut child = mon.child(&sub_stop)?;
            match step {
                0 => hsa_monitored(g, &start, &params.hsa, &mut child, s)?,
                1 => vns_monitored(g, &start, &params.vns, &mut child, s)?,
                2 => proven |= ipi_monitored(g, &start, &params.ipi, &mut child, s)?,
                _ => gls_monitored(g, &params.gls, &mut child, s, std::slice::from_ref(&start))?,
            }
            improved |= mon.absorb(&child);
        }
        mon.end_iteration(improved);
        round += 1;
        if proven {
            break;
        }
    }
    Ok(mon.finish(proven))
}
