//! Metaheuristics: simulated annealing (HSA), variable neighborhood search
//! (VNS), genetic local search (GLS), iterative partial improvement (IPI) and
//! their round-robin combination (AllMH).
//!
//! Every algorithm reports a [`RunResult`]: the best coloring found and the
//! [`Timeline`] of incumbent improvements. Runs end according to a
//! [`StopCondition`]. With `logical_clock` set, elapsed time is counted in
//! work ticks instead of milliseconds and the wall-clock limit is ignored,
//! which makes runs reproducible bit for bit.

mod allmh;
mod gls;
mod hsa;
mod ipi;
mod vns;

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exact::SolveResult;
use crate::graph::{Coloring, WeightedGraph};
use crate::objective::{objective_unchecked, ColoringState};
use crate::scalar::Weight;

pub use allmh::{all_mh, AllMhParams};
pub use gls::{crossover, fitness, gls, mutate, GlsParams};
pub use hsa::{acceptance_probability, hsa, HsaParams};
pub use ipi::{build_subgraph_cover, ipi, IpiParams};
pub use vns::{shake, shake_state, vns, VnsParams};

/// When a run ends. Any limit that is set can end it; at least one must be
/// effective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StopCondition {
    pub time_limit: Option<Duration>,
    /// Consecutive iterations without improving the incumbent.
    pub stale_limit: Option<u64>,
    pub iteration_limit: Option<u64>,
    /// Count elapsed time in work ticks and ignore `time_limit`.
    pub logical_clock: bool,
}

impl StopCondition {
    pub fn time(limit: Duration) -> Self {
        Self {
            time_limit: Some(limit),
            ..Self::default()
        }
    }

    pub fn iterations(limit: u64) -> Self {
        Self {
            iteration_limit: Some(limit),
            ..Self::default()
        }
    }

    pub fn with_stale(mut self, limit: u64) -> Self {
        self.stale_limit = Some(limit);
        self
    }

    pub fn with_iterations(mut self, limit: u64) -> Self {
        self.iteration_limit = Some(limit);
        self
    }

    pub fn logical(mut self) -> Self {
        self.logical_clock = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let timed = self.time_limit.is_some() && !self.logical_clock;
        if !timed && self.stale_limit.is_none() && self.iteration_limit.is_none() {
            return Err(Error::InvalidParameter(
                "stop condition needs a time, stale or iteration limit (time limits are ignored with a logical clock)"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Every limit divided by `parts`; counts are kept at least 1.
    pub fn split(&self, parts: u32) -> Self {
        let parts = parts.max(1);
        let div = |x: u64| (x / parts as u64).max(1);
        Self {
            time_limit: self.time_limit.map(|t| t / parts),
            stale_limit: self.stale_limit.map(div),
            iteration_limit: self.iteration_limit.map(div),
            logical_clock: self.logical_clock,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelinePoint<W> {
    /// Milliseconds since the start, or work ticks with a logical clock.
    pub elapsed_ms: f64,
    pub objective: W,
}

/// Incumbent value after each improvement.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Timeline<W> {
    points: Vec<TimelinePoint<W>>,
}

impl<W: Weight> Timeline<W> {
    pub fn new() -> Self {
        Self { points: Vec::new() }
    }

    pub fn push(&mut self, elapsed_ms: f64, objective: W) {
        self.points.push(TimelinePoint { elapsed_ms, objective });
    }

    pub fn points(&self) -> &[TimelinePoint<W>] {
        &self.points
    }

    pub fn last(&self) -> Option<&TimelinePoint<W>> {
        self.points.last()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Objectives never increase and times never decrease.
    pub fn is_monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|p| p[1].objective <= p[0].objective && p[1].elapsed_ms >= p[0].elapsed_ms)
    }

    /// CSV with header `elapsed_ms,objective`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("elapsed_ms,objective\n");
        for p in &self.points {
            let _ = writeln!(s, "{},{}", p.elapsed_ms, p.objective);
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Outcome of a metaheuristic run.
#[derive(Debug, Clone)]
pub struct RunResult<W> {
    pub solution: SolveResult<W>,
    pub timeline: Timeline<W>,
}

impl<W: Weight> RunResult<W> {
    pub fn value(&self) -> W {
        self.solution.value
    }

    pub fn coloring(&self) -> &Coloring {
        &self.solution.coloring
    }

    /// Elapsed time of the last improvement.
    pub fn time_to_best_ms(&self) -> f64 {
        self.timeline.last().map_or(0.0, |p| p.elapsed_ms)
    }
}

/// Tracks budget, incumbent and timeline for one run.
#[derive(Debug, Clone)]
pub struct RunMonitor<W> {
    stop: StopCondition,
    start: Instant,
    deadline: Option<Instant>,
    ticks: u64,
    iterations: u64,
    stale: u64,
    tol: W,
    best: Option<(W, Coloring)>,
    timeline: Timeline<W>,
}

impl<W: Weight> RunMonitor<W> {
    pub fn new(g: &WeightedGraph<W>, stop: &StopCondition) -> Result<Self> {
        stop.validate()?;
        let start = Instant::now();
        Ok(Self {
            stop: *stop,
            start,
            deadline: Self::deadline_from(stop, start),
            ticks: 0,
            iterations: 0,
            stale: 0,
            tol: W::move_eps() * (W::one() + g.max_weighted_degree()),
            best: None,
            timeline: Timeline::new(),
        })
    }

    fn deadline_from(stop: &StopCondition, now: Instant) -> Option<Instant> {
        if stop.logical_clock {
            None
        } else {
            stop.time_limit.map(|t| now + t)
        }
    }

    /// A monitor for a nested run sharing this monitor's clock. Its deadline
    /// never exceeds the parent's.
    pub fn child(&self, stop: &StopCondition) -> Result<Self> {
        stop.validate()?;
        let own = Self::deadline_from(stop, Instant::now());
        let deadline = match (own, self.deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(Self {
            stop: *stop,
            start: self.start,
            deadline,
            ticks: self.ticks,
            iterations: 0,
            stale: 0,
            tol: self.tol,
            best: None,
            timeline: Timeline::new(),
        })
    }

    /// Takes over the work ticks spent by a finished child run and merges its
    /// improvements over the current incumbent into the timeline.
    pub fn absorb(&mut self, child: &RunMonitor<W>) -> bool {
        self.ticks = self.ticks.max(child.ticks);
        let mut improved = false;
        for p in child.timeline.points() {
            let better = self.best.as_ref().map_or(true, |(b, _)| p.objective < *b);
            if better {
                self.timeline.push(p.elapsed_ms, p.objective);
            }
        }
        if let Some((v, c)) = &child.best {
            if self.best.as_ref().map_or(true, |(b, _)| *v < *b) {
                self.best = Some((*v, c.clone()));
                improved = true;
            }
        }
        improved
    }

    pub fn elapsed_ms(&self) -> f64 {
        if self.stop.logical_clock {
            self.ticks as f64
        } else {
            self.start.elapsed().as_secs_f64() * 1e3
        }
    }

    pub fn should_stop(&self) -> bool {
        if self.stop.iteration_limit.is_some_and(|l| self.iterations >= l) {
            return true;
        }
        if self.stop.stale_limit.is_some_and(|l| self.stale >= l) {
            return true;
        }
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// One unit of work (a proposal, an offspring, a subproblem).
    #[inline]
    pub fn tick(&mut self) {
        self.ticks += 1;
    }

    pub fn end_iteration(&mut self, improved: bool) {
        self.iterations += 1;
        if improved {
            self.stale = 0;
        } else {
            self.stale += 1;
        }
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Offers a coloring whose objective is approximately `approx`. It
    /// becomes the incumbent if its exact objective is lower.
    pub fn offer(&mut self, g: &WeightedGraph<W>, c: &Coloring, approx: W) -> bool {
        if let Some((b, _)) = &self.best {
            if approx >= *b - self.tol {
                return false;
            }
        }
        let exact = objective_unchecked(g, c.as_slice());
        if self.best.as_ref().map_or(true, |(b, _)| exact < *b) {
            self.timeline.push(self.elapsed_ms(), exact);
            self.best = Some((exact, c.clone()));
            true
        } else {
            false
        }
    }

    pub fn offer_state(&mut self, state: &ColoringState<'_, W>) -> bool {
        self.offer(state.graph(), state.coloring(), state.objective())
    }

    pub fn best_value(&self) -> Option<W> {
        self.best.as_ref().map(|(v, _)| *v)
    }

    pub fn best_coloring(&self) -> Option<&Coloring> {
        self.best.as_ref().map(|(_, c)| c)
    }

    /// Zero-weight incumbents cannot be improved.
    pub fn at_zero(&self) -> bool {
        self.best_value().is_some_and(|v| v <= W::zero())
    }

    pub fn finish(self, proven_optimal: bool) -> RunResult<W> {
        let (value, coloring) = self.best.expect("an incumbent is offered before finishing");
        RunResult {
            solution: SolveResult {
                coloring,
                value,
                proven_optimal: proven_optimal || value <= W::zero(),
                nodes_explored: self.iterations,
            },
            timeline: self.timeline,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stop_condition_rules() {
        assert!(StopCondition::default().validate().is_err());
        assert!(StopCondition::time(Duration::from_secs(1)).logical().validate().is_err());
        assert!(StopCondition::time(Duration::from_secs(1)).validate().is_ok());
        let s = StopCondition::time(Duration::from_secs(10)).with_stale(7).with_iterations(3).split(5);
        assert_eq!(s.time_limit, Some(Duration::from_secs(2)));
        assert_eq!(s.stale_limit, Some(1));
        assert_eq!(s.iteration_limit, Some(1));
    }

    #[test]
    fn monitor_tracks_incumbent() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 2.0)]).unwrap();
        let mut m = RunMonitor::new(&g, &StopCondition::iterations(2).logical()).unwrap();
        assert!(m.offer(&g, &Coloring::uniform(2, 0), 2.0));
        assert!(!m.offer(&g, &Coloring::uniform(2, 1), 2.0));
        m.tick();
        assert!(m.offer(&g, &Coloring::new(vec![0, 1]).unwrap(), 0.0));
        m.end_iteration(true);
        assert!(!m.should_stop());
        m.end_iteration(false);
        assert!(m.should_stop());
        let r = m.finish(false);
        assert_eq!(r.value(), 0.0);
        assert!(r.solution.proven_optimal);
        assert_eq!(r.timeline.to_csv(), "elapsed_ms,objective\n0,2\n1,0\n");
        assert!(r.timeline.is_monotone());
    }

    #[test]
    fn stale_limit_counts_consecutive_failures() {
        let g = WeightedGraph::<f64>::empty(1);
        let mut m = RunMonitor::new(&g, &StopCondition::default().with_stale(2)).unwrap();
        m.end_iteration(false);
        m.end_iteration(true);
        m.end_iteration(false);
        assert!(!m.should_stop());
        m.end_iteration(false);
        assert!(m.should_stop());
    }
}
