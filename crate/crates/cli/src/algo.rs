use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use tricolor::local_search::{greedy_construct, vnd, GreedySpec};
use tricolor::metaheuristics::{
    all_mh, gls, hsa, ipi, vns, AllMhParams, GlsParams, HsaParams, IpiParams, RunResult, StopCondition,
    Timeline, VnsParams,
};
use tricolor::exact::SolveResult;
use tricolor::{Coloring, Graph};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Greedy,
    Vnd,
    Hsa,
    Vns,
    Gls,
    Ipi,
    AllMh,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Greedy,
        Algorithm::Vnd,
        Algorithm::Hsa,
        Algorithm::Vns,
        Algorithm::Gls,
        Algorithm::Ipi,
        Algorithm::AllMh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Vnd => "vnd",
            Algorithm::Hsa => "hsa",
            Algorithm::Vns => "vns",
            Algorithm::Gls => "gls",
            Algorithm::Ipi => "ipi",
            Algorithm::AllMh => "allmh",
        }
    }

    /// Single-shot constructions that ignore the stop condition.
    pub fn is_constructive(self) -> bool {
        matches!(self, Algorithm::Greedy | Algorithm::Vnd)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| HarnessError::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Starting coloring of improvement methods.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Greedy,
    Given(Coloring),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub stop: StopCondition,
    pub seed: u64,
    pub init: Init,
    pub max_sub: usize,
    pub gls_parallel: bool,
}

impl SolveOptions {
    pub fn new(stop: StopCondition, seed: u64) -> Self {
        Self {
            stop,
            seed,
            init: Init::Greedy,
            max_sub: IpiParams::default().max_sub,
            gls_parallel: true,
        }
    }
}

fn single_shot(g: &Graph, coloring: Coloring, stop: &StopCondition, started: Instant) -> Result<RunResult<f64>> {
    let value = tricolor::objective::objective(g, &coloring)?;
    let elapsed = if stop.logical_clock {
        0.0
    } else {
        started.elapsed().as_secs_f64() * 1e3
    };
    let mut timeline = Timeline::new();
    timeline.push(elapsed, value);
    Ok(RunResult {
        solution: SolveResult {
            coloring,
            value,
            proven_optimal: value <= 0.0,
            nodes_explored: 0,
        },
        timeline,
    })
}

/// Runs one algorithm on `g`.
pub fn run_algorithm(g: &Graph, algo: Algorithm, opts: &SolveOptions) -> Result<RunResult<f64>> {
    let started = Instant::now();
    let init = || -> Result<Coloring> {
        match &opts.init {
            Init::Greedy => Ok(greedy_construct(g, &GreedySpec::deterministic())),
            Init::Given(c) => {
                c.check_for(g)?;
                Ok(c.clone())
            }
        }
    };
    let r = match algo {
        Algorithm::Greedy => single_shot(g, greedy_construct(g, &GreedySpec::deterministic()), &opts.stop, started)?,
        Algorithm::Vnd => single_shot(g, vnd(g, init()?)?, &opts.stop, started)?,
        Algorithm::Hsa => hsa(g, &init()?, &HsaParams::default(), &opts.stop, opts.seed)?,
        Algorithm::Vns => vns(g, &init()?, &VnsParams::default(), &opts.stop, opts.seed)?,
        Algorithm::Gls => {
            let seeds = match &opts.init {
                Init::Given(c) => vec![c.clone()],
                Init::Greedy => Vec::new(),
            };
            let p = GlsParams {
                parallel: opts.gls_parallel,
                ..GlsParams::default()
            };
            gls(g, &p, &opts.stop, opts.seed, &seeds)?
        }
        Algorithm::Ipi => ipi(g, &init()?, &ipi_params(opts), &opts.stop, opts.seed)?,
        Algorithm::AllMh => {
            let p = AllMhParams {
                ipi: ipi_params(opts),
                gls: GlsParams {
                    parallel: opts.gls_parallel,
                    ..GlsParams::default()
                },
                ..AllMhParams::default()
            };
            all_mh(g, &init()?, &p, &opts.stop, opts.seed)?
        }
    };
    Ok(r)
}

fn ipi_params(opts: &SolveOptions) -> IpiParams {
    IpiParams {
        max_sub: opts.max_sub,
        ..IpiParams::default()
    }
}
