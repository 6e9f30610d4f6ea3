//! Batch runs over instances, algorithms and repetitions.
//!
//! Writes into the output directory:
//!
//! * `summary.csv`: one row per instance and algorithm,
//! * `runs.csv`: one row per run,
//! * `timelines/<instance>_<algo>_<rep>.csv`: improvement timeline of each run.
//!
//! In deterministic mode runs execute one after another on the logical
//! clock, so every file is a pure function of the configuration.

use std::fmt::Write as _;
use std::fs;

use rayon::prelude::*;
use tricolor::decomposition::{heavy_edge_clusters, lower_bound, spectral_clusters, BoundConfig};
use tricolor::exact::{branch_and_bound, brute_force, BnbBudget, FixedColors, BRUTE_FORCE_MAX_FREE};
use tricolor::metaheuristics::RunResult;
use tricolor::rng::derive_seed;
use tricolor::Graph;

use crate::algo::{run_algorithm, Algorithm, SolveOptions};
use crate::config::ExperimentSpec;
use crate::error::{HarnessError, Result};

const KMEANS_MAX_ITER: usize = 100;

/// Reference values of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceInfo {
    pub name: String,
    pub n: usize,
    pub m: usize,
    /// Bound from heavy-edge clusters.
    pub lb: f64,
    /// Bound from spectral clusters.
    pub lb2: f64,
    /// Optimum, if it was proven within the budget.
    pub exact: Option<f64>,
}

impl InstanceInfo {
    /// Best available lower bound.
    pub fn bound(&self) -> f64 {
        self.exact.unwrap_or(0.0).max(self.lb).max(self.lb2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub algo: Algorithm,
    pub rep: u32,
    pub seed: u64,
    pub value: f64,
    pub time_to_best_ms: f64,
    pub iterations: u64,
    pub proven: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub algo: Algorithm,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub best: f64,
    pub worst: f64,
    pub lb: f64,
    pub lb2: f64,
    pub exact: Option<f64>,
    /// `best` over the largest bound; `None` when the bound is zero but
    /// `best` is not.
    pub ratio: Option<f64>,
    pub mean_time_to_best_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub instances: Vec<InstanceInfo>,
    pub runs: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Heavy-edge bound, spectral bound and, for small instances, the optimum.
pub fn reference_values(name: &str, g: &Graph, spec: &ExperimentSpec) -> Result<InstanceInfo> {
    let cfg = BoundConfig {
        max_vertices: spec.lb_q.max(BoundConfig::default().max_vertices),
        parallel: spec.workers > 1,
        ..BoundConfig::default()
    };
    let lb = lower_bound(g, &heavy_edge_clusters(g, spec.lb_q)?, &cfg)?.value;
    let lb2 = lower_bound(g, &spectral_clusters(g, spec.lb_q, KMEANS_MAX_ITER, spec.seed)?, &cfg)?.value;
    let exact = if g.n() <= BRUTE_FORCE_MAX_FREE {
        Some(brute_force(g, &FixedColors::new())?.value)
    } else if g.n() <= spec.exact_max_n {
        let r = branch_and_bound(g, &FixedColors::new(), BnbBudget::nodes(spec.exact_node_limit))?;
        r.proven_optimal.then_some(r.value)
    } else {
        None
    };
    Ok(InstanceInfo {
        name: name.to_string(),
        n: g.n(),
        m: g.m(),
        lb,
        lb2,
        exact,
    })
}

/// Seed of one run, derived from the root seed and the run's position.
pub fn run_seed(root: u64, instance: usize, algo: Algorithm, rep: u32) -> u64 {
    let a = Algorithm::ALL.iter().position(|&x| x == algo).expect("listed") as u64;
    derive_seed(derive_seed(derive_seed(root, instance as u64), a), rep as u64)
}

struct Job<'a> {
    inst: usize,
    g: &'a Graph,
    algo: Algorithm,
    rep: u32,
    seed: u64,
}

/// Runs the experiment and writes its files. Every instance is loaded and
/// the output directory created before the first run starts.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let deterministic = spec.stop.logical_clock;
    let mut graphs = Vec::with_capacity(spec.instances.len());
    let mut names = Vec::with_capacity(spec.instances.len());
    for src in &spec.instances {
        names.push(src.name());
        graphs.push(src.load()?);
    }
    let timeline_dir = spec.output.join("timelines");
    fs::create_dir_all(&timeline_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;

    let infos = graphs
        .iter()
        .zip(&names)
        .map(|(g, name)| pool.install(|| reference_values(name, g, spec)))
        .collect::<Result<Vec<_>>>()?;

    let mut jobs = Vec::new();
    for (inst, g) in graphs.iter().enumerate() {
        for &algo in &spec.algorithms {
            for rep in 0..spec.repetitions {
                jobs.push(Job {
                    inst,
                    g,
                    algo,
                    rep,
                    seed: run_seed(spec.seed, inst, algo, rep),
                });
            }
        }
    }
    let run = |job: &Job<'_>| -> Result<RunResult<f64>> {
        let mut opts = SolveOptions::new(spec.stop, job.seed);
        opts.max_sub = spec.max_sub;
        opts.gls_parallel = !deterministic && spec.workers > 1;
        run_algorithm(job.g, job.algo, &opts)
    };
    let results: Vec<RunResult<f64>> = if deterministic || spec.workers == 1 {
        jobs.iter().map(run).collect::<Result<_>>()?
    } else {
        pool.install(|| jobs.par_iter().map(run).collect::<Result<_>>())?
    };

    let mut runs = Vec::with_capacity(jobs.len());
    for (job, r) in jobs.iter().zip(&results) {
        let name = &names[job.inst];
        r.timeline
            .write_csv(timeline_dir.join(format!("{}_{}_{}.csv", name, job.algo, job.rep)))?;
        runs.push(RunRecord {
            instance: name.clone(),
            algo: job.algo,
            rep: job.rep,
            seed: job.seed,
            value: r.value(),
            time_to_best_ms: r.time_to_best_ms(),
            iterations: r.solution.nodes_explored,
            proven: r.solution.proven_optimal,
        });
    }
    let summary = summarize(&infos, &spec.algorithms, &runs);
    fs::write(spec.output.join("runs.csv"), runs_csv(&runs))?;
    fs::write(spec.output.join("summary.csv"), summary_csv(&summary))?;
    Ok(ExperimentReport {
        instances: infos,
        runs,
        summary,
    })
}

fn summarize(infos: &[InstanceInfo], algos: &[Algorithm], runs: &[RunRecord]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for info in infos {
        for &algo in algos {
            let sel: Vec<&RunRecord> = runs
                .iter()
                .filter(|r| r.instance == info.name && r.algo == algo)
                .collect();
            if sel.is_empty() {
                continue;
            }
            let k = sel.len() as f64;
            let best = sel.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
            let worst = sel.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
            // rounding can push the mean of equal values past them
            let mean = (sel.iter().map(|r| r.value).sum::<f64>() / k).clamp(best, worst);
            let var = sel.iter().map(|r| (r.value - mean).powi(2)).sum::<f64>() / k;
            out.push(SummaryRow {
                instance: info.name.clone(),
                n: info.n,
                m: info.m,
                algo,
                mean,
                std: var.sqrt(),
                best,
                worst,
                lb: info.lb,
                lb2: info.lb2,
                exact: info.exact,
                ratio: ratio(best, info.bound()),
                mean_time_to_best_ms: sel.iter().map(|r| r.time_to_best_ms).sum::<f64>() / k,
            });
        }
    }
    out
}

/// `best / bound`, with `0 / 0 = 1` and no value for a positive `best` over
/// a zero bound.
pub fn ratio(best: f64, bound: f64) -> Option<f64> {
    if bound > 0.0 {
        Some(best / bound)
    } else if best <= 0.0 {
        Some(1.0)
    } else {
        None
    }
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from("instance,n,m,algo,mean,std,best,worst,lb,lb2,exact,ratio,mean_time_to_best_ms\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            field(&r.instance),
            r.n,
            r.m,
            r.algo,
            r.mean,
            r.std,
            r.best,
            r.worst,
            r.lb,
            r.lb2,
            opt(r.exact),
            opt(r.ratio),
            r.mean_time_to_best_ms
        );
    }
    s
}

pub fn runs_csv(runs: &[RunRecord]) -> String {
    let mut s = String::from("instance,algo,rep,seed,value,time_to_best_ms,iterations,proven\n");
    for r in runs {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            field(&r.instance),
            r.algo,
            r.rep,
            r.seed,
            r.value,
            r.time_to_best_ms,
            r.iterations,
            r.proven
        );
    }
    s
}
