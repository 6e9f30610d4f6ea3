use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use tricolor::decomposition::{heavy_edge_clusters, lower_bound, spectral_clusters, BoundConfig, DEFAULT_Q};
use tricolor::exact::{branch_and_bound, export_blp, BnbBudget, FixedColors};
use tricolor::instances::{generate, Family, GenSpec};
use tricolor::metaheuristics::StopCondition;
use tricolor::Graph;
use tricolor_cli::{check, run_algorithm, run_experiment, Algorithm, ExperimentSpec, Init, SolveOptions};

#[derive(Parser)]
#[command(name = "tricolor", version, about = "Weighted 3-coloring solvers and experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Random,
    Udg,
}

#[derive(Clone, Copy, ValueEnum)]
enum LbMethod {
    Spectral,
    Heavy,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random or unit disk instance.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Edge count of the random family.
        #[arg(long, required_if_eq("family", "random"))]
        m: Option<usize>,
        /// Radius of the unit disk family.
        #[arg(long, required_if_eq("family", "udg"))]
        r: Option<f64>,
        /// Upper end of the random family's weight range.
        #[arg(long, default_value_t = 100.0)]
        weight_max: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cluster-sum lower bound.
    Lb {
        #[arg(long, value_enum, default_value = "spectral")]
        method: LbMethod,
        #[arg(long, default_value_t = DEFAULT_Q)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        graph: PathBuf,
    },
    /// Exact branch and bound.
    Exact {
        graph: PathBuf,
        /// File of `vertex color` lines.
        #[arg(long)]
        fixed: Option<PathBuf>,
        /// Also write the binary program in LP format.
        #[arg(long)]
        export_lp: Option<PathBuf>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on one graph.
    Solve {
        #[arg(long)]
        algo: Algorithm,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        stale_limit: Option<u64>,
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `greedy` or a coloring file.
        #[arg(long, default_value = "greedy")]
        init: String,
        /// Logical clock: ignores the time limit, timelines count work units.
        #[arg(long)]
        deterministic: bool,
        #[arg(long, default_value_t = 20)]
        max_sub: usize,
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timeline: Option<PathBuf>,
    },
    /// Validate a coloring and report its objective.
    Check { graph: PathBuf, coloring: PathBuf },
    /// Run a batch experiment described by a TOML file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    tricolor::io::read_graph(path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate {
            family,
            n,
            m,
            r,
            weight_max,
            seed,
            out,
        } => {
            let family = match family {
                FamilyArg::Random => Family::Random {
                    m: m.expect("required by clap"),
                    weight_max,
                },
                FamilyArg::Udg => Family::Udg {
                    r: r.expect("required by clap"),
                },
            };
            let g: Graph = generate(&GenSpec { family, n, seed })?;
            tricolor::io::write_graph(&g, &out)?;
            println!("n={} m={}", g.n(), g.m());
        }
        Command::Lb {
            method,
            q,
            seed,
            max_iter,
            graph,
        } => {
            let g = read_graph(&graph)?;
            let p = match method {
                LbMethod::Spectral => spectral_clusters(&g, q, max_iter, seed)?,
                LbMethod::Heavy => heavy_edge_clusters(&g, q)?,
            };
            let cfg = BoundConfig {
                max_vertices: q.max(BoundConfig::default().max_vertices),
                ..BoundConfig::default()
            };
            let lb = lower_bound(&g, &p, &cfg)?;
            println!("bound,{}", lb.value);
            println!("cluster,size,edges,value,proven");
            for (i, c) in lb.clusters.iter().enumerate() {
                println!("{i},{},{},{},{}", c.size, c.edges, c.value, c.proven);
            }
        }
        Command::Exact {
            graph,
            fixed,
            export_lp,
            node_limit,
            out,
        } => {
            let g = read_graph(&graph)?;
            let fixed = match fixed {
                Some(p) => FixedColors::parse(&std::fs::read_to_string(&p)?)?,
                None => FixedColors::new(),
            };
            if let Some(p) = export_lp {
                export_blp(&g, &fixed, p)?;
            }
            let budget = node_limit.map_or(BnbBudget::default(), BnbBudget::nodes);
            let r = branch_and_bound(&g, &fixed, budget)?;
            println!("objective,{}", r.value);
            println!("proven,{}", r.proven_optimal);
            println!("nodes,{}", r.nodes_explored);
            if let Some(p) = out {
                tricolor::io::write_coloring(&r.coloring, p)?;
            }
        }
        Command::Solve {
            algo,
            time_limit,
            stale_limit,
            iterations,
            seed,
            init,
            deterministic,
            max_sub,
            graph,
            out,
            timeline,
        } => {
            let g = read_graph(&graph)?;
            let stop = StopCondition {
                time_limit: time_limit.map(Duration::from_secs_f64),
                stale_limit,
                iteration_limit: iterations,
                logical_clock: deterministic,
            };
            if !algo.is_constructive() {
                stop.validate()?;
            }
            let mut opts = SolveOptions::new(stop, seed);
            opts.max_sub = max_sub;
            opts.gls_parallel = !deterministic;
            if init != "greedy" {
                let c = tricolor::io::read_coloring(&init).with_context(|| format!("reading {init}"))?;
                opts.init = Init::Given(c);
            }
            let r = run_algorithm(&g, algo, &opts)?;
            println!("objective,{}", r.value());
            println!("time_to_best_ms,{}", r.time_to_best_ms());
            if let Some(p) = out {
                tricolor::io::write_coloring(r.coloring(), p)?;
            }
            if let Some(p) = timeline {
                r.timeline.write_csv(p)?;
            }
        }
        Command::Check { graph, coloring } => match check(&graph, &coloring) {
            Ok(rep) => {
                println!("valid,true");
                println!("n,{}", rep.n);
                println!("objective,{}", rep.objective);
                println!(
                    "class_sizes,{},{},{}",
                    rep.class_sizes[0], rep.class_sizes[1], rep.class_sizes[2]
                );
                println!("monochromatic_edges,{}", rep.conflicting_edges);
            }
            Err(tricolor_cli::HarnessError::InvalidColoring(msg)) => {
                println!("valid,false");
                eprintln!("invalid coloring: {msg}");
                return Ok(ExitCode::from(1));
            }
            Err(e) => return Err(e.into()),
        },
        Command::Experiment { config } => {
            let spec = ExperimentSpec::from_file(&config)?;
            let report = run_experiment(&spec)?;
            if report.runs.is_empty() {
                bail!("no runs executed");
            }
            println!(
                "{} runs written to {}",
                report.runs.len(),
                spec.output.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
