//! Experiment configuration, read from TOML.
//!
//! ```toml
//! instances = ["graphs/a.txt"]
//! algorithms = ["greedy", "hsa", "vns", "gls", "ipi", "allmh"]
//! repetitions = 10
//! time_limit = 5.0        # seconds per run
//! stale_limit = 100
//! seed = 1
//! output = "results"
//! deterministic = false
//!
//! [[generate]]
//! family = "random"
//! n = 30
//! m = 120
//! seed = 7
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;
use tricolor::instances::{generate, GenSpec};
use tricolor::metaheuristics::StopCondition;
use tricolor::Graph;

use crate::algo::Algorithm;
use crate::error::{HarnessError, Result};

fn default_repetitions() -> u32 {
    10
}
fn default_lb_q() -> usize {
    tricolor::decomposition::DEFAULT_Q
}
fn default_exact_node_limit() -> u64 {
    10_000_000
}
fn default_exact_max_n() -> usize {
    40
}
fn default_max_sub() -> usize {
    20
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    instances: Vec<PathBuf>,
    #[serde(default)]
    generate: Vec<RawGen>,
    algorithms: Vec<String>,
    #[serde(default = "default_repetitions")]
    repetitions: u32,
    time_limit: Option<f64>,
    stale_limit: Option<u64>,
    iteration_limit: Option<u64>,
    #[serde(default)]
    seed: u64,
    output: PathBuf,
    #[serde(default)]
    deterministic: bool,
    #[serde(default = "default_lb_q")]
    lb_q: usize,
    workers: Option<usize>,
    #[serde(default = "default_exact_node_limit")]
    exact_node_limit: u64,
    #[serde(default = "default_exact_max_n")]
    exact_max_n: usize,
    #[serde(default = "default_max_sub")]
    max_sub: usize,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
enum RawGen {
    Random {
        n: usize,
        m: usize,
        #[serde(default)]
        seed: u64,
        weight_max: Option<f64>,
    },
    Udg {
        n: usize,
        r: f64,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    Generated(GenSpec),
}

impl InstanceSource {
    pub fn name(&self) -> String {
        match self {
            InstanceSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "instance".into()),
            InstanceSource::Generated(spec) => spec.label(),
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            InstanceSource::File(p) => tricolor::io::read_graph(p).map_err(|source| HarnessError::File {
                path: p.clone(),
                source,
            }),
            InstanceSource::Generated(spec) => Ok(generate(spec)?),
        }
    }
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: u32,
    pub stop: StopCondition,
    pub seed: u64,
    pub output: PathBuf,
    /// Cluster cap of both lower bounds.
    pub lb_q: usize,
    /// Concurrent runs; 1 in deterministic mode.
    pub workers: usize,
    /// Node budget of the exact reference solve.
    pub exact_node_limit: u64,
    /// Instances larger than this get no exact reference.
    pub exact_max_n: usize,
    pub max_sub: usize,
}

impl ExperimentSpec {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn from_toml_str(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };

        let mut instances: Vec<InstanceSource> =
            raw.instances.iter().map(|p| InstanceSource::File(resolve(p))).collect();
        for g in &raw.generate {
            instances.push(InstanceSource::Generated(match *g {
                RawGen::Random { n, m, seed, weight_max } => {
                    let mut spec = GenSpec::random(n, m, seed);
                    if let Some(w) = weight_max {
                        spec.family = tricolor::instances::Family::Random { m, weight_max: w };
                    }
                    spec
                }
                RawGen::Udg { n, r, seed } => GenSpec::udg(n, r, seed),
            }));
        }
        let algorithms = raw
            .algorithms
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Algorithm>>>()?;

        let time_limit = match raw.time_limit {
            Some(t) if !(t.is_finite() && t > 0.0) => {
                return Err(HarnessError::Config(format!("time_limit must be positive, got {t}")))
            }
            t => t.map(Duration::from_secs_f64),
        };
        let stop = StopCondition {
            time_limit,
            stale_limit: raw.stale_limit,
            iteration_limit: raw.iteration_limit,
            logical_clock: raw.deterministic,
        };
        let spec = Self {
            instances,
            algorithms,
            repetitions: raw.repetitions,
            stop,
            seed: raw.seed,
            output: resolve(&raw.output),
            lb_q: raw.lb_q,
            workers: if raw.deterministic { 1 } else { raw.workers.unwrap_or(1).max(1) },
            exact_node_limit: raw.exact_node_limit,
            exact_max_n: raw.exact_max_n,
            max_sub: raw.max_sub,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks everything that can be checked before running: counts, limits,
    /// algorithm list and that every instance file exists and parses.
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(HarnessError::Config(m));
        if self.repetitions == 0 {
            return cfg("repetitions must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return cfg("no algorithms listed".into());
        }
        if self.instances.is_empty() {
            return cfg("no instances listed".into());
        }
        if self.lb_q == 0 || self.lb_q > 60 {
            return cfg(format!("lb_q must lie in 1..=60, got {}", self.lb_q));
        }
        if self.max_sub == 0 {
            return cfg("max_sub must be positive".into());
        }
        let needs_stop = self.algorithms.iter().any(|a| !a.is_constructive());
        if needs_stop {
            self.stop.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        let mut names = HashSet::new();
        for inst in &self.instances {
            if !names.insert(inst.name()) {
                return cfg(format!("two instances share the name `{}`", inst.name()));
            }
            if let InstanceSource::File(p) = inst {
                if !p.is_file() {
                    return cfg(format!("instance file {} not found", p.display()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generated_instances() {
        let text = r#"
            algorithms = ["greedy", "VNS"]
            repetitions = 2
            stale_limit = 5
            output = "out"
            deterministic = true

            [[generate]]
            family = "random"
            n = 10
            m = 20
            seed = 3

            [[generate]]
            family = "udg"
            n = 10
            r = 0.5
        "#;
        let spec = ExperimentSpec::from_toml_str(text, Path::new("/tmp/x")).unwrap();
        assert_eq!(spec.algorithms, vec![Algorithm::Greedy, Algorithm::Vns]);
        assert_eq!(spec.instances.len(), 2);
        assert_eq!(spec.output, PathBuf::from("/tmp/x/out"));
        assert!(spec.stop.logical_clock);
        assert_eq!(spec.workers, 1);
        assert_eq!(spec.lb_q, 20);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = Path::new(".");
        let bad = [
            "algorithms = [\"tabu\"]\noutput = \"o\"\nstale_limit = 1\n[[generate]]\nfamily = \"udg\"\nn = 3\nr = 0.1",
            "algorithms = [\"hsa\"]\noutput = \"o\"\n[[generate]]\nfamily = \"udg\"\nn = 3\nr = 0.1",
            "algorithms = [\"hsa\"]\noutput = \"o\"\nstale_limit = 1",
            "algorithms = [\"hsa\"]\noutput = \"o\"\nstale_limit = 1\ninstances = [\"/no/such/file.txt\"]",
            "algorithms = [\"greedy\"]\noutput = \"o\"\nrepetitions = 0\n[[generate]]\nfamily = \"udg\"\nn = 3\nr = 0.1",
            "algorithms = [\"greedy\"]\noutput = \"o\"\ncolour = 1",
        ];
        for text in bad {
            assert!(matches!(ExperimentSpec::from_toml_str(text, base), Err(HarnessError::Config(_))), "{text}");
        }
    }
}
