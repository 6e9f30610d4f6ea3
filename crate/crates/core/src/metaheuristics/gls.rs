//! Genetic local search.

use std::collections::HashSet;

use rand::Rng as _;
use rayon::prelude::*;

use super::{RunMonitor, RunResult, StopCondition};
use crate::error::{Error, Result};
use crate::graph::{bfs_collect, BfsLimit, Color, Coloring, WeightedGraph, NUM_COLORS};
use crate::local_search::{greedy_construct, GreedySpec, Vnd};
use crate::objective::{objective_unchecked, ColoringState};
use crate::rng::{derive_seed, rng_from, substream, tag, Rng};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlsParams {
    /// Population size.
    pub n_p: usize,
    /// Offspring per generation.
    pub n_r: usize,
    /// Mutation probability.
    pub p_m: f64,
    /// Probability of running the descent on an offspring.
    pub p_vnd: f64,
    /// Evaluate offspring on the rayon pool. Results do not depend on it.
    pub parallel: bool,
}

impl Default for GlsParams {
    fn default() -> Self {
        Self {
            n_p: 50,
            n_r: 25,
            p_m: 0.2,
            p_vnd: 0.8,
            parallel: true,
        }
    }
}

impl GlsParams {
    fn validate(&self) -> Result<()> {
        if self.n_p < 2 {
            return Err(Error::InvalidParameter("population size must be at least 2".into()));
        }
        if self.n_r == 0 || self.n_r > self.n_p {
            return Err(Error::InvalidParameter("need 1 <= n_r <= n_p".into()));
        }
        if !(0.0..=1.0).contains(&self.p_m) || !(0.0..=1.0).contains(&self.p_vnd) {
            return Err(Error::InvalidParameter("probabilities must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// `total / (1 + value)`: larger is fitter.
pub fn fitness(total: f64, value: f64) -> f64 {
    total / (1.0 + value)
}

/// One-point crossover cutting before 0-based position `cut`.
pub fn crossover(a: &Coloring, b: &Coloring, cut: usize) -> (Coloring, Coloring) {
    let (a, b) = (a.as_slice(), b.as_slice());
    let mut c1 = a[..cut].to_vec();
    c1.extend_from_slice(&b[cut..]);
    let mut c2 = b[..cut].to_vec();
    c2.extend_from_slice(&a[cut..]);
    (Coloring::new(c1).expect("valid"), Coloring::new(c2).expect("valid"))
}

/// Recolors, each with probability 1/2, the first `k` BFS vertices from a
/// random center, where `k` is uniform on `[max(1, min(10, n/10)), max(lower, n/5)]`.
/// A recolored vertex always gets a different color.
pub fn mutate<W: Weight>(g: &WeightedGraph<W>, c: &mut Coloring, rng: &mut Rng) {
    let n = g.n();
    if n == 0 {
        return;
    }
    let lower = (n / 10).min(10).max(1);
    let upper = (n / 5).max(lower);
    let k = rng.gen_range(lower..=upper);
    let center = rng.gen_range(0..n);
    for v in bfs_collect(g, center, BfsLimit::Count(k)) {
        if rng.gen_bool(0.5) {
            let x = (c.get(v) as usize + rng.gen_range(1..NUM_COLORS)) % NUM_COLORS;
            c.set(v, x as Color);
        }
    }
}

struct Member<W> {
    coloring: Coloring,
    value: W,
}

fn sort_population<W: Weight>(pop: &mut [Member<W>]) {
    pop.sort_by(|a, b| {
        a.value
            .partial_cmp(&b.value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.coloring.cmp(&b.coloring))
    });
}

fn pick_parent(weights: &[f64], total: f64, rng: &mut Rng) -> usize {
    if total <= 0.0 {
        return rng.gen_range(0..weights.len());
    }
    let mut x = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

/// Genetic local search.
///
/// The initial population holds the deterministic greedy coloring and
/// randomized greedy colorings, each improved by the descent, all distinct.
/// `seeds` replace the worst of them. Each generation draws fitness-weighted
/// parent pairs (two distinct members), applies one-point crossover, mutates
/// and improves the offspring, and keeps the best `n_p` distinct colorings
/// of parents and offspring. Offspring randomness derives from the seed,
/// the generation and the offspring index only.
pub fn gls<W: Weight>(
    g: &WeightedGraph<W>,
    params: &GlsParams,
    stop: &StopCondition,
    seed: u64,
    seeds: &[Coloring],
) -> Result<RunResult<W>> {
    let mut mon = RunMonitor::new(g, stop)?;
    gls_monitored(g, params, &mut mon, seed, seeds)?;
    Ok(mon.finish(false))
}

pub(crate) fn gls_monitored<W: Weight>(
    g: &WeightedGraph<W>,
    params: &GlsParams,
    mon: &mut RunMonitor<W>,
    seed: u64,
    seeds: &[Coloring],
) -> Result<()> {
    params.validate()?;
    for s in seeds {
        s.check_for(g)?;
    }
    let n = g.n();
    let root = derive_seed(seed, tag::GLS);
    let mut rng = substream(seed, tag::GLS);
    let vnd = Vnd::new(g);
    let improve = |c: Coloring| -> Member<W> {
        let mut st = ColoringState::new(g, c).expect("sized coloring");
        vnd.run(&mut st);
        let coloring = st.into_coloring();
        Member {
            value: objective_unchecked(g, coloring.as_slice()),
            coloring,
        }
    };

    let mut pop: Vec<Member<W>> = Vec::new();
    let mut seen: HashSet<Coloring> = HashSet::new();
    let mut add = |m: Member<W>, pop: &mut Vec<Member<W>>| {
        if seen.insert(m.coloring.clone()) {
            pop.push(m);
        }
    };
    add(improve(greedy_construct(g, &GreedySpec::deterministic())), &mut pop);
    let attempts = 20 * params.n_p as u64;
    for a in 0..attempts {
        if pop.len() >= params.n_p {
            break;
        }
        let c = greedy_construct(g, &GreedySpec::randomized(derive_seed(root, a)));
        add(improve(c), &mut pop);
    }
    // descent collapses small graphs to few local optima; fill up without it
    for a in 0..attempts {
        if pop.len() >= params.n_p {
            break;
        }
        let c = greedy_construct(g, &GreedySpec::randomized(derive_seed(root, attempts + a)));
        let value = objective_unchecked(g, c.as_slice());
        add(Member { coloring: c, value }, &mut pop);
    }
    for _ in 0..attempts {
        if pop.len() >= params.n_p {
            break;
        }
        let c = Coloring::new((0..n).map(|_| rng.gen_range(0..NUM_COLORS as Color)).collect()).expect("valid");
        let value = objective_unchecked(g, c.as_slice());
        add(Member { coloring: c, value }, &mut pop);
    }
    sort_population(&mut pop);
    for s in seeds {
        if pop.iter().any(|m| &m.coloring == s) {
            continue;
        }
        let m = Member {
            value: objective_unchecked(g, s.as_slice()),
            coloring: s.clone(),
        };
        if pop.len() >= params.n_p {
            pop.pop();
        }
        pop.push(m);
        sort_population(&mut pop);
    }
    for m in &pop {
        mon.offer(g, &m.coloring, m.value);
    }

    let total = g.total_weight().to_f64_lossy();
    let mut generation = 0u64;
    while !mon.should_stop() && !mon.at_zero() {
        let weights: Vec<f64> = pop.iter().map(|m| fitness(total, m.value.to_f64_lossy())).collect();
        let wsum: f64 = weights.iter().sum();
        let mut children: Vec<Coloring> = Vec::with_capacity(params.n_r + 1);
        while children.len() < params.n_r {
            if pop.len() < 2 || n < 2 {
                let i = pick_parent(&weights, wsum, &mut rng);
                children.push(pop[i].coloring.clone());
                continue;
            }
            let i = pick_parent(&weights, wsum, &mut rng);
            let mut j = i;
            while j == i {
                j = pick_parent(&weights, wsum, &mut rng);
            }
            let cut = rng.gen_range(2..=n) - 1;
            let (a, b) = crossover(&pop[i].coloring, &pop[j].coloring, cut);
            children.push(a);
            children.push(b);
        }
        children.truncate(params.n_r);

        let gen_seed = derive_seed(derive_seed(root, tag::OFFSPRING), generation);
        let make = |(idx, mut c): (usize, Coloring)| -> Member<W> {
            let mut orng = rng_from(derive_seed(gen_seed, idx as u64));
            if orng.gen::<f64>() < params.p_m {
                mutate(g, &mut c, &mut orng);
            }
            if orng.gen::<f64>() < params.p_vnd {
                improve(c)
            } else {
                let value = objective_unchecked(g, c.as_slice());
                Member { coloring: c, value }
            }
        };
        let offspring: Vec<Member<W>> = if params.parallel {
            children.into_par_iter().enumerate().map(make).collect()
        } else {
            children.into_iter().enumerate().map(make).collect()
        };

        let mut improved = false;
        for m in offspring {
            mon.tick();
            if seen.insert(m.coloring.clone()) {
                improved |= mon.offer(g, &m.coloring, m.value);
                pop.push(m);
            }
        }
        sort_population(&mut pop);
        for m in pop.drain(params.n_p.min(pop.len())..) {
            seen.remove(&m.coloring);
        }
        mon.end_iteration(improved);
        generation += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_random, GenSpec};

    #[test]
    fn crossover_children() {
        let a = Coloring::new(vec![0, 0, 0, 0]).unwrap();
        let b = Coloring::new(vec![1, 1, 1, 1]).unwrap();
        let (c, d) = crossover(&a, &b, 1);
        assert_eq!(c.as_slice(), &[0, 1, 1, 1]);
        assert_eq!(d.as_slice(), &[1, 0, 0, 0]);
        let (c, d) = crossover(&a, &a, 3);
        assert_eq!((c, d), (a.clone(), a));
    }

    #[test]
    fn fitness_reverses_order() {
        for (x, y) in [(0.0, 1.0), (3.5, 3.6), (10.0, 1000.0)] {
            assert!(fitness(50.0, x) > fitness(50.0, y));
        }
    }

    #[test]
    fn mutation_changes_only_a_bfs_prefix() {
        let g: WeightedGraph<f64> = gen_random(&GenSpec::random(50, 100, 1)).unwrap();
        let mut rng = rng_from(2);
        for _ in 0..50 {
            let base = Coloring::uniform(50, 1);
            let mut c = base.clone();
            mutate(&g, &mut c, &mut rng);
            let changed = (0..50).filter(|&v| c.get(v) != 1).count();
            assert!(changed <= 10);
        }
    }

    #[test]
    fn rejects_tiny_population() {
        let g = WeightedGraph::<f64>::empty(3);
        let p = GlsParams {
            n_p: 1,
            n_r: 1,
            ..GlsParams::default()
        };
        assert!(gls(&g, &p, &StopCondition::iterations(1), 0, &[]).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let g: WeightedGraph<f64> = gen_random(&GenSpec::random(40, 200, 6)).unwrap();
        let stop = StopCondition::iterations(15).logical();
        let par = gls(&g, &GlsParams::default(), &stop, 3, &[]).unwrap();
        let seq = gls(
            &g,
            &GlsParams {
                parallel: false,
                ..GlsParams::default()
            },
            &stop,
            3,
            &[],
        )
        .unwrap();
        assert_eq!(par.coloring(), seq.coloring());
        assert_eq!(par.timeline, seq.timeline);
        assert!(par.timeline.is_monotone());
    }

    #[test]
    fn seed_member_survives() {
        let g: WeightedGraph<f64> = gen_random(&GenSpec::random(20, 60, 2)).unwrap();
        let best = crate::exact::branch_and_bound(&g, &crate::exact::FixedColors::new(), Default::default()).unwrap();
        let r = gls(&g, &GlsParams::default(), &StopCondition::iterations(1), 1, &[best.coloring.clone()]).unwrap();
        assert!((r.value() - best.value).abs() < 1e-9);
    }

    #[test]
    fn tiny_graphs() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let r = gls(&g, &GlsParams::default(), &StopCondition::iterations(3), 1, &[]).unwrap();
        assert_eq!(r.value(), 0.0);
        let g = WeightedGraph::<f64>::empty(1);
        let r = gls(&g, &GlsParams::default(), &StopCondition::iterations(3), 1, &[]).unwrap();
        assert_eq!(r.value(), 0.0);
    }
}
