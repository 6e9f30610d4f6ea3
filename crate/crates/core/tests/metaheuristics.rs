use std::time::Duration;

use tricolor::exact::{branch_and_bound, BnbBudget, FixedColors};
use tricolor::instances::{gen_random, gen_udg, GenSpec};
use tricolor::local_search::{greedy_construct, GreedySpec};
use tricolor::metaheuristics::{
    all_mh, gls, hsa, ipi, vns, AllMhParams, GlsParams, HsaParams, IpiParams, RunResult, StopCondition, VnsParams,
};
use tricolor::objective::objective;
use tricolor::{Coloring, Graph, WeightedGraph};

fn run_all(g: &Graph, c0: &Coloring, stop: &StopCondition, seed: u64) -> Vec<(&'static str, RunResult<f64>)> {
    vec![
        ("hsa", hsa(g, c0, &HsaParams::default(), stop, seed).unwrap()),
        ("vns", vns(g, c0, &VnsParams::default(), stop, seed).unwrap()),
        ("gls", gls(g, &GlsParams::default(), stop, seed, &[c0.clone()]).unwrap()),
        ("ipi", ipi(g, c0, &IpiParams::default(), stop, seed).unwrap()),
        ("allmh", all_mh(g, c0, &AllMhParams::default(), stop, seed).unwrap()),
    ]
}

#[test]
fn logical_clock_runs_repeat_exactly() {
    let g: Graph = gen_udg(&GenSpec::udg(50, 0.25, 4)).unwrap().0;
    let c0 = greedy_construct(&g, &GreedySpec::deterministic());
    let stop = StopCondition::iterations(6).logical();
    let a = run_all(&g, &c0, &stop, 17);
    let b = run_all(&g, &c0, &stop, 17);
    for ((name, x), (_, y)) in a.iter().zip(&b) {
        assert_eq!(x.coloring(), y.coloring(), "{name}");
        assert_eq!(x.timeline, y.timeline, "{name}");
    }
}

#[test]
fn results_are_valid_and_no_worse_than_start() {
    for seed in 0..4 {
        let g: Graph = gen_random(&GenSpec::random(40, 200, seed)).unwrap();
        let c0 = greedy_construct(&g, &GreedySpec::deterministic());
        let start = objective(&g, &c0).unwrap();
        let stop = StopCondition::time(Duration::from_millis(300)).with_stale(10);
        for (name, r) in run_all(&g, &c0, &stop, seed) {
            assert!(r.timeline.is_monotone(), "{name}");
            assert!(r.value() <= start + 1e-9, "{name}");
            assert!((objective(&g, r.coloring()).unwrap() - r.value()).abs() < 1e-9, "{name}");
        }
    }
}

#[test]
fn three_colorable_graphs_reach_zero() {
    // a bipartite grid and an odd cycle are both properly 3-colorable
    let mut edges = Vec::new();
    for r in 0..6 {
        for c in 0..6 {
            let v = 6 * r + c;
            if c < 5 {
                edges.push((v, v + 1, 1.0));
            }
            if r < 5 {
                edges.push((v, v + 6, 2.0));
            }
        }
    }
    let grid: Graph = WeightedGraph::from_edges(36, edges).unwrap();
    let odd: Graph = WeightedGraph::from_edges(11, (0..11).map(|i| (i, (i + 1) % 11, 1.0))).unwrap();
    for g in [grid, odd] {
        let c0 = Coloring::uniform(g.n(), 0);
        let stop = StopCondition::time(Duration::from_secs(2)).with_stale(50);
        for (name, r) in run_all(&g, &c0, &stop, 1) {
            assert_eq!(r.value(), 0.0, "{name}");
            assert!(r.solution.proven_optimal, "{name}");
        }
    }
}

#[test]
fn allmh_matches_exact_on_small_instances() {
    for seed in 0..5 {
        let g: Graph = gen_random(&GenSpec::random(18, 60, 40 + seed)).unwrap();
        let opt = branch_and_bound(&g, &FixedColors::new(), BnbBudget::UNLIMITED).unwrap().value;
        let c0 = greedy_construct(&g, &GreedySpec::deterministic());
        let r = all_mh(&g, &c0, &AllMhParams::default(), &StopCondition::iterations(3).logical(), seed).unwrap();
        assert!((r.value() - opt).abs() < 1e-9 * (1.0 + opt), "seed {seed}: {} vs {opt}", r.value());
    }
}

#[test]
fn allmh_head_to_head_is_logged() {
    let mut wins = 0;
    for seed in 0..10 {
        let g: Graph = gen_random(&GenSpec::random(30, 120, 2000 + seed)).unwrap();
        let c0 = greedy_construct(&g, &GreedySpec::deterministic());
        let stop = StopCondition::time(Duration::from_millis(200));
        let runs = run_all(&g, &c0, &stop, seed);
        let best_single = runs
            .iter()
            .filter(|(n, _)| *n != "allmh")
            .map(|(_, r)| r.value())
            .fold(f64::INFINITY, f64::min);
        let combined = runs.iter().find(|(n, _)| *n == "allmh").unwrap().1.value();
        if combined <= best_single + 1e-9 {
            wins += 1;
        }
    }
    println!("allmh at least as good as every single method on {wins}/10 instances");
}
