//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line with the
//! measured numbers; run with `--nocapture` to see them. Tests take a shared
//! lock so the wall-clock budgets are not split between concurrent tests.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use rand::Rng;
use tricolor::decomposition::{
    heavy_edge_clusters, lower_bound, spectral_clusters, spectral_embedding, BoundConfig, ClusterPartition,
};
use tricolor::exact::{branch_and_bound, brute_force, BnbBudget, FixedColors};
use tricolor::instances::{gen_random, gen_udg, GenSpec};
use tricolor::local_search::{greedy_construct, vnd, GreedySpec};
use tricolor::metaheuristics::{
    all_mh, gls, hsa, ipi, vns, AllMhParams, GlsParams, HsaParams, IpiParams, RunResult, StopCondition, VnsParams,
};
use tricolor::objective::{objective, ColoringState};
use tricolor::rng::rng_from;
use tricolor::{Coloring, Graph, WeightedGraph};

static LOCK: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!("[{}] {id:02} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name} failed: {detail}");
}

/// Every run in this file goes through here: the timeline must be
/// non-increasing and end at the checked objective of the returned coloring.
fn checked(g: &Graph, r: RunResult<f64>) -> RunResult<f64> {
    assert!(r.timeline.is_monotone(), "timeline not monotone: {:?}", r.timeline);
    let last = r.timeline.last().expect("timeline has a point").objective;
    let obj = objective(g, r.coloring()).unwrap();
    assert!((last - obj).abs() <= 1e-9, "timeline ends at {last}, coloring has {obj}");
    assert!((r.value() - obj).abs() <= 1e-9);
    r
}

fn brute(g: &Graph) -> f64 {
    brute_force(g, &FixedColors::new()).unwrap().value
}

fn exact(g: &Graph) -> f64 {
    let r = branch_and_bound(g, &FixedColors::new(), BnbBudget::UNLIMITED).unwrap();
    assert!(r.proven_optimal);
    r.value
}

fn greedy_value(g: &Graph) -> f64 {
    objective(g, &greedy_construct(g, &GreedySpec::deterministic())).unwrap()
}

fn small_random(rng: &mut impl Rng, seed: u64) -> Graph {
    let n = rng.gen_range(4..=10);
    let m = rng.gen_range(0..=(n * (n - 1) / 2).min(20));
    gen_random(&GenSpec::random(n, m, seed)).unwrap()
}

fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = rng_from(seed);
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v, rng.gen::<f64>() * 100.0)).collect();
    WeightedGraph::from_edges(n, edges).unwrap()
}

fn cycle(n: usize) -> Graph {
    WeightedGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0 + i as f64))).unwrap()
}

fn mid_instances() -> Vec<Graph> {
    (0..20).map(|s| gen_random(&GenSpec::random(200, 2000, 500 + s)).unwrap()).collect()
}

fn n30_instances() -> Vec<Graph> {
    (0..10).map(|s| gen_random(&GenSpec::random(30, 120, 1000 + s)).unwrap()).collect()
}

#[test]
fn c01_branch_and_bound_matches_brute_force() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = rng_from(0xACCE);
    let mut worst = 0.0f64;
    let mut mismatches = 0;
    for seed in 0..200 {
        let g = small_random(&mut rng, seed);
        let b = brute(&g);
        let r = branch_and_bound(&g, &FixedColors::new(), BnbBudget::default()).unwrap();
        let diff = (r.value - b).abs();
        worst = worst.max(diff);
        if diff > 1e-9 || !r.proven_optimal {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "branch and bound equals brute force",
        mismatches == 0 && secs < 30.0,
        format!("200 instances, {mismatches} mismatches, max diff {worst:e}, {secs:.2} s"),
    );
}

#[test]
fn c02_known_optima() {
    let _g = serial();
    let mut bad = Vec::new();
    let k4: Graph = WeightedGraph::from_edges(4, (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0)))).unwrap();
    let r = branch_and_bound(&k4, &FixedColors::new(), BnbBudget::UNLIMITED).unwrap();
    if !(r.proven_optimal && (r.value - 1.0).abs() < 1e-12) {
        bad.push(format!("K4 gave {}", r.value));
    }
    for n in 3..=25 {
        let r = branch_and_bound(&cycle(n), &FixedColors::new(), BnbBudget::UNLIMITED).unwrap();
        if !(r.proven_optimal && r.value == 0.0) {
            bad.push(format!("C{n} gave {}", r.value));
        }
    }
    for seed in 0..30 {
        let n = 2 + (seed as usize * 7) % 60;
        let r = branch_and_bound(&random_tree(n, seed), &FixedColors::new(), BnbBudget::UNLIMITED).unwrap();
        if !(r.proven_optimal && r.value == 0.0) {
            bad.push(format!("tree n={n} gave {}", r.value));
        }
    }
    report(
        2,
        "known optima proven",
        bad.is_empty(),
        format!("K4, cycles C3..C25, 30 trees; failures {bad:?}"),
    );
}

#[test]
fn c03_lower_bounds_are_valid() {
    let _g = serial();
    let cfg = BoundConfig::default();
    let mut violations = Vec::new();
    let mut rng = rng_from(0xB0B);
    for seed in 0..50u64 {
        let n = rng.gen_range(4..=12);
        let m = rng.gen_range(0..=(n * (n - 1) / 2).min(3 * n));
        let g: Graph = gen_random(&GenSpec::random(n, m, 3000 + seed)).unwrap();
        let p = spectral_clusters(&g, 4, 100, seed).unwrap();
        let lb = lower_bound(&g, &p, &cfg).unwrap().value;
        let opt = brute(&g);
        if lb > opt + 1e-9 {
            violations.push(format!("small seed {seed}: {lb} > {opt}"));
        }
    }
    let mut gaps = Vec::new();
    for (i, g) in mid_instances().iter().enumerate() {
        let lb = lower_bound(g, &heavy_edge_clusters(g, 20).unwrap(), &cfg).unwrap().value;
        let lb2 = lower_bound(g, &spectral_clusters(g, 20, 100, i as u64).unwrap(), &cfg).unwrap().value;
        let c0 = greedy_construct(g, &GreedySpec::deterministic());
        let stop = StopCondition::iterations(20).logical();
        let mut best = objective(g, &vnd(g, c0.clone()).unwrap()).unwrap();
        best = best.min(checked(g, vns(g, &c0, &VnsParams::default(), &stop, i as u64).unwrap()).value());
        best = best.min(checked(g, hsa(g, &c0, &HsaParams::default(), &StopCondition::iterations(2), i as u64).unwrap()).value());
        if lb > best + 1e-9 || lb2 > best + 1e-9 {
            violations.push(format!("n=200 #{i}: lb {lb}, lb2 {lb2}, best {best}"));
        }
        gaps.push(best / lb.max(lb2));
    }
    let worst = gaps.iter().cloned().fold(0.0, f64::max);
    report(
        3,
        "lower bounds never exceed optimum or incumbent",
        violations.is_empty(),
        format!("50 small + 20 n=200 instances, {} violations, worst best/bound {worst:.3}", violations.len()),
    );
}

#[test]
fn c04_metaheuristics_near_optimal() {
    let _g = serial();
    let stop = StopCondition::time(Duration::from_secs(5)).with_stale(100);
    let names = ["hsa", "vns", "gls", "allmh"];
    let mut hits = [0usize; 4];
    let mut gaps = [0.0f64; 4];
    for (i, g) in n30_instances().iter().enumerate() {
        let opt = exact(g);
        let c0 = greedy_construct(g, &GreedySpec::deterministic());
        let seed = i as u64;
        let runs = [
            hsa(g, &c0, &HsaParams::default(), &stop, seed),
            vns(g, &c0, &VnsParams::default(), &stop, seed),
            gls(g, &GlsParams::default(), &stop, seed, &[]),
            all_mh(g, &c0, &AllMhParams::default(), &stop, seed),
        ];
        for (k, r) in runs.into_iter().enumerate() {
            let v = checked(g, r.unwrap()).value();
            let gap = if opt > 0.0 { (v - opt) / opt } else { v };
            gaps[k] = gaps[k].max(gap);
            if v <= opt * 1.005 + 1e-9 {
                hits[k] += 1;
            }
        }
    }
    let detail = names
        .iter()
        .zip(hits.iter().zip(&gaps))
        .map(|(n, (h, g))| format!("{n} {h}/10 (worst gap {:.3}%)", g * 100.0))
        .collect::<Vec<_>>()
        .join(", ");
    report(4, "within 0.5% of optimum at n=30", hits.iter().all(|&h| h >= 9), detail);
}

#[test]
fn c05_timelines_monotone_and_consistent() {
    let _g = serial();
    let mut graphs: Vec<Graph> = (0..4).map(|s| gen_random(&GenSpec::random(40, 160, 700 + s)).unwrap()).collect();
    graphs.push(gen_udg(&GenSpec::udg(60, 0.25, 3)).unwrap().0);
    graphs.push(cycle(9));
    graphs.push(WeightedGraph::empty(5));
    let mut count = 0;
    for (i, g) in graphs.iter().enumerate() {
        let c0 = greedy_construct(g, &GreedySpec::deterministic());
        let seed = i as u64;
        for stop in [StopCondition::iterations(10).logical(), StopCondition::time(Duration::from_millis(200)).with_stale(20)] {
            checked(g, hsa(g, &c0, &HsaParams::default(), &stop, seed).unwrap());
            checked(g, vns(g, &c0, &VnsParams::default(), &stop, seed).unwrap());
            checked(g, gls(g, &GlsParams::default(), &stop, seed, &[c0.clone()]).unwrap());
            checked(g, ipi(g, &c0, &IpiParams { max_sub: 8, ..IpiParams::default() }, &stop, seed).unwrap());
            checked(g, all_mh(g, &c0, &AllMhParams::default(), &stop, seed).unwrap());
            count += 5;
        }
    }
    // every other test routes its runs through the same check
    report(
        5,
        "timelines non-increasing and end at the checked objective",
        true,
        format!("{count} runs here plus every run elsewhere in the suite"),
    );
}

#[test]
fn c06_allmh_never_worse_than_greedy() {
    let _g = serial();
    let mut graphs: Vec<Graph> = Vec::new();
    let mut rng = rng_from(0xACCE);
    graphs.extend((0..200).map(|s| small_random(&mut rng, s)));
    graphs.extend(n30_instances());
    graphs.extend(mid_instances());
    graphs.push(gen_udg(&GenSpec::udg(200, 0.12, 1)).unwrap().0);
    graphs.push(random_tree(50, 2));
    let mut worse = 0;
    let stop = StopCondition::iterations(1).logical();
    for (i, g) in graphs.iter().enumerate() {
        let c0 = greedy_construct(g, &GreedySpec::deterministic());
        let r = checked(g, all_mh(g, &c0, &AllMhParams::default(), &stop, i as u64).unwrap());
        if r.value() > greedy_value(g) + 1e-9 {
            worse += 1;
        }
    }
    report(
        6,
        "allmh at most greedy",
        worse == 0,
        format!("{} instances, {worse} worse than greedy", graphs.len()),
    );
}

#[test]
fn c07_delta_evaluation_does_not_drift() {
    let _g = serial();
    let g: Graph = gen_random(&GenSpec::random(500, 5000, 77)).unwrap();
    let mut rng = rng_from(78);
    let c: Vec<u8> = (0..500).map(|_| rng.gen_range(0..3)).collect();
    let mut state = ColoringState::new(&g, Coloring::new(c).unwrap()).unwrap();
    let tol = 1e-6 * (1.0 + g.total_weight());
    let mut worst = 0.0f64;
    for i in 0..100_000 {
        let v = rng.gen_range(0..500);
        let k = rng.gen_range(0..3);
        state.apply(v, k);
        if i % 1000 == 999 {
            worst = worst.max((state.objective() - objective(&g, state.coloring()).unwrap()).abs());
        }
    }
    report(
        7,
        "cached objective tracks recomputation",
        worst <= tol,
        format!("1e5 moves on n=500, max drift {worst:e}, tolerance {tol:e}"),
    );
}

/// Dense `L_sym`, built here from the definition.
fn l_sym(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let d: Vec<f64> = (0..n).map(|v| g.weighted_degree(v)).collect();
    let mut l = vec![vec![0.0; n]; n];
    for v in 0..n {
        if d[v] > 0.0 {
            l[v][v] = 1.0;
        }
    }
    for e in g.edges() {
        let x = e.weight / (d[e.u] * d[e.v]).sqrt();
        l[e.u][e.v] -= x;
        l[e.v][e.u] -= x;
    }
    l
}

fn check_partition(p: &ClusterPartition, n: usize, q: usize) -> bool {
    let mut seen = vec![false; n];
    for c in p.clusters() {
        if c.is_empty() || c.len() > q {
            return false;
        }
        for &v in c {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

#[test]
fn c08_spectral_machinery() {
    let _g = serial();
    let mut problems = Vec::new();
    let mut max_res = 0.0f64;
    for s in 0..20u64 {
        let n = 15 + 15 * s as usize;
        let g: Graph = gen_random(&GenSpec::random(n, 4 * n, 900 + s)).unwrap();
        let k = n.div_ceil(20).max(2);
        let emb = spectral_embedding(&g, k, 1e-8).unwrap();
        let l = l_sym(&g);
        if emb.eigenvalues.iter().any(|&x| !(-1e-8..=2.0 + 1e-8).contains(&x)) {
            problems.push(format!("n={n}: eigenvalue out of range"));
        }
        if emb.eigenvalues[0].abs() > 1e-8 {
            problems.push(format!("n={n}: smallest eigenvalue {}", emb.eigenvalues[0]));
        }
        for j in 0..k {
            let u = emb.u.column(j);
            let res: f64 = (0..n)
                .map(|i| {
                    let lu: f64 = (0..n).map(|t| l[i][t] * u[t]).sum();
                    (lu - emb.eigenvalues[j] * u[i]).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            max_res = max_res.max(res);
            if res > 1e-8 {
                problems.push(format!("n={n}: residual {res:e} for pair {j}"));
            }
        }
        for q in [5, 20] {
            let p = spectral_clusters(&g, q, 100, s).unwrap();
            if !check_partition(&p, n, q) {
                problems.push(format!("n={n}: bad partition for q={q}"));
            }
        }
    }
    let triangles = WeightedGraph::from_edges(
        6,
        [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)],
    )
    .unwrap();
    let p = spectral_clusters(&triangles, 3, 100, 0).unwrap();
    if p.clusters() != [vec![0, 1, 2], vec![3, 4, 5]] {
        problems.push(format!("triangles split as {:?}", p.clusters()));
    }
    report(
        8,
        "spectral embedding and clustering",
        problems.is_empty(),
        format!("20 graphs n=15..300, max residual {max_res:e}; problems {problems:?}"),
    );
}

#[test]
fn c09_generator_fidelity() {
    let _g = serial();
    let g: Graph = gen_random(&GenSpec::random(1000, 10000, 1)).unwrap();
    let mean = g.total_weight() / g.m() as f64;
    let (u, _) = gen_udg::<f64>(&GenSpec::udg(1000, 0.08, 1)).unwrap();
    let m_udg = u.m() as f64;
    let ok = g.m() == 10000 && (48.0..=52.0).contains(&mean) && (m_udg - 9326.0).abs() <= 932.6;
    report(
        9,
        "generator fidelity",
        ok,
        format!("random m={} mean weight {mean:.3}; udg m={}", g.m(), u.m()),
    );
}

#[test]
fn c10_ipi_whole_graph_is_exact() {
    let _g = serial();
    let mut rng = rng_from(0x1F1);
    let mut bad = 0;
    for seed in 0..50 {
        let g = small_random(&mut rng, 4000 + seed);
        let p = IpiParams { max_sub: g.n(), ..IpiParams::default() };
        let c0 = greedy_construct(&g, &GreedySpec::deterministic());
        let r = checked(&g, ipi(&g, &c0, &p, &StopCondition::iterations(1), seed).unwrap());
        if !r.solution.proven_optimal || (r.value() - brute(&g)).abs() > 1e-9 {
            bad += 1;
        }
    }
    report(10, "one ipi round with max_sub >= n is optimal", bad == 0, format!("50 instances, {bad} failures"));
}

fn tricolor_cmd(dir: &Path, args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_tricolor"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn c11_cli_reproducible_in_deterministic_mode() {
    let _g = serial();
    let config = r#"
        algorithms = ["greedy", "vnd", "hsa", "vns", "gls", "ipi", "allmh"]
        repetitions = 2
        iteration_limit = 4
        stale_limit = 2
        time_limit = 0.001
        deterministic = true
        seed = 11
        output = "out"
        instances = ["g.txt"]

        [[generate]]
        family = "udg"
        n = 40
        r = 0.3
        seed = 5
    "#;
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path();
            let mut stdout = tricolor_cmd(p, &["generate", "--family", "random", "--n", "30", "--m", "90", "--seed", "3", "--out", "g.txt"]);
            fs::write(p.join("e.toml"), config).unwrap();
            stdout += &tricolor_cmd(p, &["experiment", "--config", "e.toml"]);
            stdout += &tricolor_cmd(p, &["lb", "--method", "spectral", "--q", "8", "--seed", "2", "g.txt"]);
            stdout += &tricolor_cmd(
                p,
                &["solve", "--algo", "allmh", "--iterations", "3", "--deterministic", "--seed", "9", "g.txt", "--out", "c.txt", "--timeline", "t.csv"],
            );
            let mut files = dir_files(p);
            files.extend(dir_files(&p.join("out")));
            files.extend(dir_files(&p.join("out/timelines")));
            (stdout, files, dir)
        })
        .collect();
    let files = runs[0].1.len();
    let identical = runs[0].0 == runs[1].0 && runs[0].1 == runs[1].1;
    let timelines = runs[0].1.iter().filter(|(n, _)| n.ends_with(".csv") && n != "summary.csv" && n != "runs.csv").count();
    report(
        11,
        "deterministic cli output is byte-identical",
        identical && timelines == 2 * 7 * 2 + 1,
        format!("{files} files compared ({timelines} timelines), identical: {identical}"),
    );
}
