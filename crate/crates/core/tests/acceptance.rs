//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::seq::SliceRandom;
use rand::Rng;
use swarmsim::generators::{gen_circuit, random_circuit, BenchSpec, Generator};
use swarmsim::kernel::reorder_register;
use swarmsim::matrix::unitary_check;
use swarmsim::optimizer::divider;
use swarmsim::*;

const TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run_plan(plan: &Plan, cfg: &SimConfig) -> RunReport {
    adaptive_sim(InitialState::Zero, plan, cfg).expect("plan runs")
}

fn update_counts() -> Outcome {
    let start = Instant::now();
    let c = boost_fixture();
    let cfg = SimConfig::new(8);
    let naive = run_plan(&Plan::naive(&c), &cfg).counters;
    let boosted = run_plan(&swarm_optimize(&c, &cfg, OptLevel::BOOST).unwrap(), &cfg).counters;
    let elapsed = start.elapsed();
    let pass = naive.sweep_total() == 10_240
        && boosted.sweep_total() == 1_336
        && boosted.sweep_updates == 1_048
        && boosted.merge_updates == 288
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "naive={} boosted={} (state {} + merge {}) in {:.3}s",
            naive.sweep_total(),
            boosted.sweep_total(),
            boosted.sweep_updates,
            boosted.merge_updates,
            elapsed.as_secs_f64()
        ),
    )
}

const VARIANTS: [OptLevel; 5] = [OptLevel::FUSION, OptLevel::BLOCK, OptLevel::BOOST, OptLevel::DIAG, OptLevel::ALL];

/// The seeded random suite shared by criteria 2, 4 and 7.
fn random_suite() -> Vec<Circuit> {
    let mut r = rng(2024);
    (0..200u64)
        .map(|seed| {
            let n = r.gen_range(2..=14);
            let g = r.gen_range(1..=500);
            random_circuit(n, g, seed, true).unwrap()
        })
        .collect()
}

/// A smaller chunk than the default so that blocking, reorders and chunked
/// traversal are exercised at these sizes.
fn suite_config(n: usize) -> SimConfig {
    let mut cfg = SimConfig::new(n);
    cfg.chunk_qubits = (n / 2 + 1).max(3).min(n);
    cfg.fuse_cap = cfg.fuse_cap.min(cfg.chunk_qubits);
    cfg
}

fn oracle_equivalence(suite: &[Circuit]) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut runs = 0;
    for c in suite {
        let want = reference(c);
        let cfg = suite_config(c.n());
        for level in VARIANTS {
            let plan = swarm_optimize(c, &cfg, level).unwrap();
            let got = run_plan(&plan, &cfg).final_state.unwrap();
            worst = worst.max(got.max_deviation(&want));
            runs += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = worst < TOL && elapsed < Duration::from_secs(300);
    outcome(pass, format!("{} circuits x {} variants = {runs} runs, max deviation {worst:.2e}, {:.1}s", suite.len(), VARIANTS.len(), elapsed.as_secs_f64()))
}

fn detector_grouping() -> Outcome {
    let c = detector_fixture();
    let cfg = SimConfig::new(5);
    let level = OptLevel { blocking: false, fusion: false, boost: false, diag: true };
    let plan = swarm_optimize(&c, &cfg, level).unwrap();
    let blocks: Vec<(BlockKind, Vec<Vec<usize>>)> = plan
        .blocks
        .iter()
        .map(|b| (b.kind(), b.gates().iter().map(|g| g.sources.clone()).collect()))
        .collect();
    let want = vec![
        (BlockKind::Standard, vec![vec![0], vec![9]]),
        (BlockKind::FusedDiagonal, vec![vec![1, 4, 5, 7, 8]]),
        (BlockKind::Standard, vec![vec![2], vec![3], vec![6], vec![10]]),
    ];
    let dev = run_plan(&plan, &cfg).final_state.unwrap().max_deviation(&reference(&c));
    let pass = blocks == want && dev < TOL;
    outcome(pass, format!("plan {blocks:?}, deviation {dev:.1e}"))
}

fn booster_dominance(suite: &[Circuit]) -> Outcome {
    let mut dominated = 0;
    for c in suite {
        let cfg = suite_config(c.n());
        let naive = Plan::naive(c).sweep_cost().unwrap();
        let boosted = swarm_optimize(c, &cfg, OptLevel::BOOST).unwrap().sweep_cost().unwrap();
        if boosted <= naive {
            dominated += 1;
        }
    }
    let mut ratios = Vec::new();
    let mut families_ok = true;
    for g in [Generator::RzzFull, Generator::Ghz] {
        for n in [10, 12, 14] {
            let c = gen_circuit(&BenchSpec::new(g, n)).unwrap();
            let cfg = SimConfig::new(n);
            let naive = run_plan(&Plan::naive(&c), &cfg).counters.sweep_total();
            let all = run_plan(&swarm_optimize(&c, &cfg, OptLevel::ALL).unwrap(), &cfg).counters.sweep_total();
            let boost = run_plan(&swarm_optimize(&c, &cfg, OptLevel::BOOST).unwrap(), &cfg).counters.sweep_total();
            let r = all as f64 / naive as f64;
            families_ok &= r < 0.5;
            ratios.push(format!("{}:{n} all={r:.3} boost={:.3}", g.name(), boost as f64 / naive as f64));
        }
    }
    let pass = dominated == suite.len() && families_ok;
    outcome(pass, format!("boost<=naive {dominated}/{}; {}", suite.len(), ratios.join(", ")))
}

fn timed_run(c: &Circuit, level: OptLevel) -> (f64, StateVector) {
    let cfg = SimConfig::new(c.n());
    let start = Instant::now();
    let plan = swarm_optimize(c, &cfg, level).unwrap();
    let rep = run_plan(&plan, &cfg);
    (start.elapsed().as_secs_f64(), rep.final_state.unwrap())
}

fn desk_speedup() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    pool.install(|| {
        let mut pass = true;
        let mut notes = Vec::new();
        for g in [Generator::Qft, Generator::RzzFull] {
            let c = gen_circuit(&BenchSpec::new(g, 22)).unwrap();
            let (t_none, a) = timed_run(&c, OptLevel::NONE);
            let (t_all, b) = timed_run(&c, OptLevel::ALL);
            let dev = a.max_deviation(&b);
            let r = t_all / t_none;
            pass &= r <= 0.5 && dev < TOL;
            notes.push(format!("{}:22 none={t_none:.2}s all={t_all:.2}s ratio={r:.3}", g.name()));
        }
        outcome(pass, format!("4 threads on {cores} core(s); {}", notes.join(", ")))
    })
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

fn optimizer_scaling() -> Outcome {
    let cfg = SimConfig::new(20);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..7 {
        let g = 1000usize << k;
        let c = random_circuit(20, g, k as u64, true).unwrap();
        let best = (0..3)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(swarm_optimize(&c, &cfg, OptLevel::ALL).unwrap());
                t.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min);
        xs.push(g as f64);
        ys.push(best);
    }
    let slope = loglog_slope(&xs, &ys);
    let times: Vec<String> = xs.iter().zip(&ys).map(|(g, t)| format!("{g}:{:.1}ms", t * 1e3)).collect();
    outcome(slope <= 1.3, format!("exponent {slope:.3} over {}", times.join(" ")))
}

fn invariants(suite: &[Circuit]) -> Outcome {
    let mut worst_norm = 0.0f64;
    let mut non_unitary = 0;
    for c in suite.iter().step_by(2) {
        let cfg = suite_config(c.n());
        for level in VARIANTS {
            let plan = swarm_optimize(c, &cfg, level).unwrap();
            for g in plan.gates().filter(|g| g.is_fused()) {
                if !unitary_check(&g.gate.target_matrix()).unwrap() {
                    non_unitary += 1;
                }
            }
            worst_norm = worst_norm.max((run_plan(&plan, &cfg).norm - 1.0).abs());
        }
    }
    let mut r = rng(7);
    let mut round_trip_ok = true;
    for n in 1..=12 {
        let amps = random_state(n, &mut r);
        let mut reg = SubStateVector::new((0..n).collect(), amps.clone()).unwrap();
        let mut layout: Vec<usize> = (0..n).collect();
        layout.shuffle(&mut r);
        let mut counter = UpdateCounter::default();
        reorder_register(&mut reg, &layout, &mut counter).unwrap();
        reorder_register(&mut reg, &(0..n).collect::<Vec<_>>(), &mut counter).unwrap();
        round_trip_ok &= reg.amps() == amps.as_slice();
    }
    let pass = worst_norm < TOL && non_unitary == 0 && round_trip_ok;
    outcome(pass, format!("max |norm-1| {worst_norm:.1e}, non-unitary fused gates {non_unitary}, reorder round-trip exact: {round_trip_ok}"))
}

/// Halving recursion written with an explicit stack.
fn divider_trace(n: usize, div: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m <= div {
            out.push(m);
        } else {
            stack.push(m - m / 2);
            stack.push(m / 2);
        }
    }
    out
}

fn divider_traces() -> Outcome {
    let a = divider(8, 2);
    let b = divider(4, 4);
    let c = divider(5, 2);
    let pass = a == [2, 2, 2, 2]
        && b == [4]
        && c.iter().sum::<usize>() == 5
        && [(8, 2), (4, 4), (5, 2)].iter().all(|&(n, d)| divider(n, d) == divider_trace(n, d));
    outcome(pass, format!("divider(8,2)={a:?} divider(4,4)={b:?} divider(5,2)={c:?}"))
}

fn main() {
    let suite = random_suite();
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 update-count reproduction", Box::new(update_counts)),
        ("2 oracle equivalence", Box::new(|| oracle_equivalence(&suite))),
        ("3 diagonal-detector grouping", Box::new(detector_grouping)),
        ("4 booster dominance", Box::new(|| booster_dominance(&suite))),
        ("5 desk-scale speedup", Box::new(desk_speedup)),
        ("6 optimizer scaling", Box::new(optimizer_scaling)),
        ("7 invariants", Box::new(|| invariants(&suite))),
        ("8 divider traces", Box::new(divider_traces)),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
