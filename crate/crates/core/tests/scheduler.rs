mod common;

use common::*;
use swarmsim::generators::{gen_circuit, random_circuit};
use swarmsim::kernel::apply_gate;
use swarmsim::scheduler::{adaptive_sim_with, ExtensionRegistry};
use swarmsim::*;

fn run(c: &Circuit, level: OptLevel) -> (Plan, RunReport) {
    let cfg = SimConfig::new(c.n());
    let plan = swarm_optimize(c, &cfg, level).unwrap();
    let rep = adaptive_sim(InitialState::Zero, &plan, &cfg).unwrap();
    (plan, rep)
}

#[test]
fn empty_plan_leaves_zero_state() {
    let c = Circuit::new(4);
    for (_, level) in OptLevel::PRESETS {
        let (plan, rep) = run(&c, level);
        assert!(plan.blocks.iter().all(|b| b.gates().is_empty()));
        assert_eq!(rep.counters.total(), 0);
        assert!(rep.final_state.unwrap().max_deviation(&StateVector::zero(4)) < 1e-15);
    }
}

#[test]
fn qft12_all_uses_reorders_and_fused_blocks() {
    let c = gen_circuit(&"qft:12".parse().unwrap()).unwrap();
    let mut cfg = SimConfig::new(12);
    cfg.chunk_qubits = 7;
    let plan = swarm_optimize(&c, &cfg, OptLevel::ALL).unwrap();
    let rep = adaptive_sim(InitialState::Zero, &plan, &cfg).unwrap();
    assert!(rep.histogram.get("REORDER").copied().unwrap_or(0) > 0);
    assert!(rep.histogram.get("FUSED_UNITARY").copied().unwrap_or(0) > 0);
    let sv = rep.final_state.unwrap();
    assert!(sv.max_deviation(&reference(&c)) < 1e-10);
    // QFT of |0> is the uniform superposition.
    let u = 1.0 / (4096f64).sqrt();
    assert!(sv.amps().iter().all(|a| (a - c64(u, 0.0)).norm() < 1e-10));
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn boosted_rzz_full_beats_gate_by_gate() {
    // H on every qubit first so the RZZ layer acts on a non-trivial state.
    let mut c = Circuit::new(12);
    for q in 0..12 {
        c.push(Gate::h(q)).unwrap();
    }
    for g in gen_circuit(&"rzz_full:12".parse().unwrap()).unwrap().gates() {
        c.push(g.clone()).unwrap();
    }
    let (_, naive) = run(&c, OptLevel::NONE);
    let (plan, boosted) = run(&c, OptLevel::BOOST);
    assert!(plan.count(BlockKind::TensorMerge) > 0);
    let ratio = naive.counters.sweep_total() as f64 / boosted.counters.sweep_total() as f64;
    assert!(ratio >= 1.5, "ratio {ratio}");
    let (_, all) = run(&c, OptLevel::ALL);
    let ratio_all = naive.counters.sweep_total() as f64 / all.counters.sweep_total() as f64;
    assert!(ratio_all >= 5.0, "ratio {ratio_all}");
    let want = reference(&c);
    assert!(boosted.final_state.unwrap().max_deviation(&want) < 1e-10);
    assert!(all.final_state.unwrap().max_deviation(&want) < 1e-10);
}

#[test]
fn bell_state() {
    let c = Circuit::from_gates(2, [Gate::h(0), Gate::cx(0, 1)]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (_, level) in OptLevel::PRESETS {
        let (_, rep) = run(&c, level);
        let a = rep.final_state.unwrap();
        let want = [c64(h, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(h, 0.0)];
        assert!(a.amps().iter().zip(want).all(|(x, y)| (x - y).norm() < 1e-12));
    }
}

fn inverse(g: &Gate, n: usize) -> Gate {
    let support = g.support();
    let m = restrict(&expand(g, n), &support);
    Gate::unitary(support, m.adjoint()).unwrap()
}

#[test]
fn self_inverse_circuit_returns_to_start() {
    let fwd = random_circuit(9, 80, 17, false).unwrap();
    let mut c = fwd.clone();
    for g in fwd.gates().iter().rev() {
        c.push(inverse(g, 9)).unwrap();
    }
    for (_, level) in OptLevel::PRESETS {
        let (_, rep) = run(&c, level);
        assert!(rep.final_state.unwrap().max_deviation(&StateVector::zero(9)) < 1e-10);
    }
}

#[test]
fn deep_random_circuit_keeps_norm() {
    let c = random_circuit(14, 200, 99, true).unwrap();
    let (_, rep) = run(&c, OptLevel::ALL);
    assert!((rep.norm - 1.0).abs() < 1e-10);
    assert!(rep.final_state.unwrap().max_deviation(&reference(&c)) < 1e-10);
}

#[test]
fn extension_blocks_dispatch_to_hooks() {
    let gates = vec![PlanGate::new(Gate::x(1), 0)];
    let plan = Plan {
        n: 2,
        registers: vec![vec![0, 1]],
        blocks: vec![GateBlock {
            register: 0,
            qubits: vec![1],
            op: BlockOp::Extension { name: "flip".into(), gates },
            rank_segment: 0,
        }],
    };
    let cfg = SimConfig::new(2);
    let mut ext = ExtensionRegistry::new();
    ext.register(
        "flip",
        Box::new(|reg, gates, counter| gates.iter().try_for_each(|g| apply_gate(reg, g, counter))),
    );
    let rep = adaptive_sim_with(InitialState::Zero, &plan, &cfg, &ext).unwrap();
    assert!(rep.final_state.unwrap().max_deviation(&StateVector::basis(2, 2)) < 1e-15);
    assert_eq!(rep.histogram["EXTENSION"], 1);
    assert!(matches!(adaptive_sim(InitialState::Zero, &plan, &cfg), Err(Error::UnknownExtension(_))));
}

#[test]
fn product_initial_state() {
    let c = random_circuit(8, 60, 4, false).unwrap();
    let init = InitialState::parse_product("+-01rl+0").unwrap();
    let mut want = init.to_state(8).unwrap();
    gate_by_gate_sim(&mut want, &c).unwrap();
    for (_, level) in OptLevel::PRESETS {
        let cfg = SimConfig::new(8);
        let plan = swarm_optimize(&c, &cfg, level).unwrap();
        let rep = adaptive_sim(init.clone(), &plan, &cfg).unwrap();
        assert!(rep.final_state.unwrap().max_deviation(&want) < 1e-10, "{level}");
    }
    assert!(InitialState::parse_product("0x").is_err());
}

#[test]
fn product_tokens_match_dense_oracle() {
    let init = InitialState::parse_product("1+").unwrap().to_state(2).unwrap();
    // qubit 0 = |1>, qubit 1 = |+>: amplitude on indices 1 and 3.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let want = [c64(0.0, 0.0), c64(h, 0.0), c64(0.0, 0.0), c64(h, 0.0)];
    assert!(init.amps().iter().zip(want).all(|(x, y)| (x - y).norm() < 1e-15));
}

#[test]
fn full_state_rejected_for_split_plan() {
    let c = gen_circuit(&"ghz:8".parse().unwrap()).unwrap();
    let cfg = SimConfig::new(8);
    let plan = swarm_optimize(&c, &cfg, OptLevel::BOOST).unwrap();
    assert!(plan.registers.len() > 1);
    let init = InitialState::Full(StateVector::zero(8));
    assert!(matches!(adaptive_sim(init, &plan, &cfg), Err(Error::Plan(_))));
}

#[test]
fn full_state_runs_on_single_register_plan() {
    let mut r = rng(8);
    let c = random_circuit(7, 90, 8, true).unwrap();
    let init = random_state(7, &mut r);
    let cfg = SimConfig::new(7);
    let plan = swarm_optimize(&c, &cfg, OptLevel::DIAG).unwrap();
    let sv = StateVector::from_amplitudes(init.clone()).unwrap();
    let rep = adaptive_sim(InitialState::Full(sv), &plan, &cfg).unwrap();
    let want = dense_run(&c, &init);
    assert!(max_diff(rep.final_state.unwrap().amps(), &want) < 1e-10);
}

#[test]
fn runs_are_deterministic() {
    let c = random_circuit(12, 300, 5, true).unwrap();
    let (_, a) = run(&c, OptLevel::ALL);
    let (_, b) = run(&c, OptLevel::ALL);
    assert_eq!(a.final_state.unwrap().amps(), b.final_state.unwrap().amps());
    assert_eq!(a.counters, b.counters);
}

#[test]
fn per_kind_counters_sum_to_total() {
    let c = random_circuit(12, 300, 6, true).unwrap();
    let mut cfg = SimConfig::new(12);
    cfg.chunk_qubits = 6;
    let plan = swarm_optimize(&c, &cfg, OptLevel::ALL).unwrap();
    let rep = adaptive_sim(InitialState::Zero, &plan, &cfg).unwrap();
    let sum: u64 = rep.counters_by_kind.values().map(|k| k.total()).sum();
    assert_eq!(sum, rep.counters.total());
    let sweep: u64 = rep.counters_by_kind.values().map(|k| k.sweep_total()).sum();
    assert_eq!(sweep, rep.counters.sweep_total());
    assert_eq!(rep.counters.sweep_total(), plan.sweep_cost().unwrap());
    let blocks: usize = rep.histogram.values().sum();
    assert_eq!(blocks, plan.blocks.len());
}

#[test]
fn report_serialises_to_json() {
    let c = gen_circuit(&"ghz:6".parse().unwrap()).unwrap();
    let (_, rep) = run(&c, OptLevel::ALL);
    let v = serde_json::to_value(&rep).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["n"], 6);
    assert!(v["counters"]["state_updates"].is_u64());
    assert!(v["wall_time"]["total"].is_f64());
    assert_eq!(v["leading_amplitudes"].as_array().unwrap().len(), 8);
    assert!(v.get("final_state").is_none());
    assert!(v.get("max_deviation").is_none());
}

#[test]
fn mismatched_config_is_rejected() {
    let c = Circuit::from_gates(3, [Gate::h(0)]).unwrap();
    let plan = Plan::naive(&c);
    assert!(adaptive_sim(InitialState::Zero, &plan, &SimConfig::new(4)).is_err());
    let short = InitialState::parse_product("00").unwrap();
    assert!(adaptive_sim(short, &plan, &SimConfig::new(3)).is_err());
}
