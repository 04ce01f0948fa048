use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use serde::Serialize;
use swarmsim::generators::gen_circuit;
use swarmsim::{adaptive_sim, gate_by_gate_sim, parse_qasm, swarm_optimize, Circuit, Error, InitialState, OptLevel, RunReport, StateVector};

use crate::{parse_spec, ConfigArgs, Failure};

/// Verification bound on the largest amplitude deviation.
pub const VERIFY_TOLERANCE: f64 = 1e-10;

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true))]
pub struct RunArgs {
    /// OpenQASM 2.0 input file.
    #[arg(long, group = "input")]
    pub qasm: Option<PathBuf>,
    /// Generator spec, e.g. `qft:10`.
    #[arg(long, group = "input")]
    pub gen: Option<String>,
    /// Optimization level: none, fusion, block, boost, diag or all.
    #[arg(long, default_value = "all")]
    pub opt: OptLevel,
    #[command(flatten)]
    pub sim: ConfigArgs,
    /// Product initial state, one token per qubit from `01+-rl`, qubit 0 first.
    #[arg(long)]
    pub product_state: Option<String>,
    /// Compare against gate-by-gate execution; exit 3 if the deviation is
    /// 1e-10 or more.
    #[arg(long)]
    pub verify: bool,
    /// Write the plan in text form.
    #[arg(long)]
    pub emit_plan: Option<PathBuf>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write all final amplitudes as CSV (`index,re,im`).
    #[arg(long)]
    pub dump_amplitudes: Option<PathBuf>,
}

#[derive(Serialize)]
struct CliReport<'a> {
    source: String,
    opt: String,
    optimize_seconds: f64,
    #[serde(flatten)]
    run: &'a RunReport,
}

pub fn load_circuit(qasm: Option<&Path>, gen: Option<&str>) -> Result<(Circuit, String), Failure> {
    match (qasm, gen) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
            match parse_qasm(&text) {
                Ok(c) => Ok((c, path.display().to_string())),
                Err(Error::Parse(d)) => Err(Failure::new(2, format!("{}:{d}", path.display()))),
                Err(e) => Err(e.into()),
            }
        }
        (None, Some(spec)) => {
            let spec = parse_spec(spec)?;
            Ok((gen_circuit(&spec)?, spec.to_string()))
        }
        (None, None) => Err(Failure::new(2, "one of --qasm or --gen is required")),
    }
}

pub fn write_amplitudes(path: &Path, state: &StateVector) -> Result<(), Failure> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Failure::new(1, e.to_string()))?;
    w.write_record(["index", "re", "im"]).map_err(|e| Failure::new(1, e.to_string()))?;
    for (i, a) in state.amps().iter().enumerate() {
        w.serialize((i, a.re, a.im)).map_err(|e| Failure::new(1, e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let (circuit, source) = load_circuit(args.qasm.as_deref(), args.gen.as_deref())?;
    let n = circuit.n();
    let cfg = args.sim.config(n)?;
    let init = match &args.product_state {
        Some(tokens) => InitialState::parse_product(tokens)?,
        None => InitialState::Zero,
    };

    let t0 = Instant::now();
    let plan = swarm_optimize(&circuit, &cfg, args.opt)?;
    let optimize_seconds = t0.elapsed().as_secs_f64();
    log::info!("{} gates -> {} blocks in {optimize_seconds:.3}s", circuit.len(), plan.blocks.len());
    if let Some(path) = &args.emit_plan {
        std::fs::write(path, plan.to_text())?;
    }

    let mut report = adaptive_sim(init.clone(), &plan, &cfg)?;
    if args.verify {
        let got = report
            .final_state
            .as_ref()
            .ok_or_else(|| Failure::new(1, format!("--verify keeps the final state, which is not retained at n = {n}")))?;
        let mut want = init.to_state(n)?;
        gate_by_gate_sim(&mut want, &circuit)?;
        report.max_deviation = Some(got.max_deviation(&want));
    }
    if let Some(path) = &args.dump_amplitudes {
        let state = report
            .final_state
            .as_ref()
            .ok_or_else(|| Failure::new(1, format!("final amplitudes are not retained at n = {n}")))?;
        write_amplitudes(path, state)?;
        report.amplitude_dump = Some(path.display().to_string());
    }

    let out = CliReport { source, opt: args.opt.to_string(), optimize_seconds, run: &report };
    let json = serde_json::to_string_pretty(&out).map_err(|e| Failure::new(1, e.to_string()))?;
    if let Some(path) = &args.report {
        std::fs::write(path, &json)?;
    }
    println!("{json}");

    match report.max_deviation {
        Some(d) if d.is_nan() || d >= VERIFY_TOLERANCE => {
            Err(Failure::new(3, format!("verification failed: max deviation {d:e}")))
        }
        _ => Ok(()),
    }
}
