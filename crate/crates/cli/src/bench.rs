use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;
use swarmsim::generators::{gen_circuit, BenchSpec, Generator};
use swarmsim::{adaptive_sim, gate_by_gate_sim, swarm_optimize, InitialState, OptLevel, StateVector};

use crate::run::VERIFY_TOLERANCE;
use crate::{ConfigArgs, Failure};

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated generators (an empty string gives an empty table).
    #[arg(long, default_value = "qft,rzz_full,qaoa_full")]
    pub gen: String,
    /// Qubit counts: `8..14` (inclusive), `10` or `8,10,12`.
    #[arg(long, default_value = "8..12")]
    pub qubits: String,
    /// Comma-separated optimization levels.
    #[arg(long, default_value = "none,fusion,block,boost,diag,all")]
    pub opt: String,
    /// QAOA levels.
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gate count for the random generator.
    #[arg(long)]
    pub gates: Option<usize>,
    #[command(flatten)]
    pub sim: ConfigArgs,
    /// Check every row against gate-by-gate execution.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Table column label for an optimization level.
pub fn variant_label(level: &str) -> &'static str {
    match level {
        "none" => "Naive",
        "fusion" => "Naive_f",
        "block" => "Ours",
        "boost" => "Ours_b",
        "diag" => "Ours_f",
        "all" => "Ours_all",
        _ => "custom",
    }
}

#[derive(Debug, Default, Serialize)]
pub struct Row {
    pub generator: String,
    pub n: usize,
    pub opt: String,
    pub variant: String,
    pub gates: usize,
    pub blocks: usize,
    pub optimize_seconds: f64,
    pub simulate_seconds: f64,
    pub state_updates: u64,
    pub sweep_updates: u64,
    pub merge_updates: u64,
    pub reorder_moves: u64,
    pub sweep_total: u64,
    /// `KIND=count` pairs joined by `;`.
    pub histogram: String,
    pub max_deviation: Option<f64>,
    pub error: Option<String>,
}

pub fn parse_qubits(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::new(2, format!("bad qubit range `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        return Ok((num(a)?..=num(b)?).collect());
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect()
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn bench_row(spec: &BenchSpec, opt: &str, level: OptLevel, args: &BenchArgs, reference: &mut Option<StateVector>) -> Row {
    let mut row = Row {
        generator: spec.generator.name().to_string(),
        n: spec.n,
        opt: opt.to_string(),
        variant: variant_label(opt).to_string(),
        ..Row::default()
    };
    if let Err(e) = fill_row(&mut row, spec, level, args, reference) {
        row.error = Some(e.message);
    }
    row
}

fn fill_row(row: &mut Row, spec: &BenchSpec, level: OptLevel, args: &BenchArgs, reference: &mut Option<StateVector>) -> Result<(), Failure> {
    let circuit = gen_circuit(spec)?;
    let cfg = args.sim.config(spec.n)?;
    row.gates = circuit.len();
    let t0 = Instant::now();
    let plan = swarm_optimize(&circuit, &cfg, level)?;
    row.optimize_seconds = t0.elapsed().as_secs_f64();
    row.blocks = plan.blocks.len();
    let report = adaptive_sim(InitialState::Zero, &plan, &cfg)?;
    row.simulate_seconds = report.wall_time.total;
    let c = report.counters;
    row.state_updates = c.state_updates;
    row.sweep_updates = c.sweep_updates;
    row.merge_updates = c.merge_updates;
    row.reorder_moves = c.reorder_moves;
    row.sweep_total = c.sweep_total();
    row.histogram = report.histogram.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
    if args.verify {
        let got = report.final_state.ok_or_else(|| Failure::new(1, "final state not retained"))?;
        if reference.is_none() {
            let mut sv = StateVector::zero(spec.n);
            gate_by_gate_sim(&mut sv, &circuit)?;
            *reference = Some(sv);
        }
        let d = got.max_deviation(reference.as_ref().unwrap());
        row.max_deviation = Some(d);
        if d.is_nan() || d >= VERIFY_TOLERANCE {
            return Err(Failure::new(3, format!("max deviation {d:e}")));
        }
    }
    Ok(())
}

/// Runs the sweep row by row, in order.
pub fn sweep(args: &BenchArgs) -> Result<Vec<Row>, Failure> {
    let generators = split_list(&args.gen).map(|g| g.parse::<Generator>()).collect::<Result<Vec<_>, _>>()?;
    let levels = split_list(&args.opt)
        .map(|o| o.parse::<OptLevel>().map(|l| (o.to_string(), l)))
        .collect::<Result<Vec<_>, _>>()?;
    let qubits = parse_qubits(&args.qubits)?;
    let mut rows = Vec::new();
    for &g in &generators {
        for &n in &qubits {
            let mut spec = BenchSpec::new(g, n);
            spec.seed = args.seed;
            if let Some(p) = args.p {
                spec.p = p;
            }
            spec.gates = args.gates;
            let mut reference = None;
            for (name, level) in &levels {
                let row = bench_row(&spec, name, *level, args, &mut reference);
                log::info!("{} n={} {}: {:.3}s", row.generator, n, row.variant, row.simulate_seconds);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn write_csv(rows: &[Row], out: impl Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        // serialize() writes the header lazily, so emit it by hand.
        w.write_record(HEADER).map_err(|e| Failure::new(1, e.to_string()))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Failure::new(1, e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

const HEADER: [&str; 16] = [
    "generator",
    "n",
    "opt",
    "variant",
    "gates",
    "blocks",
    "optimize_seconds",
    "simulate_seconds",
    "state_updates",
    "sweep_updates",
    "merge_updates",
    "reorder_moves",
    "sweep_total",
    "histogram",
    "max_deviation",
    "error",
];

pub fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let rows = sweep(args)?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match args.format {
        Format::Csv => write_csv(&rows, &mut out)?,
        Format::Json => {
            let doc = serde_json::json!({ "schema": 1, "rows": rows });
            let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::new(1, e.to_string()))?;
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}
