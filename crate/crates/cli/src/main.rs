//! `swarmsim` command-line tool.

mod bench;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swarmsim::generators::{gen_circuit, BenchSpec};
use swarmsim::{emit_qasm, Error, SimConfig};

#[derive(Parser)]
#[command(name = "swarmsim", version, about = "State-vector simulation with plan-level optimization")]
struct Cli {
    /// Worker threads for the kernel pool (0 = rayon default).
    #[arg(long, global = true, env = "SWARMSIM_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize and simulate one circuit, printing a JSON report.
    Run(run::RunArgs),
    /// Sweep generators, sizes and optimization levels into a table.
    Bench(bench::BenchArgs),
    /// Write a generated circuit as OpenQASM 2.0.
    Gen(GenArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Generator spec, e.g. `qft:10` or `qaoa_full:8:p=2:seed=3`.
    spec: String,
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Simulator parameters shared by `run` and `bench`. Unset values take the
/// library defaults clamped to the circuit width.
#[derive(Args, Clone, Debug)]
pub struct ConfigArgs {
    /// Qubits per cache chunk (C).
    #[arg(long = "qubits-per-chunk")]
    pub chunk: Option<usize>,
    /// Max width of a fused unitary (F).
    #[arg(long)]
    pub fuse_cap: Option<usize>,
    /// Max width of a fused diagonal (D).
    #[arg(long)]
    pub diag_cap: Option<usize>,
    /// Booster division parameter (B).
    #[arg(long)]
    pub boost_div: Option<usize>,
    /// Rank qubits (R) used for plan partitioning.
    #[arg(long)]
    pub rank_qubits: Option<usize>,
}

impl ConfigArgs {
    pub fn config(&self, n: usize) -> Result<SimConfig, Error> {
        let mut cfg = SimConfig::new(n);
        if let Some(c) = self.chunk {
            cfg.chunk_qubits = c;
            cfg.fuse_cap = cfg.fuse_cap.min(c.max(1));
        }
        if let Some(f) = self.fuse_cap {
            cfg.fuse_cap = f;
        }
        if let Some(d) = self.diag_cap {
            cfg.diag_cap = d;
        }
        if let Some(b) = self.boost_div {
            cfg.boost_div = b;
        }
        if let Some(r) = self.rank_qubits {
            cfg.rank_qubits = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Failure carrying the process exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_) | Error::UnknownGenerator(_) => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(1, e.to_string())
    }
}

pub fn parse_spec(s: &str) -> Result<BenchSpec, Failure> {
    s.parse::<BenchSpec>().map_err(Failure::from)
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    let spec = parse_spec(&args.spec)?;
    let text = emit_qasm(&gen_circuit(&spec)?)?;
    match &args.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Run(a) => run::cmd_run(a),
        Command::Bench(a) => bench::cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
