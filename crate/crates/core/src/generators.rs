//! Deterministic benchmark circuit generators.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::gate::{Gate, GateKind};
use crate::matrix::random_unitary;
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Qft,
    QaoaFull,
    RzzFull,
    Ghz,
    Bv,
    HiddenShift,
    Random,
}

impl Generator {
    pub const ALL: [Generator; 7] = [
        Generator::Qft,
        Generator::QaoaFull,
        Generator::RzzFull,
        Generator::Ghz,
        Generator::Bv,
        Generator::HiddenShift,
        Generator::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Qft => "qft",
            Generator::QaoaFull => "qaoa_full",
            Generator::RzzFull => "rzz_full",
            Generator::Ghz => "ghz",
            Generator::Bv => "bv",
            Generator::HiddenShift => "hidden_shift",
            Generator::Random => "random",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Generator> {
        Generator::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| Error::UnknownGenerator(s.into()))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const DEFAULT_QAOA_LEVELS: usize = 5;

/// Generator plus size and parameters. Text form:
/// `name:n[:p=L][:seed=S][:gates=G]`, e.g. `qaoa_full:10:p=5`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchSpec {
    pub generator: Generator,
    pub n: usize,
    /// QAOA levels.
    pub p: usize,
    pub seed: u64,
    /// Gate count for `random`; `10·n` when unset.
    pub gates: Option<usize>,
}

impl BenchSpec {
    pub fn new(generator: Generator, n: usize) -> BenchSpec {
        BenchSpec { generator, n, p: DEFAULT_QAOA_LEVELS, seed: 0, gates: None }
    }
}

impl FromStr for BenchSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<BenchSpec> {
        let mut parts = s.split(':');
        let generator: Generator = parts.next().unwrap_or_default().parse()?;
        let bad = |m: String| Error::Config(format!("bad generator spec `{s}`: {m}"));
        let n: usize = parts
            .next()
            .ok_or_else(|| bad("missing qubit count".into()))?
            .parse()
            .map_err(|e| bad(format!("qubit count: {e}")))?;
        let mut spec = BenchSpec::new(generator, n);
        for kv in parts {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{kv}`")))?;
            let num = |v: &str| v.parse::<u64>().map_err(|e| bad(format!("{k}: {e}")));
            match k {
                "p" => spec.p = num(v)? as usize,
                "seed" => spec.seed = num(v)?,
                "gates" => spec.gates = Some(num(v)? as usize),
                _ => return Err(bad(format!("unknown key `{k}`"))),
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for BenchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.generator, self.n)?;
        match self.generator {
            Generator::QaoaFull => write!(f, ":p={}", self.p)?,
            Generator::Random => {
                write!(f, ":seed={}", self.seed)?;
                if let Some(g) = self.gates {
                    write!(f, ":gates={g}")?;
                }
            }
            Generator::RzzFull | Generator::Bv | Generator::HiddenShift if self.seed != 0 => {
                write!(f, ":seed={}", self.seed)?
            }
            _ => {}
        }
        Ok(())
    }
}

/// Angles on a 64-step grid over (0, 2π).
fn grid_angle(rng: &mut impl Rng) -> f64 {
    2.0 * PI * rng.gen_range(1..64) as f64 / 64.0
}

pub fn gen_circuit(spec: &BenchSpec) -> Result<Circuit> {
    let n = spec.n;
    if n == 0 || n > 48 {
        return Err(Error::Config(format!("qubit count {n} outside 1..=48")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut c = Circuit::new(n);
    match spec.generator {
        Generator::Qft => {
            for i in (0..n).rev() {
                c.push(Gate::h(i))?;
                for j in (0..i).rev() {
                    c.push(Gate::cp(j, i, PI / (1u64 << (i - j)) as f64))?;
                }
            }
            for i in 0..n / 2 {
                c.push(Gate::swap(i, n - 1 - i))?;
            }
        }
        Generator::RzzFull => {
            for a in 0..n {
                for b in a + 1..n {
                    c.push(Gate::rzz(a, b, grid_angle(&mut rng)))?;
                }
            }
        }
        Generator::QaoaFull => {
            for q in 0..n {
                c.push(Gate::h(q))?;
            }
            for _ in 0..spec.p {
                let gamma = grid_angle(&mut rng);
                let beta = grid_angle(&mut rng);
                for a in 0..n {
                    for b in a + 1..n {
                        c.push(Gate::rzz(a, b, gamma))?;
                    }
                }
                for q in 0..n {
                    c.push(Gate::rx(q, beta))?;
                }
            }
        }
        Generator::Ghz => {
            c.push(Gate::h(0))?;
            for q in 1..n {
                c.push(Gate::cx(q - 1, q))?;
            }
        }
        Generator::Bv => {
            // Data qubits 0..n-1, ancilla n-1; hidden string from the seed.
            if n < 2 {
                return Err(Error::Config("bv needs at least 2 qubits".into()));
            }
            let anc = n - 1;
            let secret: Vec<bool> = (0..anc).map(|_| rng.gen()).collect();
            c.push(Gate::x(anc))?;
            c.push(Gate::h(anc))?;
            for q in 0..anc {
                c.push(Gate::h(q))?;
            }
            for (q, &bit) in secret.iter().enumerate() {
                if bit {
                    c.push(Gate::cx(q, anc))?;
                }
            }
            for q in 0..anc {
                c.push(Gate::h(q))?;
            }
        }
        Generator::HiddenShift => {
            // Inner-product bent function on n/2 + n/2 qubits; an odd last
            // qubit only sees Hadamards.
            let m = n / 2;
            if m == 0 {
                return Err(Error::Config("hidden_shift needs at least 2 qubits".into()));
            }
            let shift: Vec<bool> = (0..2 * m).map(|_| rng.gen()).collect();
            let h_all = |c: &mut Circuit| (0..n).try_for_each(|q| c.push(Gate::h(q)));
            let oracle = |c: &mut Circuit| (0..m).try_for_each(|i| c.push(Gate::cz(i, i + m)));
            h_all(&mut c)?;
            for (q, &s) in shift.iter().enumerate() {
                if s {
                    c.push(Gate::x(q))?;
                }
            }
            oracle(&mut c)?;
            for (q, &s) in shift.iter().enumerate() {
                if s {
                    c.push(Gate::x(q))?;
                }
            }
            h_all(&mut c)?;
            oracle(&mut c)?;
            h_all(&mut c)?;
        }
        Generator::Random => {
            let g = spec.gates.unwrap_or(10 * n);
            return random_circuit(n, g, spec.seed, false);
        }
    }
    Ok(c)
}

/// Seeded random circuit. Kinds are drawn uniformly from those that fit in
/// `n` qubits; with `generic`, fused-style unitaries and diagonals over up
/// to three qubits are included.
pub fn random_circuit(n: usize, gates: usize, seed: u64, generic: bool) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds: Vec<GateKind> = GateKind::ALL
        .into_iter()
        .filter(|k| generic || !k.is_generic())
        .filter(|k| k.arity().map_or(true, |(c, t, _)| c + t <= n))
        .collect();
    let qubits: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n);
    for _ in 0..gates {
        let kind = *kinds.choose(&mut rng).expect("at least one kind");
        let gate = match kind.arity() {
            Some((nc, nt, np)) => {
                let qs: Vec<usize> = qubits.choose_multiple(&mut rng, nc + nt).copied().collect();
                let params = (0..np).map(|_| rng.gen_range(-PI..PI)).collect();
                Gate::standard(kind, qs[..nc].to_vec(), qs[nc..].to_vec(), params)?
            }
            None => {
                let t = rng.gen_range(1..=n.min(3));
                let qs: Vec<usize> = qubits.choose_multiple(&mut rng, t).copied().collect();
                if kind == GateKind::Unitary {
                    Gate::unitary(qs, random_unitary(1 << t, &mut rng))?
                } else {
                    let entries = (0..1 << t).map(|_| Complex64::from_polar(1.0, rng.gen_range(-PI..PI))).collect();
                    Gate::diagonal(qs, entries)?
                }
            }
        };
        c.push(gate)?;
    }
    Ok(c)
}
