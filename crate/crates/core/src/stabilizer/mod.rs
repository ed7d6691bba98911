//! Classical simulation: CHP tableaus for Clifford circuits, `2^t` branch
//! expansion for Clifford+T circuits, and closed-form cost models for both.
//!
//! A [`Tableau`] must not be mutated from two workers at once; shot loops
//! clone it per shot. Shots are split into chunks of [`SHOT_CHUNK`], chunk `k`
//! drawing from a ChaCha8 stream `k` seeded with the caller's seed, so a
//! histogram depends only on `(circuit, shots, seed)`.

pub mod extended;
pub mod pauli;
pub mod tableau;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, GateKind, GateOp};
use crate::transpile::{classify_gate, synthesize_exact, GateClass};
pub use extended::{expand, BranchExpansion};
pub use pauli::PauliString;
pub use tableau::{Tableau, MAX_DENSE_QUBITS};

/// Default cap on T gates for [`run_extended`].
pub const DEFAULT_T_MAX: usize = 16;

pub const SHOT_CHUNK: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("`{0}` is not a Clifford generator")]
    NotClifford(String),
    #[error("circuit contains non-Clifford gate `{0}`; use the extended simulator")]
    Regime(String),
    #[error("rotation `{0}` is not exactly Clifford+T; transpile the circuit first")]
    NeedsTranspile(String),
    #[error("circuit has {t} T gates, above the budget of {t_max}")]
    Budget { t: usize, t_max: usize },
    #[error("dense simulation limited to {max} qubits, need {qubits}")]
    TooLarge { qubits: usize, max: usize },
}

/// Measured bitstrings and their counts. Bit `k` of a key is the `k`-th
/// measurement in program order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: BTreeMap<String, u64>,
}

impl Histogram {
    pub fn shots(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    fn merge(mut self, other: Histogram) -> Histogram {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self
    }

    /// `bitstring count` lines sorted by bitstring.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.counts {
            let _ = writeln!(out, "{k} {v}");
        }
        out
    }

    /// Total-variation distance between the empirical frequencies and `probs`.
    pub fn tv_distance(&self, probs: &BTreeMap<String, f64>) -> f64 {
        let n = self.shots() as f64;
        let mut keys: Vec<&String> = self.counts.keys().chain(probs.keys()).collect();
        keys.sort();
        keys.dedup();
        0.5 * keys
            .into_iter()
            .map(|k| (self.get(k) as f64 / n - probs.get(k).copied().unwrap_or(0.0)).abs())
            .sum::<f64>()
    }
}

/// Lowers parameterized gates that are exactly Clifford(+T) and rejects the rest.
fn lower(circuit: &Circuit, allow_t: bool) -> Result<Vec<GateOp>, SimError> {
    let mut out = Vec::new();
    for g in circuit.gates() {
        match g.kind() {
            GateKind::Measure
            | GateKind::H
            | GateKind::S
            | GateKind::Sdg
            | GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::CNOT
            | GateKind::CZ => out.push(g.clone()),
            GateKind::T | GateKind::Tdg if allow_t => out.push(g.clone()),
            GateKind::T | GateKind::Tdg => return Err(SimError::Regime(g.to_string())),
            _ => match classify_gate(g).expect("not a measurement") {
                GateClass::Clifford => {
                    out.extend(synthesize_exact(g).expect("clifford gates are exact"))
                }
                GateClass::TExact if allow_t => {
                    out.extend(synthesize_exact(g).expect("t-exact gates are exact"))
                }
                GateClass::TExact => return Err(SimError::Regime(g.to_string())),
                GateClass::NonCliffordRotation if allow_t => {
                    return Err(SimError::NeedsTranspile(g.to_string()))
                }
                GateClass::NonCliffordRotation => return Err(SimError::Regime(g.to_string())),
            },
        }
    }
    Ok(out)
}

fn with_terminal_measures(n: usize, mut ops: Vec<GateOp>) -> Vec<GateOp> {
    if !ops.iter().any(GateOp::is_measure) {
        ops.extend((0..n).map(|q| GateOp::fixed(GateKind::Measure, &[q])));
    }
    ops
}

fn chunked<F>(shots: u64, seed: u64, per_chunk: F) -> Histogram
where
    F: Fn(&mut ChaCha8Rng, u64, &mut BTreeMap<String, u64>) + Sync,
{
    let chunks = shots.div_ceil(SHOT_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let todo = SHOT_CHUNK.min(shots - k * SHOT_CHUNK);
            let mut counts = BTreeMap::new();
            per_chunk(&mut rng, todo, &mut counts);
            Histogram { counts }
        })
        .reduce(Histogram::default, Histogram::merge)
}

/// Samples a Clifford circuit. Without explicit measurements every qubit is
/// measured at the end, qubit 0 first.
pub fn run_clifford(circuit: &Circuit, shots: u64, seed: u64) -> Result<Histogram, SimError> {
    let ops = with_terminal_measures(circuit.n_qubits(), lower(circuit, false)?);
    let first = ops.iter().position(GateOp::is_measure).unwrap_or(ops.len());
    let mut prefix = Tableau::new(circuit.n_qubits());
    for g in &ops[..first] {
        prefix.apply(g)?;
    }
    let rest = &ops[first..];
    Ok(chunked(shots, seed, |rng, todo, counts| {
        let mut bits = String::with_capacity(rest.len());
        for _ in 0..todo {
            let mut tab = prefix.clone();
            bits.clear();
            for g in rest {
                if g.is_measure() {
                    bits.push(if tab.measure(g.qubits()[0], rng) { '1' } else { '0' });
                } else {
                    tab.apply(g).expect("lowered to clifford generators");
                }
            }
            *counts.entry(bits.clone()).or_default() += 1;
        }
    }))
}

/// Number of `T`/`Tdg` gates after exact lowering.
pub fn t_gate_count(circuit: &Circuit) -> Result<usize, SimError> {
    Ok(lower(circuit, true)?
        .iter()
        .filter(|g| matches!(g.kind(), GateKind::T | GateKind::Tdg))
        .count())
}

/// Unitary part of a circuit with mid-circuit measurements deferred onto
/// ancillas, plus the qubit read out for each measurement record.
#[derive(Debug, Clone)]
pub struct DeferredCircuit {
    pub n_qubits: usize,
    pub ops: Vec<GateOp>,
    pub records: Vec<usize>,
}

/// Defers every measurement whose qubit is touched again by a later gate:
/// `measure q` becomes `CNOT q→a` on a fresh ancilla `a`, read at the end.
pub fn defer_measurements(n: usize, ops: &[GateOp]) -> DeferredCircuit {
    let mut out = Vec::new();
    let mut records = Vec::new();
    let mut next = n;
    for (i, g) in ops.iter().enumerate() {
        if !g.is_measure() {
            out.push(g.clone());
            continue;
        }
        let q = g.qubits()[0];
        let reused = ops[i + 1..].iter().any(|h| !h.is_measure() && h.touches(q));
        if reused {
            out.push(GateOp::fixed(GateKind::CNOT, &[q, next]));
            records.push(next);
            next += 1;
        } else {
            records.push(q);
        }
    }
    DeferredCircuit {
        n_qubits: next,
        ops: out,
        records,
    }
}

/// Exact amplitudes of a Clifford+T circuit without measurements.
pub fn extended_amplitudes(circuit: &Circuit, t_max: usize) -> Result<BranchExpansion, SimError> {
    let ops = lower(circuit, true)?;
    if let Some(m) = ops.iter().find(|g| g.is_measure()) {
        return Err(SimError::NotClifford(m.to_string()));
    }
    let t = ops.iter().filter(|g| matches!(g.kind(), GateKind::T | GateKind::Tdg)).count();
    if t > t_max {
        return Err(SimError::Budget { t, t_max });
    }
    expand(circuit.n_qubits(), &ops)
}

/// Samples a Clifford+T circuit by exact branch expansion. `t = 0` delegates
/// to [`run_clifford`].
pub fn run_extended(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    t_max: usize,
) -> Result<Histogram, SimError> {
    let ops = lower(circuit, true)?;
    let t = ops.iter().filter(|g| matches!(g.kind(), GateKind::T | GateKind::Tdg)).count();
    if t > t_max {
        return Err(SimError::Budget { t, t_max });
    }
    if t == 0 {
        return run_clifford(circuit, shots, seed);
    }
    let ops = with_terminal_measures(circuit.n_qubits(), ops);
    let deferred = defer_measurements(circuit.n_qubits(), &ops);
    let state = expand(deferred.n_qubits, &deferred.ops)?;

    let mut marginal: BTreeMap<String, f64> = BTreeMap::new();
    for (x, a) in state.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let key: String = deferred
            .records
            .iter()
            .map(|&q| if x >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        *marginal.entry(key).or_default() += p;
    }
    let outcomes: Vec<(String, f64)> = marginal.into_iter().collect();
    let mut cumulative = Vec::with_capacity(outcomes.len());
    let mut acc = 0.0;
    for (_, p) in &outcomes {
        acc += p;
        cumulative.push(acc);
    }
    Ok(chunked(shots, seed, |rng, todo, counts| {
        for _ in 0..todo {
            let u = rng.gen::<f64>() * acc;
            let i = cumulative.partition_point(|&c| c <= u).min(outcomes.len() - 1);
            *counts.entry(outcomes[i].0.clone()).or_default() += 1;
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    CliffordPoly,
    ExtendedExp,
}

/// Multiplicative constants of the two cost models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostConstants {
    pub clifford: f64,
    pub extended: f64,
}

impl Default for CostConstants {
    fn default() -> Self {
        CostConstants {
            clifford: 1.0,
            extended: 1.0,
        }
    }
}

/// Abstract step counts. `kappa` is the branch count `2^t` of the expansion
/// used here, not a minimal stabilizer rank; it overflows to infinity for
/// large `t`, as does `step_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCostEstimate {
    pub regime: Regime,
    pub step_bound: f64,
    pub kappa: f64,
    pub t: u64,
    pub epsilon: f64,
}

pub fn sim_cost(n: u64, m: u64, t: u64, epsilon: f64) -> ClassicalCostEstimate {
    sim_cost_with(n, m, t, epsilon, &CostConstants::default())
}

pub fn sim_cost_with(
    n: u64,
    m: u64,
    t: u64,
    epsilon: f64,
    c: &CostConstants,
) -> ClassicalCostEstimate {
    if t == 0 {
        return ClassicalCostEstimate {
            regime: Regime::CliffordPoly,
            step_bound: c.clifford * (n as f64).powi(2) * m as f64,
            kappa: 1.0,
            t,
            epsilon,
        };
    }
    let kappa = 2f64.powf(t as f64);
    ClassicalCostEstimate {
        regime: Regime::ExtendedExp,
        step_bound: c.extended * kappa * (t as f64).powi(3) / (epsilon * epsilon),
        kappa,
        t,
        epsilon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    #[test]
    fn ghz_outcomes() {
        let c = parse_circuit("qubits 3\nh 0\ncnot 0 1\ncnot 1 2").unwrap();
        let h = run_clifford(&c, 8000, 11).unwrap();
        assert_eq!(h.shots(), 8000);
        assert_eq!(h.counts.len(), 2);
        // σ = √(8000/4) ≈ 44.7
        assert!((h.get("000") as i64 - 4000).abs() <= 134);
        assert_eq!(h.get("000") + h.get("111"), 8000);
    }

    #[test]
    fn measures_on_empty_circuit() {
        let c = parse_circuit("qubits 2\nmeasure 0\nmeasure 1").unwrap();
        let h = run_clifford(&c, 100, 0).unwrap();
        assert_eq!(h.render(), "00 100\n");
    }

    #[test]
    fn same_seed_same_histogram() {
        let c = parse_circuit("qubits 3\nh 0\nh 1\ncnot 1 2\ns 2\nh 2").unwrap();
        assert_eq!(run_clifford(&c, 5000, 3).unwrap(), run_clifford(&c, 5000, 3).unwrap());
        assert_ne!(run_clifford(&c, 5000, 3).unwrap(), run_clifford(&c, 5000, 4).unwrap());
    }

    #[test]
    fn regime_errors() {
        let c = parse_circuit("qubits 1\nh 0\nt 0").unwrap();
        assert!(matches!(run_clifford(&c, 10, 0), Err(SimError::Regime(_))));
        let r = parse_circuit("qubits 1\nrz(0.3) 0").unwrap();
        assert!(matches!(run_extended(&r, 10, 0, 16), Err(SimError::NeedsTranspile(_))));
        let many = parse_circuit(&format!("qubits 1\n{}", "t 0\nh 0\n".repeat(17))).unwrap();
        assert_eq!(
            run_extended(&many, 10, 0, DEFAULT_T_MAX),
            Err(SimError::Budget { t: 17, t_max: 16 })
        );
    }

    #[test]
    fn parameterized_cliffords_are_lowered() {
        let c = parse_circuit("qubits 1\nu2(0, pi) 0\nu1(pi/2) 0\nu2(0, pi) 0").unwrap();
        // H S H |0> has P(0) = 1/2
        let h = run_clifford(&c, 2000, 5).unwrap();
        assert_eq!(h.counts.len(), 2);
    }

    #[test]
    fn extended_without_t_equals_clifford() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1\nmeasure 1\nh 1").unwrap();
        assert_eq!(run_extended(&c, 3000, 9, 16).unwrap(), run_clifford(&c, 3000, 9).unwrap());
    }

    #[test]
    fn extended_h_t_h() {
        let c = parse_circuit("qubits 1\nh 0\nt 0\nh 0\nmeasure 0").unwrap();
        let h = run_extended(&c, 50_000, 1, 16).unwrap();
        let p0 = (std::f64::consts::PI / 8.0).cos().powi(2);
        let sigma = (p0 * (1.0 - p0) / 50_000.0).sqrt();
        assert!((h.get("0") as f64 / 50_000.0 - p0).abs() < 4.0 * sigma);
    }

    #[test]
    fn deferred_mid_circuit_measurement() {
        // measure in the X basis twice: the second readout repeats the first
        let c = parse_circuit("qubits 1\nh 0\nt 0\nmeasure 0\nh 0\nh 0\nmeasure 0").unwrap();
        let h = run_extended(&c, 4000, 2, 16).unwrap();
        assert_eq!(h.get("01") + h.get("10"), 0);
        let d = defer_measurements(1, &c.gates().cloned().collect::<Vec<_>>());
        assert_eq!((d.n_qubits, d.records.clone()), (2, vec![1, 0]));
    }

    #[test]
    fn cost_examples() {
        let c = sim_cost(100, 1000, 0, 0.1);
        assert_eq!((c.regime, c.step_bound), (Regime::CliffordPoly, 1e7));
        let e = sim_cost(5, 10, 3, 0.1);
        assert_eq!(e.kappa, 8.0);
        assert!((e.step_bound - 21_600.0).abs() < 1e-6);
        assert_eq!(sim_cost(1, 1, 2, 0.1).kappa, 2.0 * sim_cost(1, 1, 1, 0.1).kappa);
        assert!(sim_cost(5, 5, 100_000_000, 1e-3).step_bound.is_infinite());
    }
}
