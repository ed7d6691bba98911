//! Lowering to Clifford+T and T-count policies.
//!
//! Single-qubit gates whose Euler angles are all multiples of π/4 are
//! synthesized exactly with a minimal T-count. Other rotations are either
//! priced with a closed-form cost ([`SynthesisMode::Count`]) or replaced by an
//! explicit word found by table search ([`SynthesisMode::Sequence`]).

pub mod search;

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    gate_matrix, half_pi_multiple, normalize_angle, quarter_pi_multiple, Circuit, CircuitError,
    GateKind, GateOp, ANGLE_TOL,
};
use search::{WordTable, EXACT_TOL};

/// Smallest accuracy accepted by [`SynthesisMode::Sequence`].
pub const MIN_SEQUENCE_EPSILON: f64 = 1e-3;

/// Deepest T-level tried when looking for an exact word.
const EXACT_MAX_LEVEL: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranspileError {
    #[error("measurement has no gate class")]
    Measure,
    #[error("`{0}` is not exactly representable over Clifford+T")]
    NotExact(String),
    #[error("`{0}` is not a single-axis rotation")]
    NotAxisRotation(String),
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error("sequence synthesis at epsilon {epsilon} exceeds the search budget (minimum {min})")]
    SearchBudget { epsilon: f64, min: f64 },
    #[error("no word within {epsilon} of `{gate}` up to T-count {max_t}")]
    SearchExhausted {
        gate: String,
        epsilon: f64,
        max_t: usize,
    },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateClass {
    Clifford,
    TExact,
    NonCliffordRotation,
}

impl GateClass {
    pub fn is_clifford(self) -> bool {
        self == GateClass::Clifford
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SynthesisMode {
    /// Price each rotation with [`SynthesisCost`]; emit nothing for it.
    Count,
    /// Emit an explicit word within epsilon.
    Sequence,
}

/// Per-rotation T cost used in count mode: `ceil(factor·log2(1/ε)) + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisCost {
    pub factor: f64,
    pub offset: u64,
}

impl Default for SynthesisCost {
    fn default() -> Self {
        SynthesisCost {
            factor: 3.0,
            offset: 4,
        }
    }
}

impl SynthesisCost {
    pub fn rotation_t_count(&self, epsilon: f64) -> u64 {
        (self.factor * (1.0 / epsilon).log2()).ceil().max(0.0) as u64 + self.offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn gate(self, qubit: usize, angle: f64) -> GateOp {
        let kind = match self {
            Axis::X => GateKind::RX,
            Axis::Y => GateKind::RY,
            Axis::Z => GateKind::RZ,
        };
        GateOp::rotation(kind, qubit, &[angle])
    }
}

/// Axis rotations (circuit order) equal to a parameterized gate up to phase.
///
/// `U3(θ, φ, γ) = RZ(φ)·RY(θ)·RZ(γ)`; `θ ≡ 0` and `θ ≡ π` fold to fewer terms.
pub fn axis_rotations(gate: &GateOp) -> Option<Vec<(Axis, f64)>> {
    let a = gate.angles();
    let near = |x: f64, y: f64| (normalize_angle(x - y)).min(2.0 * PI - normalize_angle(x - y)) <= ANGLE_TOL;
    let rots = match gate.kind() {
        GateKind::U1 | GateKind::RZ => vec![(Axis::Z, a[0])],
        GateKind::RX => vec![(Axis::X, a[0])],
        GateKind::RY => vec![(Axis::Y, a[0])],
        GateKind::U2 => vec![(Axis::Z, a[1]), (Axis::Y, FRAC_PI_2), (Axis::Z, a[0])],
        GateKind::U3 => {
            let (theta, phi, gamma) = (a[0], a[1], a[2]);
            if near(theta, 0.0) {
                vec![(Axis::Z, phi + gamma)]
            } else if near(theta, PI) {
                vec![(Axis::Y, PI), (Axis::Z, phi - gamma)]
            } else {
                vec![(Axis::Z, gamma), (Axis::Y, theta), (Axis::Z, phi)]
            }
        }
        _ => return None,
    };
    Some(rots.into_iter().map(|(ax, t)| (ax, normalize_angle(t))).collect())
}

fn exact_word(gate: &GateOp) -> Option<Vec<GateKind>> {
    let m = gate_matrix(gate)?;
    let table = WordTable::global();
    table
        .find(&m, EXACT_TOL, EXACT_MAX_LEVEL)
        .map(|hit| table.word(&hit))
}

fn t_letters(gates: &[GateOp]) -> u64 {
    gates
        .iter()
        .filter(|g| matches!(g.kind(), GateKind::T | GateKind::Tdg))
        .count() as u64
}

pub fn classify_gate(gate: &GateOp) -> Result<GateClass, TranspileError> {
    use GateKind::*;
    Ok(match gate.kind() {
        Measure => return Err(TranspileError::Measure),
        H | S | Sdg | X | Y | Z | CNOT | CZ => GateClass::Clifford,
        T | Tdg => GateClass::TExact,
        U1 | U2 | U3 | RX | RY | RZ => {
            let rots = axis_rotations(gate).expect("parameterized gate");
            if rots.iter().all(|&(_, t)| half_pi_multiple(t).is_some()) {
                GateClass::Clifford
            } else if rots.iter().all(|&(_, t)| quarter_pi_multiple(t).is_some()) {
                match exact_word(gate) {
                    Some(w) if w.contains(&GateKind::T) => GateClass::TExact,
                    Some(_) => GateClass::Clifford,
                    None => GateClass::NonCliffordRotation,
                }
            } else {
                GateClass::NonCliffordRotation
            }
        }
    })
}

/// Exact Clifford+T word for a gate classified Clifford or TExact.
///
/// Gates already in the target set pass through unchanged; `CZ` becomes
/// `H·CNOT·H` on the second qubit.
pub fn synthesize_exact(gate: &GateOp) -> Result<Vec<GateOp>, TranspileError> {
    let q = gate.qubits();
    match gate.kind() {
        GateKind::Measure => Err(TranspileError::Measure),
        k if k.is_restricted() => Ok(vec![gate.clone()]),
        GateKind::CZ => Ok(vec![
            GateOp::fixed(GateKind::H, &[q[1]]),
            GateOp::fixed(GateKind::CNOT, q),
            GateOp::fixed(GateKind::H, &[q[1]]),
        ]),
        _ => {
            let word = exact_word(gate).ok_or_else(|| TranspileError::NotExact(gate.to_string()))?;
            Ok(word.into_iter().map(|k| GateOp::fixed(k, &[q[0]])).collect())
        }
    }
}

/// Outcome of approximating one axis rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    /// Emitted gates; empty in count mode unless the rotation was exact.
    pub gates: Vec<GateOp>,
    pub t_used: u64,
    /// Zero for exact rotations; ε in count mode; the achieved distance otherwise.
    pub err_bound: f64,
    pub exact: bool,
}

fn check_epsilon(epsilon: f64) -> Result<(), TranspileError> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(TranspileError::Epsilon(epsilon))
    }
}

/// Approximates a single-axis rotation (`RX`, `RY`, `RZ`, `U1`).
///
/// Angles that are multiples of π/4 take the exact path regardless of mode.
/// `RX` and `RY` are conjugated onto the Z axis: `RX = H·RZ·H`,
/// `RY = S·H·RZ·H·Sdg`.
pub fn synthesize_approx(
    gate: &GateOp,
    epsilon: f64,
    mode: SynthesisMode,
    cost: &SynthesisCost,
) -> Result<Approximation, TranspileError> {
    if !matches!(gate.kind(), GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::U1) {
        return Err(TranspileError::NotAxisRotation(gate.to_string()));
    }
    check_epsilon(epsilon)?;
    let theta = gate.angles()[0];
    if quarter_pi_multiple(theta).is_some() {
        let gates = synthesize_exact(gate)?;
        return Ok(Approximation {
            t_used: t_letters(&gates),
            gates,
            err_bound: 0.0,
            exact: true,
        });
    }
    match mode {
        SynthesisMode::Count => Ok(Approximation {
            gates: Vec::new(),
            t_used: cost.rotation_t_count(epsilon),
            err_bound: epsilon,
            exact: false,
        }),
        SynthesisMode::Sequence => {
            if epsilon < MIN_SEQUENCE_EPSILON {
                return Err(TranspileError::SearchBudget {
                    epsilon,
                    min: MIN_SEQUENCE_EPSILON,
                });
            }
            let q = gate.qubits()[0];
            let target = gate_matrix(&GateOp::rotation(GateKind::RZ, q, &[theta])).expect("rz");
            let table = WordTable::global();
            let hit = table
                .approximate(&target, epsilon)
                .ok_or_else(|| TranspileError::SearchExhausted {
                    gate: gate.to_string(),
                    epsilon,
                    max_t: search::SPLIT_LEVEL + search::MIDDLE_LEVEL,
                })?;
            let core = table.split_word(&hit).into_iter().map(|k| GateOp::fixed(k, &[q]));
            let h = || GateOp::fixed(GateKind::H, &[q]);
            let gates: Vec<GateOp> = match gate.kind() {
                GateKind::RX => std::iter::once(h()).chain(core).chain([h()]).collect(),
                GateKind::RY => [GateOp::fixed(GateKind::Sdg, &[q]), h()]
                    .into_iter()
                    .chain(core)
                    .chain([h(), GateOp::fixed(GateKind::S, &[q])])
                    .collect(),
                _ => core.collect(),
            };
            Ok(Approximation {
                t_used: t_letters(&gates),
                gates,
                err_bound: hit.distance,
                exact: false,
            })
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Lowered {
    gates: Vec<GateOp>,
    t: u64,
    approximated: usize,
    err: f64,
    non_clifford: bool,
}

fn lower_gate(
    gate: &GateOp,
    epsilon: f64,
    mode: SynthesisMode,
    cost: &SynthesisCost,
) -> Result<Lowered, TranspileError> {
    if gate.is_measure() {
        return Ok(Lowered {
            gates: vec![gate.clone()],
            ..Lowered::default()
        });
    }
    match classify_gate(gate)? {
        class @ (GateClass::Clifford | GateClass::TExact) => {
            let gates = synthesize_exact(gate)?;
            Ok(Lowered {
                t: t_letters(&gates),
                gates,
                non_clifford: class == GateClass::TExact,
                ..Lowered::default()
            })
        }
        GateClass::NonCliffordRotation => {
            let q = gate.qubits()[0];
            let mut out = Lowered {
                non_clifford: true,
                ..Lowered::default()
            };
            for (axis, theta) in axis_rotations(gate).expect("rotation") {
                let a = synthesize_approx(&axis.gate(q, theta), epsilon, mode, cost)?;
                out.t += a.t_used;
                out.err += a.err_bound;
                out.approximated += usize::from(!a.exact);
                out.gates.extend(a.gates);
            }
            Ok(out)
        }
    }
}

/// A lowered circuit with provenance of every emitted gate.
#[derive(Debug, Clone, PartialEq)]
pub struct TranspiledCircuit {
    /// Only `H, S, Sdg, T, Tdg, CNOT, Measure`. Blocks follow the source.
    pub circuit: Circuit,
    /// For each source gate in program order, its range in the emitted order.
    /// Count-mode approximations contribute empty ranges.
    pub source_map: Vec<Range<usize>>,
    pub approx_error: f64,
    pub approximated: usize,
    pub t_count: u64,
    pub mode: SynthesisMode,
}

/// Lowers every gate in program order. Gates are lowered in parallel and
/// merged in source order.
pub fn transpile(
    circuit: &Circuit,
    epsilon: f64,
    mode: SynthesisMode,
    cost: &SynthesisCost,
) -> Result<TranspiledCircuit, TranspileError> {
    check_epsilon(epsilon)?;
    let source: Vec<(usize, &GateOp)> = circuit.gates_with_block().collect();
    let lowered: Vec<Lowered> = source
        .par_iter()
        .map(|(_, g)| lower_gate(g, epsilon, mode, cost))
        .collect::<Result<_, _>>()?;

    let mut source_map = Vec::with_capacity(lowered.len());
    let mut emitted = Vec::new();
    let (mut approx_error, mut approximated, mut t_count) = (0.0, 0, 0);
    for ((block, _), low) in source.iter().zip(lowered) {
        let start = emitted.len();
        emitted.extend(low.gates.into_iter().map(|g| (*block, g)));
        source_map.push(start..emitted.len());
        approx_error += low.err;
        approximated += low.approximated;
        t_count += low.t;
    }
    let mut out = Circuit::relayered(circuit.n_qubits(), emitted)?;
    out.set_name(circuit.name().map(str::to_owned));
    Ok(TranspiledCircuit {
        circuit: out,
        source_map,
        approx_error,
        approximated,
        t_count,
        mode,
    })
}

/// T tallies for one block of the source circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTally {
    pub block: usize,
    pub t_full: u64,
    /// 1 when the block holds any non-Clifford gate, else 0.
    pub t_sym: u64,
    pub non_clifford_gates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TCountReport {
    /// Sum of per-gate T costs under count-mode lowering.
    pub t_full: u64,
    /// Number of blocks containing at least one non-Clifford gate.
    pub t_sym: u64,
    pub epsilon: f64,
    pub clifford_count: usize,
    pub breakdown: Vec<BlockTally>,
}

impl TCountReport {
    pub fn depth_blocks(&self) -> usize {
        self.breakdown.len()
    }
}

pub fn t_count(circuit: &Circuit, epsilon: f64) -> Result<TCountReport, TranspileError> {
    t_count_with(circuit, epsilon, &SynthesisCost::default())
}

pub fn t_count_with(
    circuit: &Circuit,
    epsilon: f64,
    cost: &SynthesisCost,
) -> Result<TCountReport, TranspileError> {
    check_epsilon(epsilon)?;
    let source: Vec<(usize, &GateOp)> = circuit.gates_with_block().collect();
    let lowered: Vec<(usize, Lowered, bool)> = source
        .par_iter()
        .map(|&(block, g)| {
            let low = lower_gate(g, epsilon, SynthesisMode::Count, cost)?;
            Ok((block, low, g.is_measure()))
        })
        .collect::<Result<_, TranspileError>>()?;

    let mut breakdown: Vec<BlockTally> = Vec::new();
    let mut clifford_count = 0;
    for (block, low, measure) in lowered {
        if breakdown.last().map(|b| b.block) != Some(block) {
            breakdown.push(BlockTally {
                block,
                t_full: 0,
                t_sym: 0,
                non_clifford_gates: 0,
            });
        }
        let tally = breakdown.last_mut().expect("pushed above");
        tally.t_full += low.t;
        if low.non_clifford {
            tally.non_clifford_gates += 1;
            tally.t_sym = 1;
        } else if !measure {
            clifford_count += 1;
        }
    }
    Ok(TCountReport {
        t_full: breakdown.iter().map(|b| b.t_full).sum(),
        t_sym: breakdown.iter().map(|b| b.t_sym).sum(),
        epsilon,
        clifford_count,
        breakdown,
    })
}
