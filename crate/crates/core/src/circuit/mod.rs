//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of layers. Each layer is a parallel time
//! slice (no qubit is touched twice inside it) and carries a block index. A
//! block groups consecutive slices into one parameterized layer of an ansatz;
//! the symmetry-breaking T-count policy counts blocks, not slices.

mod ansatz;
mod parse;
mod unitary;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ansatz::{build_ansatz, AnsatzKind};
pub use parse::{parse_circuit, render_circuit};
pub use unitary::{
    gate_matrix, mat2_adjoint, mat2_mul, unitary_of, DenseMatrix, Mat2, MAT2_IDENTITY,
    MAX_UNITARY_QUBITS,
};

/// Absolute tolerance for angle comparisons.
pub const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("{kind} takes {expected} angle(s), got {got}")]
    AngleArity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("{kind} acts on {expected} qubit(s), got {got}")]
    QubitArity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("{kind} repeats qubit {qubit}")]
    DuplicateQubit { kind: GateKind, qubit: usize },
    #[error("angle {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("{kind} ansatz expects {expected} parameters, got {got}")]
    ParamCount {
        kind: AnsatzKind,
        expected: usize,
        got: usize,
    },
    #[error("{kind} ansatz needs at least 2 qubits, got {got}")]
    TooFewQubits { kind: AnsatzKind, got: usize },
    #[error("ansatz depth must be at least 1")]
    ZeroDepth,
    #[error("dense unitary limited to {max} qubits, circuit has {got}")]
    TooLarge { max: usize, got: usize },
    #[error("measurement has no unitary")]
    MeasureInUnitary,
    #[error("line {line}, column {column}: {source}")]
    AtLine {
        line: usize,
        column: usize,
        source: Box<CircuitError>,
    },
}

/// Gate kinds understood by the IR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    U1,
    U2,
    U3,
    H,
    S,
    Sdg,
    T,
    Tdg,
    X,
    Y,
    Z,
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 17] = [
        GateKind::U1,
        GateKind::U2,
        GateKind::U3,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::CNOT,
        GateKind::CZ,
        GateKind::Measure,
    ];

    pub fn angle_arity(self) -> usize {
        match self {
            GateKind::U1 | GateKind::RX | GateKind::RY | GateKind::RZ => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn qubit_arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::CZ => 2,
            _ => 1,
        }
    }

    /// Lowercase mnemonic used by the text format.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::RZ => "rz",
            GateKind::CNOT => "cnot",
            GateKind::CZ => "cz",
            GateKind::Measure => "measure",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Kinds allowed in a transpiled (Clifford+T) circuit.
    pub fn is_restricted(self) -> bool {
        matches!(
            self,
            GateKind::H
                | GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::CNOT
                | GateKind::Measure
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Maps an angle into `[0, 2π)`. Values within [`ANGLE_TOL`] of `2π` fold to 0.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if TAU - a <= ANGLE_TOL {
        0.0
    } else {
        a
    }
}

/// Returns `k` when `angle` is within tolerance of `k * step` (mod 2π).
fn multiple_of(angle: f64, step: f64) -> Option<u32> {
    let a = normalize_angle(angle);
    let k = (a / step).round();
    if (a - k * step).abs() <= ANGLE_TOL {
        let slots = (TAU / step).round() as u32;
        Some((k as u32) % slots)
    } else {
        None
    }
}

/// `k` such that `angle ≈ k·π/4`, `k` in `0..8`.
pub fn quarter_pi_multiple(angle: f64) -> Option<u32> {
    multiple_of(angle, FRAC_PI_4)
}

/// `k` such that `angle ≈ k·π/2`, `k` in `0..4`.
pub fn half_pi_multiple(angle: f64) -> Option<u32> {
    multiple_of(angle, FRAC_PI_2)
}

/// One gate application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    kind: GateKind,
    qubits: Vec<usize>,
    angles: Vec<f64>,
}

impl GateOp {
    /// Validates arity and distinctness and normalizes angles into `[0, 2π)`.
    pub fn new(kind: GateKind, qubits: Vec<usize>, angles: Vec<f64>) -> Result<Self, CircuitError> {
        if qubits.len() != kind.qubit_arity() {
            return Err(CircuitError::QubitArity {
                kind,
                expected: kind.qubit_arity(),
                got: qubits.len(),
            });
        }
        if angles.len() != kind.angle_arity() {
            return Err(CircuitError::AngleArity {
                kind,
                expected: kind.angle_arity(),
                got: angles.len(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(CircuitError::DuplicateQubit {
                kind,
                qubit: qubits[0],
            });
        }
        let angles = angles
            .into_iter()
            .map(|a| {
                if a.is_finite() {
                    Ok(normalize_angle(a))
                } else {
                    Err(CircuitError::NonFiniteAngle(a))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GateOp {
            kind,
            qubits,
            angles,
        })
    }

    /// Shorthand for angle-free gates; panics on arity mismatch.
    pub fn fixed(kind: GateKind, qubits: &[usize]) -> Self {
        GateOp::new(kind, qubits.to_vec(), Vec::new()).expect("fixed gate arity")
    }

    /// Shorthand for single-qubit rotations; panics on arity mismatch.
    pub fn rotation(kind: GateKind, qubit: usize, angles: &[f64]) -> Self {
        GateOp::new(kind, vec![qubit], angles.to_vec()).expect("rotation arity")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn is_measure(&self) -> bool {
        self.kind == GateKind::Measure
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.qubits.contains(&qubit)
    }

    /// Same gate moved to other qubits (used when embedding into wider registers).
    pub fn on_qubits(&self, qubits: &[usize]) -> Result<Self, CircuitError> {
        GateOp::new(self.kind, qubits.to_vec(), self.angles.clone())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if !self.angles.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.angles.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a:?}")?;
            }
            f.write_str(")")?;
        }
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// A parallel time slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub gates: Vec<GateOp>,
    /// Parameterized block this slice belongs to.
    pub block: usize,
}

impl Layer {
    fn touches(&self, gate: &GateOp) -> bool {
        self.gates
            .iter()
            .any(|g| g.qubits.iter().any(|q| gate.qubits.contains(q)))
    }
}

/// Summary counts: qubits, non-measure gates, and layer depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub n_qubits: usize,
    pub gate_count: usize,
    pub depth: usize,
}

/// Ordered layers of gates over `n_qubits` qubits.
///
/// Circuits are plain values: build them with [`Circuit::push`] and friends,
/// then share them freely across threads.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    layers: Vec<Layer>,
    name: Option<String>,
    /// Block to assign to the next opened slice; `None` means one block per slice.
    #[serde(skip)]
    open_block: Option<usize>,
    #[serde(skip)]
    force_break: bool,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.layers == other.layers && self.name == other.name
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self, CircuitError> {
        if n_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        Ok(Circuit {
            n_qubits,
            layers: Vec::new(),
            name: None,
            open_block: None,
            force_break: false,
        })
    }

    /// Builds a circuit from explicit layers, checking every invariant.
    pub fn from_layers(n_qubits: usize, layers: Vec<Layer>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(n_qubits)?;
        let mut last_block = None;
        for layer in &layers {
            for g in &layer.gates {
                c.check_qubits(g)?;
            }
            for (i, g) in layer.gates.iter().enumerate() {
                for q in &g.qubits {
                    if layer.gates[..i].iter().any(|h| h.touches(*q)) {
                        return Err(CircuitError::DuplicateQubit {
                            kind: g.kind,
                            qubit: *q,
                        });
                    }
                }
            }
            if let Some(b) = last_block {
                if layer.block < b {
                    return Err(CircuitError::Syntax {
                        line: 0,
                        column: 0,
                        message: "block indices must be non-decreasing".into(),
                    });
                }
            }
            last_block = Some(layer.block);
        }
        // renumber blocks to 0, 1, 2, ... in order of appearance
        let mut prev = None;
        let mut next = 0;
        c.layers = layers
            .into_iter()
            .filter(|l| !l.gates.is_empty())
            .map(|mut l| {
                if prev != Some(l.block) {
                    prev = Some(l.block);
                    next += 1;
                }
                l.block = next - 1;
                l
            })
            .collect();
        Ok(c)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Gates in program order.
    pub fn gates(&self) -> impl Iterator<Item = &GateOp> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }

    /// Gates in program order, each paired with its block index.
    pub fn gates_with_block(&self) -> impl Iterator<Item = (usize, &GateOp)> {
        self.layers
            .iter()
            .flat_map(|l| l.gates.iter().map(move |g| (l.block, g)))
    }

    /// Number of distinct blocks.
    pub fn block_count(&self) -> usize {
        let mut count = 0;
        let mut last = None;
        for l in &self.layers {
            if last != Some(l.block) {
                count += 1;
                last = Some(l.block);
            }
        }
        count
    }

    /// True when every slice is its own block (no explicit grouping).
    pub fn blocks_are_slices(&self) -> bool {
        self.layers.iter().enumerate().all(|(i, l)| l.block == i)
    }

    fn check_qubits(&self, gate: &GateOp) -> Result<(), CircuitError> {
        for &q in &gate.qubits {
            if q >= self.n_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        Ok(())
    }

    /// Appends a gate: it joins the current slice unless it shares a qubit
    /// with a gate already there (or a break was requested).
    pub fn push(&mut self, gate: GateOp) -> Result<(), CircuitError> {
        self.check_qubits(&gate)?;
        let need_new = match self.layers.last() {
            None => true,
            Some(last) => self.force_break || last.touches(&gate),
        };
        if need_new {
            let block = match self.open_block {
                Some(b) => b,
                None => self.layers.len(),
            };
            self.layers.push(Layer {
                gates: Vec::new(),
                block,
            });
            self.force_break = false;
        }
        self.layers
            .last_mut()
            .expect("layer opened above")
            .gates
            .push(gate);
        Ok(())
    }

    /// Forces the next gate into a new slice.
    pub fn break_layer(&mut self) {
        if !self.layers.is_empty() {
            self.force_break = true;
        }
    }

    /// Starts a new parameterized block. From now on slices are grouped by
    /// explicit blocks; slices opened before the first call keep one block each.
    pub fn start_block(&mut self) {
        let next = match (self.open_block, self.layers.last()) {
            (_, None) => 0,
            (Some(b), Some(l)) if l.block < b => b,
            (_, Some(l)) => l.block + 1,
        };
        self.open_block = Some(next);
        self.break_layer();
    }

    pub fn stats(&self) -> CircuitStats {
        circuit_stats(self)
    }

    /// Rebuilds this circuit's gate list with greedy layering, keeping blocks.
    pub fn relayered(n_qubits: usize, gates: impl IntoIterator<Item = (usize, GateOp)>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(n_qubits)?;
        let mut current = None;
        for (block, g) in gates {
            if current != Some(block) {
                c.open_block = Some(block);
                c.break_layer();
                current = Some(block);
            }
            c.push(g)?;
        }
        Ok(c)
    }
}

/// `m` counts all non-measure gates, depth counts slices.
pub fn circuit_stats(circuit: &Circuit) -> CircuitStats {
    CircuitStats {
        n_qubits: circuit.n_qubits,
        gate_count: circuit.gates().filter(|g| !g.is_measure()).count(),
        depth: circuit.depth(),
    }
}
