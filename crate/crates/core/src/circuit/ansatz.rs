use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, GateKind, GateOp};

/// The four benchmark parameterized-circuit families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnsatzKind {
    /// RY per qubit, then a CNOT ladder `i -> i+1`.
    RealAmplitudes,
    /// CZ on a ring, then RX per qubit.
    EnergyBased,
    /// U3 per qubit, then a CNOT ring whose stride cycles with the repetition.
    StronglyEntangling,
    /// RY and RZ per qubit, then a linear CNOT chain.
    HardwareEfficient,
}

impl AnsatzKind {
    pub const ALL: [AnsatzKind; 4] = [
        AnsatzKind::RealAmplitudes,
        AnsatzKind::EnergyBased,
        AnsatzKind::StronglyEntangling,
        AnsatzKind::HardwareEfficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::RealAmplitudes => "real-amplitudes",
            AnsatzKind::EnergyBased => "energy-based",
            AnsatzKind::StronglyEntangling => "strongly-entangling",
            AnsatzKind::HardwareEfficient => "hardware-efficient",
        }
    }

    /// Angles consumed by one repetition on `n_qubits` qubits.
    pub fn params_per_layer(self, n_qubits: usize) -> usize {
        match self {
            AnsatzKind::RealAmplitudes | AnsatzKind::EnergyBased => n_qubits,
            AnsatzKind::StronglyEntangling => 3 * n_qubits,
            AnsatzKind::HardwareEfficient => 2 * n_qubits,
        }
    }

    pub fn param_count(self, n_qubits: usize, depth: usize) -> usize {
        self.params_per_layer(n_qubits) * depth
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnsatzKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AnsatzKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown ansatz `{s}` (expected one of: {})",
                    AnsatzKind::ALL.map(|k| k.name()).join(", ")
                )
            })
    }
}

/// CNOT pairs `(i, i+stride mod n)` for every qubit; for two qubits the
/// duplicate edge is kept, as a ring of length two.
fn ring(n: usize, stride: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).map(move |i| (i, (i + stride) % n))
}

/// Builds one of the benchmark families. Each repetition is its own block.
///
/// Parameter layout per repetition: RealAmplitudes and EnergyBased take one
/// angle per qubit; StronglyEntangling takes `(θ, φ, γ)` per qubit;
/// HardwareEfficient takes all RY angles followed by all RZ angles.
pub fn build_ansatz(
    kind: AnsatzKind,
    n_qubits: usize,
    depth: usize,
    params: &[f64],
) -> Result<Circuit, CircuitError> {
    if n_qubits < 2 {
        return Err(CircuitError::TooFewQubits {
            kind,
            got: n_qubits,
        });
    }
    if depth == 0 {
        return Err(CircuitError::ZeroDepth);
    }
    let expected = kind.param_count(n_qubits, depth);
    if params.len() != expected {
        return Err(CircuitError::ParamCount {
            kind,
            expected,
            got: params.len(),
        });
    }

    let n = n_qubits;
    let mut c = Circuit::new(n)?.with_name(format!("{kind} n={n} depth={depth}"));
    for (layer, chunk) in params.chunks(kind.params_per_layer(n)).enumerate() {
        c.start_block();
        match kind {
            AnsatzKind::RealAmplitudes => {
                for (q, &theta) in chunk.iter().enumerate() {
                    c.push(GateOp::rotation(GateKind::RY, q, &[theta]))?;
                }
                for q in 0..n - 1 {
                    c.push(GateOp::fixed(GateKind::CNOT, &[q, q + 1]))?;
                }
            }
            AnsatzKind::EnergyBased => {
                let edges: Vec<_> = if n == 2 {
                    vec![(0, 1)]
                } else {
                    ring(n, 1).collect()
                };
                for (a, b) in edges {
                    c.push(GateOp::fixed(GateKind::CZ, &[a, b]))?;
                }
                for (q, &theta) in chunk.iter().enumerate() {
                    c.push(GateOp::rotation(GateKind::RX, q, &[theta]))?;
                }
            }
            AnsatzKind::StronglyEntangling => {
                for (q, angles) in chunk.chunks(3).enumerate() {
                    c.push(GateOp::rotation(GateKind::U3, q, angles))?;
                }
                let stride = layer % (n - 1) + 1;
                for (a, b) in ring(n, stride) {
                    c.push(GateOp::fixed(GateKind::CNOT, &[a, b]))?;
                }
            }
            AnsatzKind::HardwareEfficient => {
                let (ry, rz) = chunk.split_at(n);
                for (q, &theta) in ry.iter().enumerate() {
                    c.push(GateOp::rotation(GateKind::RY, q, &[theta]))?;
                }
                for (q, &theta) in rz.iter().enumerate() {
                    c.push(GateOp::rotation(GateKind::RZ, q, &[theta]))?;
                }
                for q in 0..n - 1 {
                    c.push(GateOp::fixed(GateKind::CNOT, &[q, q + 1]))?;
                }
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{unitary_of, Circuit};

    fn count(c: &Circuit, kind: GateKind) -> usize {
        c.gates().filter(|g| g.kind() == kind).count()
    }

    #[test]
    fn real_amplitudes_gate_counts() {
        let c = build_ansatz(AnsatzKind::RealAmplitudes, 4, 1, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(count(&c, GateKind::RY), 4);
        assert_eq!(count(&c, GateKind::CNOT), 3);
        let s = c.stats();
        assert_eq!((s.n_qubits, s.gate_count), (4, 7));
        assert!(s.depth >= 2);
        assert_eq!(c.block_count(), 1);
    }

    #[test]
    fn strongly_entangling_gate_counts() {
        let params: Vec<f64> = (0..12).map(|i| 0.1 * i as f64 + 0.05).collect();
        let c = build_ansatz(AnsatzKind::StronglyEntangling, 4, 1, &params).unwrap();
        assert_eq!(count(&c, GateKind::U3), 4);
        assert_eq!(count(&c, GateKind::CNOT), 4);
    }

    #[test]
    fn strongly_entangling_stride_cycles() {
        let params = vec![0.3; 3 * 4 * 3];
        let c = build_ansatz(AnsatzKind::StronglyEntangling, 4, 3, &params).unwrap();
        let targets: Vec<(usize, usize)> = c
            .gates()
            .filter(|g| g.kind() == GateKind::CNOT)
            .map(|g| (g.qubits()[0], g.qubits()[1]))
            .collect();
        assert_eq!(&targets[..4], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(&targets[4..8], &[(0, 2), (1, 3), (2, 0), (3, 1)]);
        assert_eq!(&targets[8..], &[(0, 3), (1, 0), (2, 1), (3, 2)]);
        assert_eq!(c.block_count(), 3);
    }

    #[test]
    fn zero_angle_real_amplitudes_is_cnot() {
        let c = build_ansatz(AnsatzKind::RealAmplitudes, 2, 1, &[0.0, 0.0]).unwrap();
        let cnot = crate::circuit::parse_circuit("qubits 2\ncnot 0 1").unwrap();
        let (a, b) = (unitary_of(&c).unwrap(), unitary_of(&cnot).unwrap());
        assert!(a.distance_up_to_phase(&b) < 1e-14);
    }

    #[test]
    fn param_counts_by_family() {
        for (kind, per) in [
            (AnsatzKind::RealAmplitudes, 1),
            (AnsatzKind::EnergyBased, 1),
            (AnsatzKind::StronglyEntangling, 3),
            (AnsatzKind::HardwareEfficient, 2),
        ] {
            for n in 2..6 {
                for d in 1..4 {
                    assert_eq!(kind.param_count(n, d), per * n * d);
                    let c = build_ansatz(kind, n, d, &vec![0.7; per * n * d]).unwrap();
                    assert_eq!(c.block_count(), d);
                }
            }
        }
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(
            build_ansatz(AnsatzKind::RealAmplitudes, 1, 1, &[0.1]),
            Err(CircuitError::TooFewQubits { got: 1, .. })
        ));
        assert!(matches!(
            build_ansatz(AnsatzKind::HardwareEfficient, 3, 1, &[0.1; 3]),
            Err(CircuitError::ParamCount { expected: 6, got: 3, .. })
        ));
        assert_eq!(
            build_ansatz(AnsatzKind::EnergyBased, 3, 0, &[]),
            Err(CircuitError::ZeroDepth)
        );
    }

    #[test]
    fn names_parse_back() {
        for k in AnsatzKind::ALL {
            assert_eq!(k.name().parse::<AnsatzKind>().unwrap(), k);
        }
        assert!("resnet".parse::<AnsatzKind>().is_err());
    }
}
