//! Seeded random circuits for tests and benchmarks.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, GateKind, GateOp};

const CLIFFORD_1Q: [GateKind; 6] = [
    GateKind::H,
    GateKind::S,
    GateKind::Sdg,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
];

fn two_distinct<R: Rng>(n: usize, rng: &mut R) -> [usize; 2] {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    [a, b]
}

fn clifford_gate<R: Rng>(n: usize, rng: &mut R) -> GateOp {
    if n >= 2 && rng.gen_bool(0.3) {
        let kind = if rng.gen_bool(0.5) { GateKind::CNOT } else { GateKind::CZ };
        GateOp::fixed(kind, &two_distinct(n, rng))
    } else {
        let kind = *CLIFFORD_1Q.choose(rng).expect("non-empty");
        GateOp::fixed(kind, &[rng.gen_range(0..n)])
    }
}

fn build(n: usize, gates: Vec<GateOp>) -> Circuit {
    let mut c = Circuit::new(n).expect("n >= 1");
    for g in gates {
        c.push(g).expect("generated gates are valid");
    }
    c
}

/// `m` gates drawn from H, S, Sdg, X, Y, Z, CNOT, CZ.
pub fn clifford_circuit<R: Rng>(n: usize, m: usize, rng: &mut R) -> Circuit {
    build(n, (0..m).map(|_| clifford_gate(n, rng)).collect())
}

/// `m` Clifford gates with `t` T/Tdg gates inserted at random positions.
pub fn low_t_circuit<R: Rng>(n: usize, m: usize, t: usize, rng: &mut R) -> Circuit {
    let mut gates: Vec<GateOp> = (0..m).map(|_| clifford_gate(n, rng)).collect();
    for _ in 0..t {
        let kind = if rng.gen_bool(0.5) { GateKind::T } else { GateKind::Tdg };
        let at = rng.gen_range(0..=gates.len());
        gates.insert(at, GateOp::fixed(kind, &[rng.gen_range(0..n)]));
    }
    build(n, gates)
}

/// Angle that is a multiple of π/4 with probability `p_grid`, else uniform.
fn angle<R: Rng>(rng: &mut R, p_grid: f64) -> f64 {
    if rng.gen_bool(p_grid) {
        rng.gen_range(0..8) as f64 * TAU / 8.0
    } else {
        rng.gen_range(0.0..TAU)
    }
}

/// Every gate kind except `Measure`, with random angles (a quarter of them on
/// the π/4 grid so exact lowering paths are exercised too).
pub fn mixed_circuit<R: Rng>(n: usize, m: usize, rng: &mut R) -> Circuit {
    let kinds: Vec<GateKind> = GateKind::ALL
        .iter()
        .copied()
        .filter(|k| *k != GateKind::Measure && (n >= 2 || k.qubit_arity() == 1))
        .collect();
    let gates = (0..m)
        .map(|_| {
            let kind = *kinds.choose(rng).expect("non-empty");
            let qubits: Vec<usize> = if kind.qubit_arity() == 2 {
                two_distinct(n, rng).to_vec()
            } else {
                vec![rng.gen_range(0..n)]
            };
            let angles = (0..kind.angle_arity()).map(|_| angle(rng, 0.25)).collect();
            GateOp::new(kind, qubits, angles).expect("valid by construction")
        })
        .collect();
    build(n, gates)
}

/// Uniform angles in `[0, 2π)`.
pub fn random_params<R: Rng>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count).map(|_| rng.gen_range(0.0..TAU)).collect()
}
