//! Independent dense state-vector oracle. Gate matrices are written out here
//! from their definitions rather than taken from the library.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use hpcqc::circuit::{Circuit, GateKind, GateOp};
use num_complex::Complex64 as C;

type M2 = [[C; 2]; 2];

fn e(theta: f64) -> C {
    C::from_polar(1.0, theta)
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

fn one_qubit_matrix(kind: GateKind, a: &[f64]) -> M2 {
    let z = re(0.0);
    let o = re(1.0);
    let h = re(FRAC_1_SQRT_2);
    match kind {
        GateKind::H => [[h, h], [h, -h]],
        GateKind::S => [[o, z], [z, C::i()]],
        GateKind::Sdg => [[o, z], [z, -C::i()]],
        GateKind::T => [[o, z], [z, e(PI / 4.0)]],
        GateKind::Tdg => [[o, z], [z, e(-PI / 4.0)]],
        GateKind::X => [[z, o], [o, z]],
        GateKind::Y => [[z, -C::i()], [C::i(), z]],
        GateKind::Z => [[o, z], [z, -o]],
        GateKind::RX => {
            let (c, s) = ((a[0] / 2.0).cos(), (a[0] / 2.0).sin());
            [[re(c), C::new(0.0, -s)], [C::new(0.0, -s), re(c)]]
        }
        GateKind::RY => {
            let (c, s) = ((a[0] / 2.0).cos(), (a[0] / 2.0).sin());
            [[re(c), re(-s)], [re(s), re(c)]]
        }
        GateKind::RZ => [[e(-a[0] / 2.0), z], [z, e(a[0] / 2.0)]],
        GateKind::U1 => [[o, z], [z, e(a[0])]],
        // (λ, φ): U2(0, π) = H
        GateKind::U2 => [[h, -e(a[1]) * h], [e(a[0]) * h, e(a[0] + a[1]) * h]],
        // (θ, φ, γ): U3(π/2, λ, φ) = U2(λ, φ)
        GateKind::U3 => {
            let (c, s) = ((a[0] / 2.0).cos(), (a[0] / 2.0).sin());
            [[re(c), -e(a[2]) * s], [e(a[1]) * s, e(a[1] + a[2]) * c]]
        }
        other => panic!("{other:?} is not a one-qubit gate"),
    }
}

/// Applies a non-measurement gate to `amp` (qubit `q` is bit `q`).
pub fn apply(amp: &mut [C], op: &GateOp) {
    let q = op.qubits();
    match op.kind() {
        GateKind::CNOT => {
            let (c, t) = (1usize << q[0], 1usize << q[1]);
            for i in 0..amp.len() {
                if i & c != 0 && i & t == 0 {
                    amp.swap(i, i | t);
                }
            }
        }
        GateKind::CZ => {
            let m = (1usize << q[0]) | (1usize << q[1]);
            for (i, a) in amp.iter_mut().enumerate() {
                if i & m == m {
                    *a = -*a;
                }
            }
        }
        GateKind::Measure => panic!("apply() takes unitary gates only"),
        kind => {
            let m = one_qubit_matrix(kind, op.angles());
            let b = 1usize << q[0];
            for i in 0..amp.len() {
                if i & b == 0 {
                    let (x, y) = (amp[i], amp[i | b]);
                    amp[i] = m[0][0] * x + m[0][1] * y;
                    amp[i | b] = m[1][0] * x + m[1][1] * y;
                }
            }
        }
    }
}

fn basis(n: usize, index: usize) -> Vec<C> {
    let mut v = vec![re(0.0); 1 << n];
    v[index] = re(1.0);
    v
}

/// Columns of the circuit unitary: `cols[j] = U|j⟩`.
pub fn unitary_columns(circuit: &Circuit) -> Vec<Vec<C>> {
    let n = circuit.n_qubits();
    (0..1usize << n)
        .map(|j| {
            let mut v = basis(n, j);
            for g in circuit.gates() {
                apply(&mut v, g);
            }
            v
        })
        .collect()
}

/// `|tr(U†V)| / 2^n`.
pub fn trace_fidelity(u: &[Vec<C>], v: &[Vec<C>]) -> f64 {
    let dim = u.len() as f64;
    let tr: C = u
        .iter()
        .zip(v)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C>())
        .sum();
    tr.norm() / dim
}

/// Exact distribution over measurement records. Without measurements every
/// qubit is read at the end, qubit 0 first. Mid-circuit measurements branch.
pub fn outcome_distribution(circuit: &Circuit) -> BTreeMap<String, f64> {
    let n = circuit.n_qubits();
    let mut ops: Vec<GateOp> = circuit.gates().cloned().collect();
    if !ops.iter().any(GateOp::is_measure) {
        for q in 0..n {
            ops.push(GateOp::fixed(GateKind::Measure, &[q]));
        }
    }
    let mut out = BTreeMap::new();
    walk(&ops, basis(n, 0), 1.0, String::new(), &mut out);
    out
}

fn walk(ops: &[GateOp], mut amp: Vec<C>, weight: f64, record: String, out: &mut BTreeMap<String, f64>) {
    for (i, g) in ops.iter().enumerate() {
        if !g.is_measure() {
            apply(&mut amp, g);
            continue;
        }
        let b = 1usize << g.qubits()[0];
        let p1: f64 = amp.iter().enumerate().filter(|(k, _)| k & b != 0).map(|(_, a)| a.norm_sqr()).sum();
        for (bit, p) in [(0usize, 1.0 - p1), (1usize, p1)] {
            if p < 1e-14 {
                continue;
            }
            let scale = 1.0 / p.sqrt();
            let branch: Vec<C> = amp
                .iter()
                .enumerate()
                .map(|(k, a)| if (k & b != 0) as usize == bit { a * scale } else { re(0.0) })
                .collect();
            let mut r = record.clone();
            r.push(if bit == 1 { '1' } else { '0' });
            walk(&ops[i + 1..], branch, weight * p, r, out);
        }
        return;
    }
    *out.entry(record).or_default() += weight;
}

/// Total-variation distance between sampled counts and exact probabilities.
pub fn tv_distance(counts: &BTreeMap<String, u64>, probs: &BTreeMap<String, f64>) -> f64 {
    let shots: u64 = counts.values().sum();
    let mut keys: Vec<&String> = counts.keys().chain(probs.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.iter()
        .map(|k| {
            let f = counts.get(*k).copied().unwrap_or(0) as f64 / shots as f64;
            (f - probs.get(*k).copied().unwrap_or(0.0)).abs()
        })
        .sum::<f64>()
        / 2.0
}

/// Expected TV of an `shots`-sample empirical distribution from `probs`:
/// `½ Σ E|p̂ - p|` with the normal approximation `E|p̂ - p| ≈ √(2p(1-p)/(πN))`.
pub fn expected_sampling_tv(probs: &BTreeMap<String, f64>, shots: u64) -> f64 {
    probs
        .values()
        .map(|&p| (2.0 * p * (1.0 - p)).max(0.0) / (PI * shots as f64))
        .map(f64::sqrt)
        .sum::<f64>()
        / 2.0
}
