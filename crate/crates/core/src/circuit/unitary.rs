//! Dense unitaries for small circuits. Used as a test oracle.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use super::{Circuit, CircuitError, GateKind, GateOp};

/// Largest register `unitary_of` accepts.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub const MAT2_IDENTITY: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];

/// Matrix of a single-qubit gate. `None` for two-qubit gates and measurement.
///
/// `U1(λ) = diag(1, e^{iλ})`, `U2(λ, φ) = [[1, -e^{iφ}], [e^{iλ}, e^{i(λ+φ)}]]/√2`,
/// `U3(θ, φ, γ) = [[cos θ/2, -e^{iγ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+γ)} cos θ/2]]`,
/// so that `U3(π/2, λ, φ) = U2(λ, φ)`.
pub fn gate_matrix(gate: &GateOp) -> Option<Mat2> {
    let a = gate.angles();
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let m = match gate.kind() {
        GateKind::U1 => [[one, zero], [zero, phase(a[0])]],
        GateKind::U2 => {
            let (l, p) = (a[0], a[1]);
            let s = FRAC_1_SQRT_2;
            [
                [c(s, 0.0), -phase(p) * s],
                [phase(l) * s, phase(l + p) * s],
            ]
        }
        GateKind::U3 => {
            let (theta, p, g) = (a[0], a[1], a[2]);
            let (sn, cs) = (theta / 2.0).sin_cos();
            [
                [c(cs, 0.0), -phase(g) * sn],
                [phase(p) * sn, phase(p + g) * cs],
            ]
        }
        GateKind::H => {
            let s = FRAC_1_SQRT_2;
            [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
        }
        GateKind::S => [[one, zero], [zero, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, zero], [zero, c(0.0, -1.0)]],
        GateKind::T => [[one, zero], [zero, phase(FRAC_PI_4)]],
        GateKind::Tdg => [[one, zero], [zero, phase(-FRAC_PI_4)]],
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z => [[one, zero], [zero, -one]],
        GateKind::RX => {
            let (sn, cs) = (a[0] / 2.0).sin_cos();
            [[c(cs, 0.0), c(0.0, -sn)], [c(0.0, -sn), c(cs, 0.0)]]
        }
        GateKind::RY => {
            let (sn, cs) = (a[0] / 2.0).sin_cos();
            [[c(cs, 0.0), c(-sn, 0.0)], [c(sn, 0.0), c(cs, 0.0)]]
        }
        GateKind::RZ => [[phase(-a[0] / 2.0), zero], [zero, phase(a[0] / 2.0)]],
        GateKind::CNOT | GateKind::CZ | GateKind::Measure => return None,
    };
    Some(m)
}

/// Square complex matrix, row-major. Basis index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0, 0.0);
        }
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    fn row_pair(&mut self, r0: usize, r1: usize) -> (&mut [Complex64], &mut [Complex64]) {
        debug_assert!(r0 < r1);
        let d = self.dim;
        let (lo, hi) = self.data.split_at_mut(r1 * d);
        (&mut lo[r0 * d..r0 * d + d], &mut hi[..d])
    }

    /// Left-multiplies by a single-qubit gate on `qubit`.
    pub fn apply_1q(&mut self, m: &Mat2, qubit: usize) {
        let bit = 1 << qubit;
        for r0 in 0..self.dim {
            if r0 & bit != 0 {
                continue;
            }
            let (a, b) = self.row_pair(r0, r0 | bit);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = m[0][0] * u + m[0][1] * v;
                *y = m[1][0] * u + m[1][1] * v;
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1 << control, 1 << target);
        for r in 0..self.dim {
            if r & cb != 0 && r & tb == 0 {
                let (a, b) = self.row_pair(r, r | tb);
                a.swap_with_slice(b);
            }
        }
    }

    pub fn apply_cz(&mut self, q0: usize, q1: usize) {
        let mask = (1 << q0) | (1 << q1);
        let d = self.dim;
        for r in 0..d {
            if r & mask == mask {
                for v in &mut self.data[r * d..r * d + d] {
                    *v = -*v;
                }
            }
        }
    }

    /// `tr(self† · other)`.
    pub fn adjoint_trace_with(&self, other: &DenseMatrix) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|tr(self† · other)| / dim`: 1 exactly when equal up to global phase.
    pub fn phase_fidelity(&self, other: &DenseMatrix) -> f64 {
        self.adjoint_trace_with(other).norm() / self.dim as f64
    }

    /// `max |(self† self - I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut acc = c(0.0, 0.0);
                for k in 0..d {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc -= c(1.0, 0.0);
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Largest entrywise distance after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &DenseMatrix) -> f64 {
        let tr = self.adjoint_trace_with(other);
        let rot = if tr.norm() > 0.0 { tr.conj() / tr.norm() } else { c(1.0, 0.0) };
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b * rot).norm())
            .fold(0.0, f64::max)
    }
}

/// Product of all gate matrices in program order.
pub fn unitary_of(circuit: &Circuit) -> Result<DenseMatrix, CircuitError> {
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(CircuitError::TooLarge {
            max: MAX_UNITARY_QUBITS,
            got: n,
        });
    }
    if circuit.gates().any(|g| g.is_measure()) {
        return Err(CircuitError::MeasureInUnitary);
    }
    let mut u = DenseMatrix::identity(1 << n);
    for g in circuit.gates() {
        let q = g.qubits();
        match g.kind() {
            GateKind::CNOT => u.apply_cnot(q[0], q[1]),
            GateKind::CZ => u.apply_cz(q[0], q[1]),
            _ => {
                let m = gate_matrix(g).expect("single-qubit gate");
                u.apply_1q(&m, q[0]);
            }
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use std::f64::consts::PI;

    fn close(a: &Mat2, b: &Mat2) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x - y).norm() < 1e-14)
    }

    fn m(kind: GateKind, angles: &[f64]) -> Mat2 {
        gate_matrix(&GateOp::new(kind, vec![0], angles.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn named_gates_from_u_family() {
        assert!(close(&m(GateKind::U1, &[PI / 4.0]), &m(GateKind::T, &[])));
        assert!(close(&m(GateKind::U1, &[PI / 2.0]), &m(GateKind::S, &[])));
        assert!(close(&m(GateKind::U2, &[0.0, PI]), &m(GateKind::H, &[])));
    }

    #[test]
    fn u3_reduces_to_u2_at_half_pi() {
        let (l, p) = (0.37, 1.9);
        assert!(close(&m(GateKind::U3, &[PI / 2.0, l, p]), &m(GateKind::U2, &[l, p])));
    }

    #[test]
    fn single_qubit_t_is_diag_phase() {
        let circ = parse_circuit("qubits 1\nu1(pi/4) 0").unwrap();
        let u = unitary_of(&circ).unwrap();
        assert!((u.get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((u.get(1, 1) - phase(PI / 4.0)).norm() < 1e-15);
        assert_eq!(u.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn hadamard_from_u2() {
        let circ = parse_circuit("qubits 1\nu2(0, pi) 0").unwrap();
        let u = unitary_of(&circ).unwrap();
        let s = FRAC_1_SQRT_2;
        for (r, col, v) in [(0, 0, s), (0, 1, s), (1, 0, s), (1, 1, -s)] {
            assert!((u.get(r, col) - c(v, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        let circ = Circuit::new(2).unwrap();
        assert_eq!(unitary_of(&circ).unwrap(), DenseMatrix::identity(4));
    }

    #[test]
    fn cnot_little_endian() {
        // control 0, target 1: |01> (index 1) -> |11> (index 3)
        let circ = parse_circuit("qubits 2\ncnot 0 1").unwrap();
        let u = unitary_of(&circ).unwrap();
        assert_eq!(u.get(3, 1), c(1.0, 0.0));
        assert_eq!(u.get(2, 2), c(1.0, 0.0));
    }

    #[test]
    fn rejects_measure_and_large() {
        let circ = parse_circuit("qubits 1\nmeasure 0").unwrap();
        assert_eq!(unitary_of(&circ), Err(CircuitError::MeasureInUnitary));
        let big = Circuit::new(13).unwrap();
        assert!(matches!(unitary_of(&big), Err(CircuitError::TooLarge { .. })));
    }
}
