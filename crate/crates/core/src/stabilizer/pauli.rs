use std::fmt;

use crate::circuit::GateKind;

/// `i^phase · X^x · Z^z` over `n` qubits, bit-packed 64 qubits per word.
///
/// On a single qubit `x = z = 1` is `XZ = -iY`, so `Y` itself carries
/// `phase = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    phase: u8,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            phase: 0,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
        }
    }

    /// `X`, `Y` or `Z` on one qubit. Panics for other kinds.
    pub fn single(n: usize, qubit: usize, kind: GateKind) -> Self {
        let mut p = PauliString::identity(n);
        match kind {
            GateKind::X => p.set(qubit, true, false),
            GateKind::Z => p.set(qubit, false, true),
            GateKind::Y => {
                p.set(qubit, true, true);
                p.phase = 1;
            }
            other => panic!("{other} is not a Pauli"),
        }
        p
    }

    pub fn from_parts(n: usize, phase: u8, x: Vec<u64>, z: Vec<u64>) -> Self {
        assert_eq!(x.len(), words(n));
        assert_eq!(z.len(), words(n));
        PauliString {
            n,
            phase: phase % 4,
            x,
            z,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    fn set(&mut self, q: usize, x: bool, z: bool) {
        let (w, m) = (q / 64, 1u64 << (q % 64));
        self.x[w] = (self.x[w] & !m) | if x { m } else { 0 };
        self.z[w] = (self.z[w] & !m) | if z { m } else { 0 };
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// `self · other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.mul_assign_right(other);
        out
    }

    /// `self ← self · other`.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        debug_assert_eq!(self.n, other.n);
        // Z^b1 X^a2 = (-1)^{b1·a2} X^a2 Z^b1
        let flips: u32 = self
            .z
            .iter()
            .zip(&other.x)
            .map(|(b, a)| (b & a).count_ones())
            .sum();
        self.phase = (self.phase + other.phase + 2 * (flips % 2) as u8) % 4;
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let s: u32 = self
            .x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .map(|((x1, z1), (x2, z2))| ((x1 & z2) ^ (z1 & x2)).count_ones())
            .sum();
        s % 2 == 0
    }

    /// Conjugates in place: `self ← G · self · G†`. Returns `false` (leaving
    /// `self` untouched) when `kind` is not a Clifford generator handled here.
    pub fn conjugate(&mut self, kind: GateKind, qubits: &[usize]) -> bool {
        let q = qubits[0];
        let (a, b) = (self.x_bit(q) as u8, self.z_bit(q) as u8);
        match kind {
            GateKind::H => {
                self.phase = (self.phase + 2 * (a & b)) % 4;
                self.set(q, b == 1, a == 1);
            }
            GateKind::S => {
                self.phase = (self.phase + a) % 4;
                self.set(q, a == 1, (a ^ b) == 1);
            }
            GateKind::Sdg => {
                self.phase = (self.phase + 3 * a) % 4;
                self.set(q, a == 1, (a ^ b) == 1);
            }
            GateKind::X => self.phase = (self.phase + 2 * b) % 4,
            GateKind::Z => self.phase = (self.phase + 2 * a) % 4,
            GateKind::Y => self.phase = (self.phase + 2 * (a ^ b)) % 4,
            GateKind::CNOT => {
                let t = qubits[1];
                let (at, bt) = (self.x_bit(t), self.z_bit(t));
                self.set(t, at ^ (a == 1), bt);
                self.set(q, a == 1, (b == 1) ^ bt);
            }
            GateKind::CZ => {
                let t = qubits[1];
                let (at, bt) = (self.x_bit(t), self.z_bit(t));
                self.phase = (self.phase + 2 * (a & at as u8)) % 4;
                self.set(q, a == 1, (b == 1) ^ at);
                self.set(t, at, bt ^ (a == 1));
            }
            _ => return false,
        }
        true
    }
}

impl fmt::Display for PauliString {
    /// Sign then one letter per qubit, qubit 0 first, e.g. `-XIZ` or `+iY`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // rewrite X^a Z^b with Y letters: XZ = -iY, so each Y adds i
        let ys: u32 = self
            .x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        let phase = (self.phase as u32 + 3 * ys) % 4;
        f.write_str(["+", "+i", "-", "-i"][phase as usize])?;
        for q in 0..self.n {
            f.write_str(match (self.x_bit(q), self.z_bit(q)) {
                (false, false) => "I",
                (true, false) => "X",
                (false, true) => "Z",
                (true, true) => "Y",
            })?;
        }
        Ok(())
    }
}
