//! Exact amplitudes of Clifford+T circuits by expanding every T into two
//! Clifford branches.
//!
//! `T = αI + βZ` with `α = (1+ω)/2`, `β = (1-ω)/2`, `ω = e^{iπ/4}`. Pushing
//! each `Z` past the Cliffords that follow it gives Paulis `P_j`, so the final
//! state is `Σ_b Π_j c_j(b_j) · P_t^{b_t} ⋯ P_1^{b_1} · C|0⟩`, a sum of `2^t`
//! terms over one stabilizer state `C|0⟩`.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::pauli::PauliString;
use super::tableau::{Tableau, MAX_DENSE_QUBITS};
use super::SimError;
use crate::circuit::{GateKind, GateOp};

/// Result of a branch expansion.
#[derive(Debug, Clone)]
pub struct BranchExpansion {
    /// Dense amplitudes, qubit `q` is bit `q` of the index.
    pub amplitudes: Vec<Complex64>,
    /// Number of Clifford branches summed; always `2^t`.
    pub terms: u64,
    pub t: usize,
}

#[derive(Clone, Copy)]
struct Mask {
    phase: u8,
    x: u64,
    z: u64,
}

impl Mask {
    fn of(p: &PauliString) -> Mask {
        Mask {
            phase: p.phase(),
            x: p.x_words()[0],
            z: p.z_words()[0],
        }
    }

    fn mul(self, o: Mask) -> Mask {
        let flip = (self.z & o.x).count_ones() % 2;
        Mask {
            phase: (self.phase + o.phase + 2 * flip as u8) % 4,
            x: self.x ^ o.x,
            z: self.z ^ o.z,
        }
    }
}

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

struct Expansion<'a> {
    factors: &'a [(Mask, Complex64, Complex64)],
    support: &'a [(usize, Complex64)],
    out: Vec<Complex64>,
    terms: u64,
}

impl Expansion<'_> {
    /// Visits `P_j` for `j = depth-1 … 0`, accumulating `q = P_t^{b_t} ⋯`.
    fn walk(&mut self, depth: usize, q: Mask, coeff: Complex64) {
        if depth == 0 {
            self.terms += 1;
            let c = coeff * I_POW[q.phase as usize];
            for &(x, amp) in self.support {
                let v = c * amp;
                let v = if (q.z & x as u64).count_ones() % 2 == 1 { -v } else { v };
                self.out[x ^ q.x as usize] += v;
            }
            return;
        }
        let (p, alpha, beta) = self.factors[depth - 1];
        self.walk(depth - 1, q, coeff * alpha);
        self.walk(depth - 1, q.mul(p), coeff * beta);
    }
}

/// Amplitudes of `ops|0…0⟩`. Only Clifford generators and `T`/`Tdg`.
pub fn expand(n: usize, ops: &[GateOp]) -> Result<BranchExpansion, SimError> {
    if n > MAX_DENSE_QUBITS {
        return Err(SimError::TooLarge {
            qubits: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let mut tab = Tableau::new(n);
    let mut paulis: Vec<(PauliString, Complex64, Complex64)> = Vec::new();
    for op in ops {
        match op.kind() {
            GateKind::T | GateKind::Tdg => {
                let angle = if op.kind() == GateKind::T { FRAC_PI_4 } else { -FRAC_PI_4 };
                let w = Complex64::from_polar(1.0, angle);
                let one = Complex64::new(1.0, 0.0);
                paulis.push((
                    PauliString::single(n, op.qubits()[0], GateKind::Z),
                    (one + w) / 2.0,
                    (one - w) / 2.0,
                ));
            }
            _ => {
                tab.apply(op)?;
                for (p, _, _) in &mut paulis {
                    p.conjugate(op.kind(), op.qubits());
                }
            }
        }
    }
    let phi = tab.state_vector()?;
    let support: Vec<(usize, Complex64)> = phi
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 1e-24)
        .map(|(x, a)| (x, *a))
        .collect();
    let factors: Vec<(Mask, Complex64, Complex64)> =
        paulis.iter().map(|(p, a, b)| (Mask::of(p), *a, *b)).collect();
    let t = factors.len();
    // factors[j] is P_{j+1}; the walk starts from the last T
    let mut e = Expansion {
        factors: &factors,
        support: &support,
        out: vec![Complex64::new(0.0, 0.0); 1 << n],
        terms: 0,
    };
    e.walk(t, Mask { phase: 0, x: 0, z: 0 }, Complex64::new(1.0, 0.0));
    assert_eq!(e.terms, 1u64 << t, "branch count must be 2^t");
    Ok(BranchExpansion {
        amplitudes: e.out,
        terms: e.terms,
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_circuit, unitary_of};

    fn ops(text: &str) -> (usize, Vec<GateOp>) {
        let c = parse_circuit(text).unwrap();
        (c.n_qubits(), c.gates().cloned().collect())
    }

    fn check(text: &str) {
        let c = parse_circuit(text).unwrap();
        let (n, g) = ops(text);
        let got = expand(n, &g).unwrap();
        let u = unitary_of(&c).unwrap();
        let want: Vec<Complex64> = (0..1 << n).map(|r| u.get(r, 0)).collect();
        let overlap: Complex64 = want.iter().zip(&got.amplitudes).map(|(a, b)| a.conj() * b).sum();
        let phase = overlap / overlap.norm();
        for (a, b) in want.iter().zip(&got.amplitudes) {
            assert!((a * phase - b).norm() < 1e-12, "{text}");
        }
    }

    #[test]
    fn h_t_h() {
        let (n, g) = ops("qubits 1\nh 0\nt 0\nh 0");
        let e = expand(n, &g).unwrap();
        let p0 = e.amplitudes[0].norm_sqr();
        assert!((p0 - (std::f64::consts::PI / 8.0).cos().powi(2)).abs() < 1e-12);
        assert_eq!(e.terms, 2);
    }

    #[test]
    fn matches_dense_unitaries() {
        check("qubits 2\nh 0\nt 0\ncnot 0 1\ntdg 1\nh 1\ns 0\nt 1\nh 0");
        check("qubits 3\nh 0\nh 1\nt 0\ncz 0 1\nt 1\ncnot 1 2\nh 2\ntdg 2\nx 0\ny 1\nt 0\nh 0");
        check("qubits 1\nt 0\nh 0\nt 0\nh 0\nt 0\nsdg 0\nh 0\nt 0");
    }

    #[test]
    fn clifford_only_has_one_term() {
        let (n, g) = ops("qubits 2\nh 0\ncnot 0 1");
        assert_eq!(expand(n, &g).unwrap().terms, 1);
    }
}
