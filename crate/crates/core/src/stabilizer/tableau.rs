//! CHP stabilizer tableau.
//!
//! A tableau is a plain owned value. Apply gates and measurements through
//! `&mut self` from one worker at a time; to fan out shots, clone it.

use num_complex::Complex64;
use rand::Rng;

use super::pauli::PauliString;
use super::SimError;
use crate::circuit::{GateKind, GateOp};

/// Largest register for which [`Tableau::state_vector`] is allowed.
pub const MAX_DENSE_QUBITS: usize = 20;

/// `2n` generator rows (destabilizers `0..n`, stabilizers `n..2n`) plus one
/// scratch row. Row `i` is `(-1)^{r_i} ⊗_j P(x_ij, z_ij)` with `(1, 1) = Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    w: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

impl Tableau {
    /// `|0…0⟩`: destabilizers `X_i`, stabilizers `Z_i`.
    pub fn new(n: usize) -> Self {
        let w = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut t = Tableau {
            n,
            w,
            x: vec![0; rows * w],
            z: vec![0; rows * w],
            r: vec![false; rows],
        };
        for i in 0..n {
            t.x[i * w + i / 64] |= 1 << (i % 64);
            t.z[(i + n) * w + i / 64] |= 1 << (i % 64);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(v: &[u64], w: usize, row: usize, q: usize) -> bool {
        v[row * w + q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    fn xb(&self, row: usize, q: usize) -> bool {
        Self::bit(&self.x, self.w, row, q)
    }

    fn for_rows(&mut self, q: usize, mut f: impl FnMut(&mut u64, &mut u64, &mut bool, u64)) {
        let (wi, m) = (q / 64, 1u64 << (q % 64));
        for row in 0..2 * self.n {
            let idx = row * self.w + wi;
            let (mut xw, mut zw) = (self.x[idx], self.z[idx]);
            f(&mut xw, &mut zw, &mut self.r[row], m);
            self.x[idx] = xw;
            self.z[idx] = zw;
        }
    }

    pub fn h(&mut self, q: usize) {
        self.for_rows(q, |x, z, r, m| {
            let (xb, zb) = (*x & m, *z & m);
            *r ^= xb != 0 && zb != 0;
            *x = (*x & !m) | zb;
            *z = (*z & !m) | xb;
        });
    }

    pub fn s(&mut self, q: usize) {
        self.for_rows(q, |x, z, r, m| {
            *r ^= (*x & *z & m) != 0;
            *z ^= *x & m;
        });
    }

    pub fn sdg(&mut self, q: usize) {
        self.for_rows(q, |x, z, r, m| {
            *r ^= (*x & !*z & m) != 0;
            *z ^= *x & m;
        });
    }

    pub fn x(&mut self, q: usize) {
        self.for_rows(q, |_, z, r, m| *r ^= (*z & m) != 0);
    }

    pub fn z(&mut self, q: usize) {
        self.for_rows(q, |x, _, r, m| *r ^= (*x & m) != 0);
    }

    pub fn y(&mut self, q: usize) {
        self.for_rows(q, |x, z, r, m| *r ^= ((*x ^ *z) & m) != 0);
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let w = self.w;
        let (cw, cm) = (c / 64, 1u64 << (c % 64));
        let (tw, tm) = (t / 64, 1u64 << (t % 64));
        for row in 0..2 * self.n {
            let (ci, ti) = (row * w + cw, row * w + tw);
            let xc = self.x[ci] & cm != 0;
            let zc = self.z[ci] & cm != 0;
            let xt = self.x[ti] & tm != 0;
            let zt = self.z[ti] & tm != 0;
            self.r[row] ^= xc && zt && (xt == zc);
            if xc {
                self.x[ti] ^= tm;
            }
            if zt {
                self.z[ci] ^= cm;
            }
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        self.h(b);
        self.cnot(a, b);
        self.h(b);
    }

    /// Applies one Clifford generator. Rejects every other kind.
    pub fn apply(&mut self, gate: &GateOp) -> Result<(), SimError> {
        let q = gate.qubits();
        match gate.kind() {
            GateKind::H => self.h(q[0]),
            GateKind::S => self.s(q[0]),
            GateKind::Sdg => self.sdg(q[0]),
            GateKind::X => self.x(q[0]),
            GateKind::Y => self.y(q[0]),
            GateKind::Z => self.z(q[0]),
            GateKind::CNOT => self.cnot(q[0], q[1]),
            GateKind::CZ => self.cz(q[0], q[1]),
            _ => return Err(SimError::NotClifford(gate.to_string())),
        }
        Ok(())
    }

    /// `row h ← row i · row h` with CHP phase tracking.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.w;
        let (mut plus, mut minus) = (0u32, 0u32);
        for k in 0..w {
            let (x1, z1) = (self.x[i * w + k], self.z[i * w + k]);
            let (x2, z2) = (self.x[h * w + k], self.z[h * w + k]);
            let y1 = x1 & z1;
            let xo = x1 & !z1;
            let zo = !x1 & z1;
            plus += ((y1 & z2 & !x2) | (xo & z2 & x2) | (zo & x2 & !z2)).count_ones();
            minus += ((y1 & x2 & !z2) | (xo & z2 & !x2) | (zo & x2 & z2)).count_ones();
            self.x[h * w + k] = x1 ^ x2;
            self.z[h * w + k] = z1 ^ z2;
        }
        let total = 2 * (self.r[h] as i64 + self.r[i] as i64) + plus as i64 - minus as i64;
        self.r[h] = total.rem_euclid(4) == 2;
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.w;
        self.x.copy_within(src * w..src * w + w, dst * w);
        self.z.copy_within(src * w..src * w + w, dst * w);
        self.r[dst] = self.r[src];
    }

    fn clear_row(&mut self, row: usize) {
        let w = self.w;
        self.x[row * w..row * w + w].fill(0);
        self.z[row * w..row * w + w].fill(0);
        self.r[row] = false;
    }

    /// Outcome of measuring `q` in the Z basis if it is determined.
    pub fn deterministic_outcome(&self, q: usize) -> Option<bool> {
        let n = self.n;
        if (n..2 * n).any(|p| self.xb(p, q)) {
            return None;
        }
        let mut scratch = self.clone();
        scratch.clear_row(2 * n);
        for i in 0..n {
            if self.xb(i, q) {
                scratch.rowsum(2 * n, i + n);
            }
        }
        Some(scratch.r[2 * n])
    }

    /// Z-basis measurement. `coin` is consulted only for a random outcome.
    pub fn measure_with(&mut self, q: usize, coin: impl FnOnce() -> bool) -> bool {
        let n = self.n;
        match (n..2 * n).find(|&p| self.xb(p, q)) {
            Some(p) => {
                for i in 0..2 * n {
                    if i != p && self.xb(i, q) {
                        self.rowsum(i, p);
                    }
                }
                self.copy_row(p - n, p);
                self.clear_row(p);
                let outcome = coin();
                self.r[p] = outcome;
                self.z[p * self.w + q / 64] |= 1 << (q % 64);
                outcome
            }
            None => {
                self.clear_row(2 * n);
                for i in 0..n {
                    if self.xb(i, q) {
                        self.rowsum(2 * n, i + n);
                    }
                }
                self.r[2 * n]
            }
        }
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> bool {
        self.measure_with(q, || rng.gen::<bool>())
    }

    fn row_pauli(&self, row: usize) -> PauliString {
        let w = self.w;
        let x = self.x[row * w..row * w + w].to_vec();
        let z = self.z[row * w..row * w + w].to_vec();
        let ys: u32 = x.iter().zip(&z).map(|(a, b)| (a & b).count_ones()).sum();
        // Y = i·XZ
        let phase = (2 * self.r[row] as u32 + ys) % 4;
        PauliString::from_parts(self.n, phase as u8, x, z)
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|i| self.row_pauli(i)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.row_pauli(i)).collect()
    }

    /// Stabilizers commute pairwise, destabilizers commute pairwise, and
    /// destabilizer `i` anticommutes exactly with stabilizer `i`.
    pub fn is_valid(&self) -> bool {
        let (s, d) = (self.stabilizers(), self.destabilizers());
        for i in 0..self.n {
            for j in 0..self.n {
                if !s[i].commutes_with(&s[j]) || !d[i].commutes_with(&d[j]) {
                    return false;
                }
                if d[i].commutes_with(&s[j]) != (i != j) {
                    return false;
                }
            }
        }
        true
    }

    /// Dense amplitudes of the stabilized state, up to global phase.
    ///
    /// A basis state in the support is found by measuring a copy with every
    /// random outcome forced to 0; projecting it onto each stabilizer's +1
    /// eigenspace then yields the state.
    pub fn state_vector(&self) -> Result<Vec<Complex64>, SimError> {
        let n = self.n;
        if n > MAX_DENSE_QUBITS {
            return Err(SimError::TooLarge {
                qubits: n,
                max: MAX_DENSE_QUBITS,
            });
        }
        let mut probe = self.clone();
        let mut x0 = 0usize;
        for q in 0..n {
            if probe.measure_with(q, || false) {
                x0 |= 1 << q;
            }
        }
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[x0] = Complex64::new(1.0, 0.0);
        let mut scratch = vec![Complex64::new(0.0, 0.0); 1 << n];
        for g in self.stabilizers() {
            apply_pauli(&g, &v, &mut scratch);
            for (a, b) in v.iter_mut().zip(&scratch) {
                *a = (*a + b) * 0.5;
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut v {
            *a /= norm;
        }
        Ok(v)
    }
}

/// `out ← P · v` for a dense vector (qubit `q` is bit `q` of the index).
pub fn apply_pauli(p: &PauliString, v: &[Complex64], out: &mut [Complex64]) {
    let a = p.x_words()[0] as usize;
    let b = p.z_words()[0] as usize;
    let ph = Complex64::i().powu(p.phase() as u32);
    for (x, amp) in v.iter().enumerate() {
        let sign = if (b & x).count_ones() % 2 == 1 { -ph } else { ph };
        out[x ^ a] = sign * amp;
    }
}
