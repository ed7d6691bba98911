//! Breadth-first enumeration of single-qubit Clifford+T words.
//!
//! Every Clifford+T unitary has a unique normal form `P · C` where the prefix
//! `P` matches `(T | ε)(HT | SHT)*` and `C` is one of the 24 single-qubit
//! Cliffords; the number of `T` letters in `P` is the minimal T-count. Level
//! `k` holds the `3·2^(k-1)` prefixes with exactly `k` T gates, so scanning
//! levels in order visits unitaries by increasing T-count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{gate_matrix, mat2_adjoint, mat2_mul, GateKind, GateOp, Mat2, MAT2_IDENTITY};

/// Deepest level the table will grow to.
pub const MAX_LEVEL: usize = 22;

/// Distance below which two unitaries are treated as equal.
pub const EXACT_TOL: f64 = 1e-6;

/// Prefix levels indexed for the two-sided approximate search.
pub const SPLIT_LEVEL: usize = 18;

/// Longest middle segment tried by the two-sided search.
pub const MIDDLE_LEVEL: usize = 16;

fn fixed(kind: GateKind) -> Mat2 {
    gate_matrix(&GateOp::fixed(kind, &[0])).expect("single-qubit gate")
}

/// `|tr(a† b)| / 2`.
pub fn overlap(a: &Mat2, b: &Mat2) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += a[i][j].conj() * b[i][j];
        }
    }
    acc.norm() / 2.0
}

/// Operator-norm distance minimized over global phase, from the overlap.
pub fn distance_from_overlap(f: f64) -> f64 {
    (2.0 - 2.0 * f.min(1.0)).max(0.0).sqrt()
}

pub fn phase_distance(a: &Mat2, b: &Mat2) -> f64 {
    distance_from_overlap(overlap(a, b))
}

/// A single-qubit Clifford with its shortest `{H, S, Sdg}` word in circuit order.
#[derive(Debug, Clone)]
pub struct CliffordEntry {
    pub matrix: Mat2,
    pub word: Vec<GateKind>,
}

/// Best match found at the lowest level that meets the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match {
    pub level: usize,
    pub prefix: usize,
    pub clifford: usize,
    pub distance: f64,
}

/// Result of the two-sided search: `P · W · C ≈ target` with `P` an indexed
/// prefix, `W ∈ {HT, SHT}^middle_len` and `C` a Clifford. The product is
/// itself a normal form with T-count `prefix_level + middle_len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitMatch {
    pub prefix_level: usize,
    pub prefix: usize,
    pub middle_len: usize,
    pub middle: usize,
    pub clifford: usize,
    pub distance: f64,
}

impl SplitMatch {
    pub fn t_count(&self) -> usize {
        self.prefix_level + self.middle_len
    }
}

/// Unit quaternion of `u` with the global phase removed; defined up to sign.
pub fn quaternion(u: &Mat2) -> [f64; 4] {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let r = det.sqrt();
    let (a, b) = (u[0][0] / r, u[1][0] / r);
    let d = u[1][1] / r;
    [(a.re + d.re) / 2.0, -b.im, b.re, (d.im - a.im) / 2.0]
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

type Cell = [i32; 4];

fn pack(level: usize, prefix: usize) -> u32 {
    level as u32 | (prefix as u32) << 5
}

fn unpack(code: u32) -> (usize, usize) {
    ((code & 31) as usize, (code >> 5) as usize)
}

/// Spatial hash of all prefixes up to [`SPLIT_LEVEL`], cell edge = tolerance.
struct Grid {
    cell: f64,
    points: Arc<Vec<([f64; 4], u32)>>,
    /// `(cell, point index)` sorted by cell.
    cells: Vec<(Cell, u32)>,
}

impl Grid {
    fn build(points: Arc<Vec<([f64; 4], u32)>>, cell: f64) -> Self {
        let key = |q: &[f64; 4]| q.map(|x| (x / cell).floor() as i32);
        let mut cells: Vec<(Cell, u32)> = points
            .par_iter()
            .enumerate()
            .map(|(i, (q, _))| (key(q), i as u32))
            .collect();
        cells.par_sort_unstable();
        Grid {
            cell,
            points,
            cells,
        }
    }

    fn key(&self, q: &[f64; 4]) -> Cell {
        q.map(|x| (x / self.cell).floor() as i32)
    }

    fn bucket(&self, k: &Cell) -> &[(Cell, u32)] {
        let lo = self.cells.partition_point(|(c, _)| c < k);
        let hi = lo + self.cells[lo..].partition_point(|(c, _)| c == k);
        &self.cells[lo..hi]
    }

    /// Closest indexed point to `q` or `-q` within chord distance `tol`.
    fn nearest(&self, q: &[f64; 4], tol: f64) -> Option<(f64, u32)> {
        let mut best: Option<(f64, u32)> = None;
        for sign in [1.0, -1.0] {
            let q = q.map(|x| sign * x);
            let base = self.key(&q);
            for offs in 0..81 {
                let mut k = base;
                let mut o = offs;
                for c in &mut k {
                    *c += (o % 3) as i32 - 1;
                    o /= 3;
                }
                for &(_, id) in self.bucket(&k) {
                    let f = dot(&self.points[id as usize].0, &q).abs();
                    let d = distance_from_overlap(f);
                    if d <= tol && best.map_or(true, |(bd, bid)| d < bd || (d == bd && id < bid)) {
                        best = Some((d, id));
                    }
                }
            }
        }
        best
    }
}

pub struct WordTable {
    cliffords: Vec<CliffordEntry>,
    levels: RwLock<Vec<Vec<Mat2>>>,
    ht: Mat2,
    sht: Mat2,
    split_points: OnceLock<Arc<Vec<([f64; 4], u32)>>>,
    middles: RwLock<Vec<Vec<Mat2>>>,
    grids: Mutex<HashMap<u64, Arc<Grid>>>,
}

impl WordTable {
    /// Process-wide table, grown on demand.
    pub fn global() -> &'static WordTable {
        static TABLE: OnceLock<WordTable> = OnceLock::new();
        TABLE.get_or_init(WordTable::new)
    }

    fn new() -> Self {
        let (h, s, t) = (fixed(GateKind::H), fixed(GateKind::S), fixed(GateKind::T));
        let ht = mat2_mul(&h, &t);
        let sht = mat2_mul(&s, &ht);
        WordTable {
            cliffords: enumerate_cliffords(),
            levels: RwLock::new(vec![vec![MAT2_IDENTITY], vec![t, ht, sht]]),
            ht,
            sht,
            split_points: OnceLock::new(),
            middles: RwLock::new(vec![vec![MAT2_IDENTITY]]),
            grids: Mutex::new(HashMap::new()),
        }
    }

    pub fn cliffords(&self) -> &[CliffordEntry] {
        &self.cliffords
    }

    fn ensure_level(&self, level: usize) {
        if self.levels.read().expect("table lock").len() > level {
            return;
        }
        let mut levels = self.levels.write().expect("table lock");
        while levels.len() <= level {
            let prev = levels.last().expect("seeded levels");
            let next: Vec<Mat2> = prev
                .par_iter()
                .flat_map_iter(|p| [mat2_mul(p, &self.ht), mat2_mul(p, &self.sht)])
                .collect();
            levels.push(next);
        }
    }

    /// Number of distinct unitaries with T-count exactly `level`.
    pub fn level_size(level: usize) -> usize {
        24 * if level == 0 { 1 } else { 3 << (level - 1) }
    }

    /// Scans levels `0..=max_level` and returns the closest word in the first
    /// level that has one within `tol` of `target` (up to global phase).
    pub fn find(&self, target: &Mat2, tol: f64, max_level: usize) -> Option<Match> {
        let max_level = max_level.min(MAX_LEVEL);
        let target_adj = mat2_adjoint(target);
        for level in 0..=max_level {
            self.ensure_level(level);
            let levels = self.levels.read().expect("table lock");
            let prefixes = &levels[level];
            let best = prefixes
                .par_iter()
                .enumerate()
                .with_min_len(512)
                .filter_map(|(i, p)| {
                    let m = mat2_mul(&target_adj, p);
                    let mut local: Option<(f64, usize)> = None;
                    for (ci, c) in self.cliffords.iter().enumerate() {
                        let c = &c.matrix;
                        let tr = m[0][0] * c[0][0] + m[0][1] * c[1][0] + m[1][0] * c[0][1] + m[1][1] * c[1][1];
                        let f = tr.norm() / 2.0;
                        if local.map_or(true, |(bf, _)| f > bf) {
                            local = Some((f, ci));
                        }
                    }
                    local.map(|(f, ci)| (f, i, ci))
                })
                .reduce_with(|a, b| {
                    // larger overlap wins; ties go to the lower index for determinism
                    if a.0 > b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2)) {
                        a
                    } else {
                        b
                    }
                });
            if let Some((f, prefix, clifford)) = best {
                let distance = distance_from_overlap(f);
                if distance <= tol {
                    return Some(Match {
                        level,
                        prefix,
                        clifford,
                        distance,
                    });
                }
            }
        }
        None
    }

    fn split_points(&self) -> Arc<Vec<([f64; 4], u32)>> {
        self.split_points
            .get_or_init(|| {
                self.ensure_level(SPLIT_LEVEL);
                let levels = self.levels.read().expect("table lock");
                let points = levels
                    .iter()
                    .enumerate()
                    .take(SPLIT_LEVEL + 1)
                    .flat_map(|(level, ps)| {
                        ps.iter()
                            .enumerate()
                            .map(move |(i, p)| (quaternion(p), pack(level, i)))
                    })
                    .collect();
                Arc::new(points)
            })
            .clone()
    }

    fn ensure_middle(&self, len: usize) {
        if self.middles.read().expect("table lock").len() > len {
            return;
        }
        let mut middles = self.middles.write().expect("table lock");
        while middles.len() <= len {
            let prev = middles.last().expect("seeded");
            let next: Vec<Mat2> = prev
                .iter()
                .flat_map(|w| [mat2_mul(w, &self.ht), mat2_mul(w, &self.sht)])
                .collect();
            middles.push(next);
        }
    }

    fn grid(&self, tol: f64) -> Arc<Grid> {
        let points = self.split_points();
        let mut grids = self.grids.lock().expect("grid lock");
        grids
            .entry(tol.to_bits())
            .or_insert_with(|| Arc::new(Grid::build(points, tol)))
            .clone()
    }

    /// Approximates `target` within `tol` as `P · W · C`.
    ///
    /// Middle segments `W` are tried by increasing length; for each `(W, C)`
    /// the prefix index is probed for `target · C† · W†`. The first length
    /// with any hit returns its lowest-T, then closest, combination.
    pub fn approximate(&self, target: &Mat2, tol: f64) -> Option<SplitMatch> {
        let grid = self.grid(tol);
        let cliffords: Vec<Mat2> = self
            .cliffords
            .iter()
            .map(|c| mat2_mul(target, &mat2_adjoint(&c.matrix)))
            .collect();
        for middle_len in 0..=MIDDLE_LEVEL {
            self.ensure_middle(middle_len);
            let middles = self.middles.read().expect("table lock");
            let best = middles[middle_len]
                .par_iter()
                .enumerate()
                .flat_map_iter(|(wi, w)| {
                    let w_adj = mat2_adjoint(w);
                    let grid = &grid;
                    cliffords.iter().enumerate().filter_map(move |(ci, tc)| {
                        let q = quaternion(&mat2_mul(tc, &w_adj));
                        grid.nearest(&q, tol).map(|(d, id)| {
                            let (level, _) = unpack(grid.points[id as usize].1);
                            (level, d, id, wi, ci)
                        })
                    })
                })
                .min_by(|a, b| {
                    a.0.cmp(&b.0)
                        .then(a.1.total_cmp(&b.1))
                        .then((a.2, a.3, a.4).cmp(&(b.2, b.3, b.4)))
                });
            if let Some((_, _, id, wi, ci)) = best {
                let (prefix_level, prefix) = unpack(grid.points[id as usize].1);
                let mut m = SplitMatch {
                    prefix_level,
                    prefix,
                    middle_len,
                    middle: wi,
                    clifford: ci,
                    distance: 0.0,
                };
                drop(middles);
                m.distance = phase_distance(&self.split_matrix(&m), target);
                return Some(m);
            }
        }
        None
    }

    fn split_matrix(&self, m: &SplitMatch) -> Mat2 {
        self.ensure_level(m.prefix_level);
        self.ensure_middle(m.middle_len);
        let p = self.levels.read().expect("table lock")[m.prefix_level][m.prefix];
        let w = self.middles.read().expect("table lock")[m.middle_len][m.middle];
        mat2_mul(&mat2_mul(&p, &w), &self.cliffords[m.clifford].matrix)
    }

    /// Gate sequence of a split match in circuit order.
    pub fn split_word(&self, m: &SplitMatch) -> Vec<GateKind> {
        let mut matrix_order = prefix_letters(m.prefix_level, m.prefix);
        matrix_order.extend(middle_letters(m.middle_len, m.middle));
        let mut word = self.cliffords[m.clifford].word.clone();
        word.extend(matrix_order.into_iter().rev());
        word
    }

    /// Matrix of a match, `P · C`.
    pub fn matrix(&self, m: &Match) -> Mat2 {
        self.ensure_level(m.level);
        let levels = self.levels.read().expect("table lock");
        mat2_mul(&levels[m.level][m.prefix], &self.cliffords[m.clifford].matrix)
    }

    /// Gate sequence of a match in circuit (time) order.
    pub fn word(&self, m: &Match) -> Vec<GateKind> {
        let mut word = self.cliffords[m.clifford].word.clone();
        word.extend(prefix_letters(m.level, m.prefix).into_iter().rev());
        word
    }
}

const HT: [GateKind; 2] = [GateKind::H, GateKind::T];
const SHT: [GateKind; 3] = [GateKind::S, GateKind::H, GateKind::T];

/// Letters of a `{HT, SHT}` string in matrix order; bit `i` of `index`
/// (from the most significant of `len`) selects `SHT`.
fn middle_letters(len: usize, index: usize) -> Vec<GateKind> {
    let mut out = Vec::new();
    for i in (0..len).rev() {
        out.extend_from_slice(if (index >> i) & 1 == 1 { &SHT[..] } else { &HT[..] });
    }
    out
}

/// Letters of a normal-form prefix in matrix order.
fn prefix_letters(level: usize, index: usize) -> Vec<GateKind> {
    if level == 0 {
        return Vec::new();
    }
    let tail = level - 1;
    let head: &[GateKind] = match index >> tail {
        0 => &[GateKind::T],
        1 => &HT,
        _ => &SHT,
    };
    let mut out = head.to_vec();
    out.extend(middle_letters(tail, index & ((1 << tail) - 1)));
    out
}

fn enumerate_cliffords() -> Vec<CliffordEntry> {
    let gens = [GateKind::H, GateKind::S, GateKind::Sdg];
    let mut found = vec![CliffordEntry {
        matrix: MAT2_IDENTITY,
        word: Vec::new(),
    }];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for g in gens {
                // appending g in time order left-multiplies the matrix
                let m = mat2_mul(&fixed(g), &found[i].matrix);
                if found.iter().all(|e| overlap(&e.matrix, &m) < 1.0 - 1e-9) {
                    let mut word = found[i].word.clone();
                    word.push(g);
                    found.push(CliffordEntry { matrix: m, word });
                    next.push(found.len() - 1);
                }
            }
        }
        frontier = next;
    }
    found
}
