//! Wall-clock scaling suites for the two simulation engines.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, GateKind, GateOp};
use crate::random::clifford_circuit;
use crate::stabilizer::{extended_amplitudes, run_clifford, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Clifford,
    Extended,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Extended => "extended",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clifford" => Ok(Suite::Clifford),
            "extended" => Ok(Suite::Extended),
            other => Err(format!("unknown suite `{other}`, expected clifford or extended")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRow {
    /// `n` for the Clifford suite, `t` for the extended suite.
    pub x: u64,
    pub gates: u64,
    pub seconds: f64,
    /// Branch terms summed (extended suite), 1 otherwise.
    pub terms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub suite: &'static str,
    pub rows: Vec<BenchRow>,
    /// Clifford: exponent `k` in `time ~ n^k`. Extended: per-T growth ratio.
    pub fitted: f64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub clifford_sizes: Vec<u64>,
    pub gates_per_qubit: u64,
    pub clifford_shots: u64,
    pub extended_qubits: usize,
    pub t_values: Vec<u64>,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            clifford_sizes: vec![16, 32, 64, 128, 256],
            gates_per_qubit: 10,
            clifford_shots: 4,
            extended_qubits: 10,
            t_values: (8..=14).collect(),
            repeats: 3,
            seed: 0,
        }
    }
}

/// Least-squares slope of `y` on `x`.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn min_time<T>(repeats: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut best = f64::INFINITY;
    let mut out = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let v = f();
        best = best.min(start.elapsed().as_secs_f64());
        out = Some(v);
    }
    (best, out.expect("ran at least once"))
}

pub fn clifford_suite(cfg: &BenchConfig) -> Result<BenchReport, SimError> {
    let mut rows = Vec::new();
    for &n in &cfg.clifford_sizes {
        let m = cfg.gates_per_qubit * n;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ n);
        let c = clifford_circuit(n as usize, m as usize, &mut rng);
        let (seconds, h) = min_time(cfg.repeats, || run_clifford(&c, cfg.clifford_shots, cfg.seed));
        h?;
        rows.push(BenchRow {
            x: n,
            gates: m,
            seconds,
            terms: 1,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.x as f64).ln(), r.seconds.ln())).collect();
    Ok(BenchReport {
        suite: Suite::Clifford.name(),
        fitted: slope(&pts),
        rows,
    })
}

/// Hadamards on every qubit, then `t` rounds of `T` on one qubit followed by
/// a CNOT and an `S`, so the stabilizer support stays full and every branch
/// costs the same.
pub fn extended_circuit(n: usize, t: usize) -> Circuit {
    let mut c = Circuit::new(n).expect("n >= 1");
    for q in 0..n {
        c.push(GateOp::fixed(GateKind::H, &[q])).expect("valid");
    }
    for i in 0..t {
        let q = i % n;
        c.push(GateOp::fixed(GateKind::T, &[q])).expect("valid");
        if n >= 2 {
            c.push(GateOp::fixed(GateKind::CNOT, &[q, (q + 1) % n])).expect("valid");
        }
        c.push(GateOp::fixed(GateKind::S, &[q])).expect("valid");
    }
    c
}

pub fn extended_suite(cfg: &BenchConfig) -> Result<BenchReport, SimError> {
    let mut rows = Vec::new();
    for &t in &cfg.t_values {
        let c = extended_circuit(cfg.extended_qubits, t as usize);
        let (seconds, e) = min_time(cfg.repeats, || extended_amplitudes(&c, t as usize));
        let e = e?;
        rows.push(BenchRow {
            x: t,
            gates: c.gates().count() as u64,
            seconds,
            terms: e.terms,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.x as f64, r.seconds.log2())).collect();
    Ok(BenchReport {
        suite: Suite::Extended.name(),
        fitted: 2f64.powf(slope(&pts)),
        rows,
    })
}

pub fn run_suite(suite: Suite, cfg: &BenchConfig) -> Result<BenchReport, SimError> {
    match suite {
        Suite::Clifford => clifford_suite(cfg),
        Suite::Extended => extended_suite(cfg),
    }
}

pub fn render_bench(report: &BenchReport) -> String {
    let x = if report.suite == "clifford" { "n" } else { "t" };
    let mut out = format!("# suite {}\n{x:>4} {:>8} {:>12} {:>8}\n", report.suite, "gates", "seconds", "terms");
    for r in &report.rows {
        let _ = writeln!(out, "{:>4} {:>8} {:>12.6e} {:>8}", r.x, r.gates, r.seconds, r.terms);
    }
    let label = if report.suite == "clifford" { "exponent" } else { "ratio_per_t" };
    let _ = writeln!(out, "# {label} {:.3}", report.fitted);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        assert!((slope(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_suites_run() {
        let cfg = BenchConfig {
            clifford_sizes: vec![4, 8],
            t_values: vec![2, 3],
            extended_qubits: 4,
            repeats: 1,
            ..BenchConfig::default()
        };
        let r = clifford_suite(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        let e = extended_suite(&cfg).unwrap();
        assert_eq!(e.rows.iter().map(|r| r.terms).collect::<Vec<_>>(), vec![4, 8]);
        assert!(render_bench(&e).contains("ratio_per_t"));
        assert!("nope".parse::<Suite>().is_err());
    }
}
