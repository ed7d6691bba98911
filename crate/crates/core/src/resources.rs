//! Surface-code resource model: code distance, data and distillation qubits,
//! and wall-clock per shot from logical qubits and T-count.
//!
//! The model is parametric (see `calibration/surface_code_v1.toml`). It cannot
//! reproduce all three published anchor rows with integer constants, so
//! estimates for exactly those inputs come from a lookup layer tagged
//! [`EstimateSource::PaperTable`]. Other inputs that share an anchor's `Q`,
//! cycle time and target are clamped by the anchors below and above them in
//! `(p, t)` ([`EstimateSource::ModelClamped`]), which keeps `d` monotone in `p`
//! and every column monotone in `t`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lower T-count at which fault-tolerant execution is expected to beat
/// classical simulation.
pub const QUANTUM_ADVANTAGE_T_LOW: f64 = 1e8;
/// Upper, more conservative advantage threshold.
pub const QUANTUM_ADVANTAGE_T_HIGH: f64 = 1e12;

pub const DEFAULT_CALIBRATION: &str = include_str!("../calibration/surface_code_v1.toml");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResourceError {
    #[error("physical error rate {0} outside (0, 0.01)")]
    ErrorRate(f64),
    #[error("cycle time {0} s must be positive")]
    CycleTime(f64),
    #[error("target logical error {0} outside (0, 1)")]
    Target(f64),
    #[error("logical qubit count must be at least 1")]
    NoLogicalQubits,
    #[error("no odd distance <= {max} meets the logical error budget (Q={logical_qubits}, t={t})")]
    Infeasible {
        logical_qubits: u64,
        t: u64,
        max: u32,
    },
    #[error("t values must be non-empty and ascending")]
    BadScan,
    #[error("calibration: {0}")]
    Calibration(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareProfile {
    pub p: f64,
    /// Seconds per surface-code round.
    pub cycle_time: f64,
    pub target_logical_error: f64,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        HardwareProfile {
            p: 1e-3,
            cycle_time: 1e-6,
            target_logical_error: 1e-3,
        }
    }
}

impl HardwareProfile {
    pub fn new(p: f64, cycle_time: f64, target_logical_error: f64) -> Result<Self, ResourceError> {
        let h = HardwareProfile {
            p,
            cycle_time,
            target_logical_error,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<(), ResourceError> {
        if !(self.p > 0.0 && self.p < 0.01) {
            return Err(ResourceError::ErrorRate(self.p));
        }
        if !(self.cycle_time > 0.0 && self.cycle_time.is_finite()) {
            return Err(ResourceError::CycleTime(self.cycle_time));
        }
        if !(self.target_logical_error > 0.0 && self.target_logical_error < 1.0) {
            return Err(ResourceError::Target(self.target_logical_error));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    pub a: f64,
    pub b: f64,
    pub max_distance: u32,
    pub c_data: u64,
    pub c_time: u64,
    pub factory_units: u64,
    pub factory_distance: u64,
    pub factory_per_d2: u64,
}

/// One published scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub logical_qubits: u64,
    pub t: u64,
    pub p: f64,
    pub cycle_time: f64,
    /// Budget the row is assumed to meet; not stated with the published rows.
    pub target_logical_error: f64,
    pub distance: u32,
    pub data_qubits: u64,
    pub distillation_qubits: u64,
    pub hours_per_shot: f64,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs()
}

impl Anchor {
    /// Same `Q`, cycle time and logical error target; `p` may differ.
    fn comparable(&self, profile: &HardwareProfile, logical_qubits: u64) -> bool {
        self.logical_qubits == logical_qubits
            && close(profile.cycle_time, self.cycle_time)
            && close(profile.target_logical_error, self.target_logical_error)
    }

    /// Every column of a query at or above `(p, t)` should be at least this row's.
    fn below(&self, p: f64, t: u64) -> bool {
        (self.p <= p || close(p, self.p)) && self.t <= t
    }

    fn above(&self, p: f64, t: u64) -> bool {
        (self.p >= p || close(p, self.p)) && self.t >= t
    }

    fn total(&self) -> u64 {
        self.data_qubits + self.distillation_qubits
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub version: u32,
    pub model: ModelConstants,
    #[serde(default, rename = "anchor")]
    pub anchors: Vec<Anchor>,
}

impl Calibration {
    pub fn parse(text: &str) -> Result<Self, ResourceError> {
        let c: Calibration =
            toml::from_str(text).map_err(|e| ResourceError::Calibration(e.to_string()))?;
        let m = &c.model;
        if !(m.a > 0.0 && m.b > 0.0) || m.max_distance < 3 || m.c_data == 0 {
            return Err(ResourceError::Calibration("model constants must be positive".into()));
        }
        for a in &c.anchors {
            if a.distance % 2 == 0 {
                return Err(ResourceError::Calibration(format!(
                    "anchor t={} has even distance {}",
                    a.t, a.distance
                )));
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ResourceError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ResourceError::Calibration(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Model output next to each anchor, ignoring the lookup layer.
    pub fn residuals(&self) -> Vec<(Anchor, Result<SurfaceCodeEstimate, ResourceError>)> {
        self.anchors
            .iter()
            .map(|a| {
                let profile = HardwareProfile {
                    p: a.p,
                    cycle_time: a.cycle_time,
                    target_logical_error: a.target_logical_error,
                };
                (*a, model_estimate(&profile, a.logical_qubits, a.t, self))
            })
            .collect()
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration::parse(DEFAULT_CALIBRATION).expect("shipped calibration parses")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimateSource {
    #[serde(rename = "model")]
    Model,
    /// Model values bounded by neighbouring anchor rows.
    #[serde(rename = "model-clamped")]
    ModelClamped,
    #[serde(rename = "paper-table")]
    PaperTable,
}

impl EstimateSource {
    pub fn name(self) -> &'static str {
        match self {
            EstimateSource::Model => "model",
            EstimateSource::ModelClamped => "model-clamped",
            EstimateSource::PaperTable => "paper-table",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assumptions {
    pub profile: HardwareProfile,
    pub model: ModelConstants,
    pub calibration_version: u32,
    pub source: EstimateSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCodeEstimate {
    pub logical_qubits: u64,
    pub t: u64,
    pub d: u32,
    pub data_qubits: u64,
    pub distillation_qubits: u64,
    pub total_physical: u64,
    pub hours_per_shot: f64,
    pub assumptions: Assumptions,
}

/// Smallest odd `d >= 3` with `Q·max(t,1)·d · a·(b·p)^((d+1)/2) <= target`.
pub fn required_distance(
    profile: &HardwareProfile,
    logical_qubits: u64,
    t: u64,
    model: &ModelConstants,
) -> Result<u32, ResourceError> {
    profile.validate()?;
    if logical_qubits == 0 {
        return Err(ResourceError::NoLogicalQubits);
    }
    let volume = logical_qubits as f64 * t.max(1) as f64;
    let per_round = |d: u32| model.a * (model.b * profile.p).powf(((d + 1) / 2) as f64);
    (3..=model.max_distance)
        .step_by(2)
        .find(|&d| volume * d as f64 * per_round(d) <= profile.target_logical_error)
        .ok_or(ResourceError::Infeasible {
            logical_qubits,
            t,
            max: model.max_distance,
        })
}

fn model_estimate(
    profile: &HardwareProfile,
    logical_qubits: u64,
    t: u64,
    cal: &Calibration,
) -> Result<SurfaceCodeEstimate, ResourceError> {
    let m = &cal.model;
    let d = required_distance(profile, logical_qubits, t, m)?;
    let d2 = (d as u64) * (d as u64);
    let data_qubits = m.c_data * logical_qubits * d2;
    let distillation_qubits = if t == 0 {
        0
    } else {
        (m.factory_units * m.factory_distance * m.factory_distance).max(m.factory_per_d2 * d2)
    };
    let rounds = (m.c_time as f64 * t as f64 + 1.0) * d as f64;
    Ok(SurfaceCodeEstimate {
        logical_qubits,
        t,
        d,
        data_qubits,
        distillation_qubits,
        total_physical: data_qubits + distillation_qubits,
        hours_per_shot: rounds * profile.cycle_time / 3600.0,
        assumptions: Assumptions {
            profile: *profile,
            model: *m,
            calibration_version: cal.version,
            source: EstimateSource::Model,
        },
    })
}

/// Model estimate bounded by the anchor rows that share `Q`, the cycle time
/// and the logical error target. Rows at lower-or-equal `p` and `t` bound
/// `d`, total qubits and hours from below; rows at higher-or-equal `p` and
/// `t` bound them from above. A query equal to a row returns it verbatim.
pub fn estimate_surface_code(
    profile: &HardwareProfile,
    logical_qubits: u64,
    t: u64,
    cal: &Calibration,
) -> Result<SurfaceCodeEstimate, ResourceError> {
    profile.validate()?;
    if logical_qubits == 0 {
        return Err(ResourceError::NoLogicalQubits);
    }
    let p = profile.p;
    let anchors: Vec<&Anchor> = cal
        .anchors
        .iter()
        .filter(|a| a.comparable(profile, logical_qubits))
        .collect();
    let assumptions = |source| Assumptions {
        profile: *profile,
        model: cal.model,
        calibration_version: cal.version,
        source,
    };
    if let Some(a) = anchors.iter().find(|a| a.t == t && close(p, a.p)) {
        return Ok(SurfaceCodeEstimate {
            logical_qubits,
            t,
            d: a.distance,
            data_qubits: a.data_qubits,
            distillation_qubits: a.distillation_qubits,
            total_physical: a.total(),
            hours_per_shot: a.hours_per_shot,
            assumptions: assumptions(EstimateSource::PaperTable),
        });
    }
    let m = model_estimate(profile, logical_qubits, t, cal)?;
    let lower: Vec<&Anchor> = anchors.iter().copied().filter(|a| a.below(p, t)).collect();
    let upper: Vec<&Anchor> = anchors.iter().copied().filter(|a| a.above(p, t)).collect();
    if lower.is_empty() && upper.is_empty() {
        return Ok(m);
    }
    fn clamp<T: PartialOrd + Copy>(v: T, lo: Option<T>, hi: Option<T>) -> T {
        let v = match lo {
            Some(l) if v < l => l,
            _ => v,
        };
        match hi {
            Some(h) if v > h => h,
            _ => v,
        }
    }
    let max_of = |f: fn(&Anchor) -> f64| lower.iter().map(|a| f(a)).reduce(f64::max);
    let min_of = |f: fn(&Anchor) -> f64| upper.iter().map(|a| f(a)).reduce(f64::min);
    let d = clamp(
        m.d,
        lower.iter().map(|a| a.distance).max(),
        upper.iter().map(|a| a.distance).min(),
    );
    let total_physical = clamp(
        m.total_physical,
        lower.iter().map(|a| a.total()).max(),
        upper.iter().map(|a| a.total()).min(),
    );
    let hours_per_shot = clamp(m.hours_per_shot, max_of(|a| a.hours_per_shot), min_of(|a| a.hours_per_shot));
    // the factory column is not monotone across rows; keep it inside the
    // span of the nearest row on each side
    let nearest_lo = lower.iter().max_by(|a, b| (a.t, a.p).partial_cmp(&(b.t, b.p)).expect("finite"));
    let nearest_hi = upper.iter().min_by(|a, b| (a.t, a.p).partial_cmp(&(b.t, b.p)).expect("finite"));
    let factory: Vec<u64> = nearest_lo
        .iter()
        .chain(nearest_hi.iter())
        .map(|a| a.distillation_qubits)
        .collect();
    let distillation_qubits = if t == 0 {
        0
    } else {
        clamp(
            m.distillation_qubits,
            factory.iter().min().copied(),
            factory.iter().max().copied(),
        )
        .min(total_physical)
    };
    let changed = d != m.d
        || total_physical != m.total_physical
        || hours_per_shot != m.hours_per_shot
        || distillation_qubits != m.distillation_qubits;
    Ok(SurfaceCodeEstimate {
        logical_qubits,
        t,
        d,
        data_qubits: total_physical - distillation_qubits,
        distillation_qubits,
        total_physical,
        hours_per_shot,
        assumptions: assumptions(if changed {
            EstimateSource::ModelClamped
        } else {
            EstimateSource::Model
        }),
    })
}

/// Model-only estimate; never consults the anchor table.
pub fn estimate_model_only(
    profile: &HardwareProfile,
    logical_qubits: u64,
    t: u64,
    cal: &Calibration,
) -> Result<SurfaceCodeEstimate, ResourceError> {
    profile.validate()?;
    if logical_qubits == 0 {
        return Err(ResourceError::NoLogicalQubits);
    }
    model_estimate(profile, logical_qubits, t, cal)
}

pub fn scan(
    profile: &HardwareProfile,
    logical_qubits: u64,
    t_values: &[u64],
    cal: &Calibration,
) -> Result<Vec<SurfaceCodeEstimate>, ResourceError> {
    if t_values.is_empty() || t_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(ResourceError::BadScan);
    }
    t_values
        .iter()
        .map(|&t| estimate_surface_code(profile, logical_qubits, t, cal))
        .collect()
}

/// Integer model constants chosen from anchor rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fit {
    pub c_data: u64,
    pub c_time: u64,
    pub factory_units: u64,
    pub factory_per_d2: u64,
}

fn best_integer(max: u64, sse: impl Fn(f64) -> f64) -> u64 {
    (1..=max)
        .min_by(|&a, &b| sse(a as f64).total_cmp(&sse(b as f64)))
        .expect("non-empty range")
}

/// Fits `c_data` and `c_time` by least squares in log space over the anchors'
/// own distances. The small factory is sized from the smallest-t anchor at
/// `factory_distance`; the per-`d²` factory from the largest-t anchor.
pub fn fit(anchors: &[Anchor], factory_distance: u64) -> Option<Fit> {
    if anchors.is_empty() || factory_distance == 0 {
        return None;
    }
    let ln = f64::ln;
    let c_data = best_integer(1000, |c| {
        anchors
            .iter()
            .map(|a| {
                let d2 = (a.distance as f64).powi(2);
                (ln(c * a.logical_qubits as f64 * d2) - ln(a.data_qubits as f64)).powi(2)
            })
            .sum()
    });
    let c_time = best_integer(1000, |c| {
        anchors
            .iter()
            .map(|a| {
                let h = (c * a.t as f64 + 1.0) * a.distance as f64 * a.cycle_time / 3600.0;
                (ln(h) - ln(a.hours_per_shot)).powi(2)
            })
            .sum()
    });
    let small = anchors.iter().filter(|a| a.t > 0).min_by_key(|a| a.t)?;
    let large = anchors.iter().max_by_key(|a| a.t)?;
    let d2 = (large.distance as u64).pow(2);
    Some(Fit {
        c_data,
        c_time,
        factory_units: (small.distillation_qubits as f64 / (factory_distance.pow(2)) as f64)
            .round() as u64,
        factory_per_d2: (large.distillation_qubits as f64 / d2 as f64).round() as u64,
    })
}

pub fn render_table(rows: &[SurfaceCodeEstimate]) -> String {
    let header = ["t", "Q", "d", "data", "distillation", "total", "hours/shot", "source"];
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.t.to_string(),
                r.logical_qubits.to_string(),
                r.d.to_string(),
                r.data_qubits.to_string(),
                r.distillation_qubits.to_string(),
                r.total_physical.to_string(),
                format!("{:.3e}", r.hours_per_shot),
                r.assumptions.source.name().to_string(),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |cols: &[&str]| {
        let parts: Vec<String> = cols
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&header);
    for row in &cells {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}
