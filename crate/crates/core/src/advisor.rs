//! HPC versus QC dispatch.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::resources::{
    estimate_surface_code, Calibration, HardwareProfile, ResourceError, SurfaceCodeEstimate,
    QUANTUM_ADVANTAGE_T_HIGH, QUANTUM_ADVANTAGE_T_LOW,
};
use crate::stabilizer::{sim_cost, ClassicalCostEstimate, Regime};
use crate::transpile::{t_count, TCountReport, TranspileError};

/// "A few hundred" T gates.
pub const DEFAULT_T_THRESHOLD: u64 = 300;

#[derive(Debug, Error)]
pub enum AdviseError {
    #[error(transparent)]
    Transpile(#[from] TranspileError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("unknown report format `{0}`, expected text or machine")]
    Format(String),
    #[error("unknown policy `{0}`, expected full or symmetry")]
    Policy(String),
    #[error("machine report: {0}")]
    Machine(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Policy {
    #[serde(rename = "full")]
    FullSynthesis,
    #[serde(rename = "symmetry")]
    SymmetryBreaking,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::FullSynthesis => "full",
            Policy::SymmetryBreaking => "symmetry",
        }
    }

    pub fn select(self, report: &TCountReport) -> u64 {
        match self {
            Policy::FullSynthesis => report.t_full,
            Policy::SymmetryBreaking => report.t_sym,
        }
    }
}

impl FromStr for Policy {
    type Err = AdviseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Policy::FullSynthesis),
            "symmetry" => Ok(Policy::SymmetryBreaking),
            other => Err(AdviseError::Policy(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    HPC,
    QC,
    Infeasible,
}

impl Decision {
    pub fn name(self) -> &'static str {
        match self {
            Decision::HPC => "HPC",
            Decision::QC => "QC",
            Decision::Infeasible => "Infeasible",
        }
    }

    /// Process exit code for the `advise` command.
    pub fn exit_code(self) -> i32 {
        match self {
            Decision::HPC => 0,
            Decision::QC => 10,
            Decision::Infeasible => 11,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispatchReport {
    pub decision: Decision,
    pub policy: Policy,
    pub t_report: TCountReport,
    pub t_overridden: bool,
    pub logical_qubits: u64,
    pub classical_cost: ClassicalCostEstimate,
    pub quantum_cost: Option<SurfaceCodeEstimate>,
    pub threshold_used: u64,
    pub rationale: String,
}

impl DispatchReport {
    pub fn t_selected(&self) -> u64 {
        self.policy.select(&self.t_report)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AdviseOptions {
    /// Replaces both T tallies, e.g. to price a workload not given as a circuit.
    pub t_override: Option<u64>,
    /// Logical qubits for the surface-code estimate; defaults to the circuit width.
    pub logical_qubits: Option<u64>,
}

pub fn advise(
    circuit: &Circuit,
    epsilon: f64,
    policy: Policy,
    t_threshold: u64,
    profile: &HardwareProfile,
) -> Result<DispatchReport, AdviseError> {
    advise_with(
        circuit,
        epsilon,
        policy,
        t_threshold,
        profile,
        &Calibration::default(),
        AdviseOptions::default(),
    )
}

pub fn advise_with(
    circuit: &Circuit,
    epsilon: f64,
    policy: Policy,
    t_threshold: u64,
    profile: &HardwareProfile,
    calibration: &Calibration,
    options: AdviseOptions,
) -> Result<DispatchReport, AdviseError> {
    profile.validate()?;
    let mut t_report = t_count(circuit, epsilon)?;
    if let Some(t) = options.t_override {
        t_report.t_full = t;
        t_report.t_sym = t;
    }
    let t = policy.select(&t_report);
    let stats = circuit.stats();
    let classical_cost = sim_cost(stats.n_qubits as u64, stats.gate_count as u64, t, epsilon);
    let logical_qubits = options
        .logical_qubits
        .unwrap_or(circuit.n_qubits() as u64)
        .max(1);
    let quantum = estimate_surface_code(profile, logical_qubits, t, calibration);
    let decision = match (&quantum, t <= t_threshold) {
        (_, true) => Decision::HPC,
        (Ok(_), false) => Decision::QC,
        (Err(_), false) => Decision::Infeasible,
    };
    let rationale = rationale(
        decision,
        policy,
        &t_report,
        options.t_override.is_some(),
        t_threshold,
        &classical_cost,
        &quantum,
    );
    Ok(DispatchReport {
        decision,
        policy,
        t_report,
        t_overridden: options.t_override.is_some(),
        logical_qubits,
        classical_cost,
        quantum_cost: quantum.ok(),
        threshold_used: t_threshold,
        rationale,
    })
}

fn rationale(
    decision: Decision,
    policy: Policy,
    report: &TCountReport,
    overridden: bool,
    threshold: u64,
    classical: &ClassicalCostEstimate,
    quantum: &Result<SurfaceCodeEstimate, ResourceError>,
) -> String {
    let t = policy.select(report);
    let mut parts = vec![format!(
        "policy {} selects t = {t} (t_full = {}, t_sym = {}{})",
        policy.name(),
        report.t_full,
        report.t_sym,
        if overridden { ", overridden" } else { "" }
    )];
    match decision {
        Decision::HPC => {
            let regime = match classical.regime {
                Regime::CliffordPoly => "Clifford-only, polynomial stabilizer simulation".to_string(),
                Regime::ExtendedExp => format!("extended stabilizer simulation over 2^{t} branches"),
            };
            parts.push(format!("t <= threshold {threshold}: {regime}"));
        }
        Decision::QC | Decision::Infeasible => {
            parts.push(format!("t > threshold {threshold}: classical simulation too costly"));
            let tf = t as f64;
            if tf < QUANTUM_ADVANTAGE_T_LOW {
                parts.push(format!(
                    "t lies in the contested band between the threshold and {QUANTUM_ADVANTAGE_T_LOW:e} \
                     where neither engine is clearly favoured"
                ));
            } else if tf < QUANTUM_ADVANTAGE_T_HIGH {
                parts.push(format!(
                    "t is at or above the {QUANTUM_ADVANTAGE_T_LOW:e} advantage estimate but below {QUANTUM_ADVANTAGE_T_HIGH:e}"
                ));
            } else {
                parts.push(format!("t is at or above the {QUANTUM_ADVANTAGE_T_HIGH:e} advantage estimate"));
            }
        }
    }
    match quantum {
        Ok(q) => parts.push(format!(
            "surface code d = {}, {} physical qubits, {:e} h/shot ({})",
            q.d,
            q.total_physical,
            q.hours_per_shot,
            q.assumptions.source.name()
        )),
        Err(e) => parts.push(format!("no surface-code estimate: {e}")),
    }
    parts.join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Machine,
}

impl FromStr for ReportFormat {
    type Err = AdviseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "machine" => Ok(ReportFormat::Machine),
            other => Err(AdviseError::Format(other.to_string())),
        }
    }
}

/// Step count that serializes as `"inf"` when it overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steps(pub f64);

impl Serialize for Steps {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for Steps {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Steps;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Steps, E> {
                Ok(Steps(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Steps, E> {
                Ok(Steps(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Steps, E> {
                Ok(Steps(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Steps, E> {
                match v {
                    "inf" => Ok(Steps(f64::INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// The machine-format document: exactly these fields, in this order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineReport {
    pub decision: Decision,
    pub policy: Policy,
    pub t_full: u64,
    pub t_sym: u64,
    pub epsilon: f64,
    pub threshold: u64,
    pub classical_steps: Steps,
    pub distance: Option<u32>,
    pub data_qubits: Option<u64>,
    pub distillation_qubits: Option<u64>,
    pub total_physical_qubits: Option<u64>,
    pub hours_per_shot: Option<f64>,
    pub rationale: String,
}

impl From<&DispatchReport> for MachineReport {
    fn from(r: &DispatchReport) -> Self {
        let q = r.quantum_cost.as_ref();
        MachineReport {
            decision: r.decision,
            policy: r.policy,
            t_full: r.t_report.t_full,
            t_sym: r.t_report.t_sym,
            epsilon: r.t_report.epsilon,
            threshold: r.threshold_used,
            classical_steps: Steps(r.classical_cost.step_bound),
            distance: q.map(|q| q.d),
            data_qubits: q.map(|q| q.data_qubits),
            distillation_qubits: q.map(|q| q.distillation_qubits),
            total_physical_qubits: q.map(|q| q.total_physical),
            hours_per_shot: q.map(|q| q.hours_per_shot),
            rationale: r.rationale.clone(),
        }
    }
}

impl MachineReport {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, AdviseError> {
        serde_json::from_str(text).map_err(|e| AdviseError::Machine(e.to_string()))
    }
}

fn or_dash<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn render_report(report: &DispatchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => MachineReport::from(report).render(),
        ReportFormat::Text => {
            let r = report;
            let c = &r.classical_cost;
            let q = r.quantum_cost.as_ref();
            let regime = match c.regime {
                Regime::CliffordPoly => "clifford-poly",
                Regime::ExtendedExp => "extended-exp",
            };
            let mut out = String::new();
            out += &format!("decision: {}\n", r.decision);
            out += &format!("policy: {}\n", r.policy.name());
            out += &format!(
                "t-count: t_full={} t_sym={} selected={} epsilon={}{}\n",
                r.t_report.t_full,
                r.t_report.t_sym,
                r.t_selected(),
                r.t_report.epsilon,
                if r.t_overridden { " (override)" } else { "" }
            );
            out += &format!("threshold: {}\n", r.threshold_used);
            out += &format!(
                "classical: regime={regime} steps={:.3e} kappa={:.3e}\n",
                c.step_bound, c.kappa
            );
            out += &format!(
                "quantum: logical_qubits={} d={} data={} distillation={} total={} hours_per_shot={} source={}\n",
                r.logical_qubits,
                or_dash(q.map(|q| q.d)),
                or_dash(q.map(|q| q.data_qubits)),
                or_dash(q.map(|q| q.distillation_qubits)),
                or_dash(q.map(|q| q.total_physical)),
                or_dash(q.map(|q| format!("{:.3e}", q.hours_per_shot))),
                or_dash(q.map(|q| q.assumptions.source.name())),
            );
            out += &format!("rationale: {}\n", r.rationale);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ansatz, parse_circuit, AnsatzKind};

    fn defaults() -> HardwareProfile {
        HardwareProfile::default()
    }

    #[test]
    fn clifford_circuit_goes_to_hpc() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1\ns 1").unwrap();
        for policy in [Policy::FullSynthesis, Policy::SymmetryBreaking] {
            let r = advise(&c, 1e-3, policy, 300, &defaults()).unwrap();
            assert_eq!(r.decision, Decision::HPC);
            assert_eq!(r.t_selected(), 0);
            assert_eq!(r.classical_cost.regime, Regime::CliffordPoly);
        }
    }

    #[test]
    fn symmetry_policy_routes_depth_one_to_hpc() {
        let params = vec![0.3, 1.1, 2.0, 0.7, 0.2];
        let c = build_ansatz(AnsatzKind::RealAmplitudes, 5, 1, &params).unwrap();
        let r = advise(&c, 1e-3, Policy::SymmetryBreaking, 300, &defaults()).unwrap();
        assert_eq!(r.t_report.t_sym, 1);
        assert_eq!(r.decision, Decision::HPC);
        // 5 RY rotations at 34 T each
        assert_eq!(r.t_report.t_full, 170);
        let full = advise(&c, 1e-3, Policy::FullSynthesis, 100, &defaults()).unwrap();
        assert_eq!(full.decision, Decision::QC);
        assert!(full.rationale.contains("contested"));
    }

    #[test]
    fn override_prices_scenario() {
        let c = parse_circuit("qubits 1\nh 0").unwrap();
        let opts = AdviseOptions {
            t_override: Some(100_000_000),
            logical_qubits: Some(5),
        };
        let r = advise_with(&c, 1e-3, Policy::FullSynthesis, 300, &defaults(), &Calibration::default(), opts)
            .unwrap();
        assert_eq!(r.decision, Decision::QC);
        let q = r.quantum_cost.as_ref().unwrap();
        assert_eq!((q.d, q.total_physical, q.t), (25, 158_431, r.t_selected()));
    }

    #[test]
    fn infeasible_when_budget_unreachable() {
        let c = parse_circuit("qubits 1\nh 0").unwrap();
        let opts = AdviseOptions {
            t_override: Some(u64::MAX),
            logical_qubits: Some(1000),
        };
        let p = HardwareProfile::new(9e-3, 1e-6, 1e-9).unwrap();
        let r = advise_with(&c, 1e-3, Policy::FullSynthesis, 300, &p, &Calibration::default(), opts).unwrap();
        assert_eq!(r.decision, Decision::Infeasible);
        assert!(r.quantum_cost.is_none());
        let m = render_report(&r, ReportFormat::Machine);
        assert!(m.contains("\"distance\": null"));
        assert!(m.contains("\"classical_steps\": \"inf\""));
        assert_eq!(MachineReport::parse(&m).unwrap(), MachineReport::from(&r));
    }

    #[test]
    fn machine_keys_are_exact() {
        let c = parse_circuit("qubits 2\nh 0\nt 1").unwrap();
        let r = advise(&c, 1e-3, Policy::FullSynthesis, 300, &defaults()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&render_report(&r, ReportFormat::Machine)).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want = vec![
            "decision", "policy", "t_full", "t_sym", "epsilon", "threshold", "classical_steps",
            "distance", "data_qubits", "distillation_qubits", "total_physical_qubits",
            "hours_per_shot", "rationale",
        ];
        want.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, want);
        assert!("yaml".parse::<ReportFormat>().is_err());
    }
}
