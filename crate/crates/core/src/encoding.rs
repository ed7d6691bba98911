//! Qubit and gate budgets for loading Earth-observation tensors `I×J×K` into
//! a quantum data-encoding layer.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Gates per amplitude for amplitude encoding: geometric mean of
/// `4000 / (64·64·12)` and `60000 / (300·290·3)`, so both reference figures
/// land within the same factor (about 1.68) of the model.
pub const C_AMP: f64 = 0.136_8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("dimensions must be at least 1")]
    ZeroDimension,
    #[error("polarimetric data has K = 3 or 4 features, got {0}")]
    PolarimetricK(u64),
    #[error("symmetric scattering applies only to polarimetric data")]
    SymmetricFlag,
    #[error("hybrid compression needs at least 1 target feature")]
    ZeroTarget,
    #[error("bad tensor spec `{0}`, expected IxJxK:modality[:symmetric]")]
    Syntax(String),
    #[error("unknown modality `{0}`")]
    Modality(String),
    #[error("unknown scheme `{0}`, expected angle, amplitude or hybrid:<f>")]
    Scheme(String),
    #[error("no tensor specs given")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modality {
    Hyperspectral,
    Multispectral,
    Polarimetric,
}

impl Modality {
    pub fn name(self) -> &'static str {
        match self {
            Modality::Hyperspectral => "hyperspectral",
            Modality::Multispectral => "multispectral",
            Modality::Polarimetric => "polarimetric",
        }
    }
}

impl FromStr for Modality {
    type Err = EncodingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hyperspectral" | "hsi" => Ok(Modality::Hyperspectral),
            "multispectral" | "msi" => Ok(Modality::Multispectral),
            "polarimetric" | "polsar" => Ok(Modality::Polarimetric),
            other => Err(EncodingError::Modality(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EOTensorSpec {
    pub i: u64,
    pub j: u64,
    pub k: u64,
    pub modality: Modality,
    pub symmetric_scattering: bool,
}

impl EOTensorSpec {
    pub fn new(i: u64, j: u64, k: u64, modality: Modality) -> Result<Self, EncodingError> {
        Self::with_symmetry(i, j, k, modality, false)
    }

    pub fn with_symmetry(
        i: u64,
        j: u64,
        k: u64,
        modality: Modality,
        symmetric_scattering: bool,
    ) -> Result<Self, EncodingError> {
        let s = EOTensorSpec {
            i,
            j,
            k,
            modality,
            symmetric_scattering,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), EncodingError> {
        if self.i == 0 || self.j == 0 || self.k == 0 {
            return Err(EncodingError::ZeroDimension);
        }
        match self.modality {
            Modality::Polarimetric if !(3..=4).contains(&self.k) => {
                Err(EncodingError::PolarimetricK(self.k))
            }
            Modality::Polarimetric => Ok(()),
            _ if self.symmetric_scattering => Err(EncodingError::SymmetricFlag),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for EOTensorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}:{}", self.i, self.j, self.k, self.modality.name())?;
        if self.symmetric_scattering {
            f.write_str(":symmetric")?;
        }
        Ok(())
    }
}

impl FromStr for EOTensorSpec {
    type Err = EncodingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EncodingError::Syntax(s.to_string());
        let mut parts = s.trim().split(':');
        let dims: Vec<u64> = parts
            .next()
            .ok_or_else(bad)?
            .split(['x', 'X'])
            .map(|d| d.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [i, j, k] = dims[..] else { return Err(bad()) };
        let modality: Modality = parts.next().ok_or_else(bad)?.trim().parse()?;
        let symmetric = match parts.next().map(str::trim) {
            None => false,
            Some("symmetric") => true,
            Some(_) => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        EOTensorSpec::with_symmetry(i, j, k, modality, symmetric)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingScheme {
    AnglePerFeature,
    Amplitude,
    HybridCompressed(u64),
}

impl EncodingScheme {
    pub fn hybrid(target_features: u64) -> Result<Self, EncodingError> {
        if target_features == 0 {
            return Err(EncodingError::ZeroTarget);
        }
        Ok(EncodingScheme::HybridCompressed(target_features))
    }
}

impl fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingScheme::AnglePerFeature => f.write_str("angle"),
            EncodingScheme::Amplitude => f.write_str("amplitude"),
            EncodingScheme::HybridCompressed(n) => write!(f, "hybrid:{n}"),
        }
    }
}

impl FromStr for EncodingScheme {
    type Err = EncodingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "angle" => Ok(EncodingScheme::AnglePerFeature),
            "amplitude" => Ok(EncodingScheme::Amplitude),
            other => match other.strip_prefix("hybrid:").map(str::parse::<u64>) {
                Some(Ok(f)) => EncodingScheme::hybrid(f),
                _ => Err(EncodingError::Scheme(other.to_string())),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub data_points: u64,
    pub features: u64,
}

pub fn dataset_profile(spec: &EOTensorSpec) -> DatasetProfile {
    let features = if spec.modality == Modality::Polarimetric && spec.symmetric_scattering {
        3
    } else {
        spec.k
    };
    DatasetProfile {
        data_points: spec.i * spec.j,
        features,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingCost {
    pub qubits: u64,
    pub gates: u64,
}

fn ceil_log2(n: u64) -> u64 {
    (u64::BITS - (n.max(1) - 1).leading_zeros()) as u64
}

/// Polarimetric pixels spend one extra phase gate on the complex
/// off-diagonal scattering term.
fn phase_slots(spec: &EOTensorSpec) -> u64 {
    (spec.modality == Modality::Polarimetric) as u64
}

pub fn encoding_cost(spec: &EOTensorSpec, scheme: EncodingScheme, per_pixel: bool) -> EncodingCost {
    let profile = dataset_profile(spec);
    let points = if per_pixel { 1 } else { profile.data_points };
    match scheme {
        EncodingScheme::AnglePerFeature => EncodingCost {
            qubits: points * profile.features,
            gates: points * (profile.features + phase_slots(spec)),
        },
        EncodingScheme::Amplitude => {
            let n = points * profile.features;
            EncodingCost {
                qubits: ceil_log2(n),
                gates: (C_AMP * n as f64).ceil() as u64,
            }
        }
        EncodingScheme::HybridCompressed(f) => EncodingCost { qubits: f, gates: f },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModalityRow {
    pub spec: EOTensorSpec,
    pub scheme: EncodingScheme,
    pub per_pixel: EncodingCost,
    pub whole_image: EncodingCost,
}

/// Rows sorted by per-pixel gates ascending (stable).
pub fn compare_modalities(
    specs: &[EOTensorSpec],
    scheme: EncodingScheme,
) -> Result<Vec<ModalityRow>, EncodingError> {
    if specs.is_empty() {
        return Err(EncodingError::Empty);
    }
    let mut rows: Vec<ModalityRow> = specs
        .iter()
        .map(|s| ModalityRow {
            spec: *s,
            scheme,
            per_pixel: encoding_cost(s, scheme, true),
            whole_image: encoding_cost(s, scheme, false),
        })
        .collect();
    rows.sort_by_key(|r| r.per_pixel.gates);
    Ok(rows)
}

pub fn render_rows(rows: &[ModalityRow]) -> String {
    let header = [
        "spec",
        "scheme",
        "pixel_qubits",
        "pixel_gates",
        "image_qubits",
        "image_gates",
    ];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.spec.to_string(),
                r.scheme.to_string(),
                r.per_pixel.qubits.to_string(),
                r.per_pixel.gates.to_string(),
                r.whole_image.qubits.to_string(),
                r.whole_image.gates.to_string(),
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
            .enumerate()
            .map(|(n, (c, w))| if n < 2 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&header);
    for row in &cells {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> EOTensorSpec {
        s.parse().unwrap()
    }

    #[test]
    fn enmap_profile() {
        let p = dataset_profile(&spec("610x340x103:hyperspectral"));
        assert_eq!(p, DatasetProfile { data_points: 207_400, features: 103 });
        let p = dataset_profile(&spec("8x8x4:polarimetric:symmetric"));
        assert_eq!(p.features, 3);
    }

    #[test]
    fn amplitude_constant_is_the_geometric_mean() {
        let a: f64 = 4000.0 / (64.0 * 64.0 * 12.0);
        let b = 60000.0 / (300.0 * 290.0 * 3.0);
        assert!((C_AMP - (a * b).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(49_152), 16);
        assert_eq!(ceil_log2(1 << 40), 40);
    }

    #[test]
    fn spec_strings() {
        assert_eq!(spec("64x64x12:multispectral").to_string(), "64x64x12:multispectral");
        assert!("64x64:multispectral".parse::<EOTensorSpec>().is_err());
        assert!("1x1x5:polarimetric".parse::<EOTensorSpec>().is_err());
        assert!("1x1x5:hyperspectral:symmetric".parse::<EOTensorSpec>().is_err());
        assert!("0x1x5:hyperspectral".parse::<EOTensorSpec>().is_err());
        assert_eq!("hybrid:16".parse::<EncodingScheme>().unwrap(), EncodingScheme::HybridCompressed(16));
        assert!("hybrid:0".parse::<EncodingScheme>().is_err());
    }

    #[test]
    fn polarimetric_pixel_within_five() {
        for s in ["1x1x4:polarimetric:symmetric", "1x1x4:polarimetric", "1x1x3:polarimetric"] {
            let c = encoding_cost(&spec(s), EncodingScheme::AnglePerFeature, true);
            assert!(c.gates <= 5, "{s}");
        }
    }

    #[test]
    fn single_row_compare() {
        let rows = compare_modalities(&[spec("2x2x2:multispectral")], EncodingScheme::Amplitude).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(compare_modalities(&[], EncodingScheme::Amplitude).is_err());
    }
}
