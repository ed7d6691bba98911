//! Run configuration: built-in defaults, overridden by an optional TOML file,
//! overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::advisor::{Policy, DEFAULT_T_THRESHOLD};
use crate::resources::{HardwareProfile, ResourceError};
use crate::stabilizer::DEFAULT_T_MAX;

/// Environment variable naming a config file.
pub const CONFIG_ENV: &str = "HPCQC_CONFIG";

pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_SHOTS: u64 = 1024;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error("shots must be at least 1")]
    Shots,
    #[error(transparent)]
    Profile(#[from] ResourceError),
}

/// Every key is optional; absent keys keep the lower layer's value.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub epsilon: Option<f64>,
    pub t_threshold: Option<u64>,
    pub policy: Option<Policy>,
    pub p: Option<f64>,
    pub cycle_time: Option<f64>,
    pub target_logical_error: Option<f64>,
    pub calibration: Option<PathBuf>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub t_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub epsilon: f64,
    pub t_threshold: u64,
    pub policy: Policy,
    pub profile: HardwareProfile,
    /// `None` selects the built-in calibration.
    pub calibration: Option<PathBuf>,
    pub seed: u64,
    pub shots: u64,
    pub t_max: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            epsilon: DEFAULT_EPSILON,
            t_threshold: DEFAULT_T_THRESHOLD,
            policy: Policy::FullSynthesis,
            profile: HardwareProfile::default(),
            calibration: None,
            seed: 0,
            shots: DEFAULT_SHOTS,
            t_max: DEFAULT_T_MAX,
        }
    }
}

impl ConfigFile {
    /// Reads a file; a relative `calibration` path resolves against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let err = |message: String| ConfigError::File {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        let mut file: ConfigFile = toml::from_str(&text).map_err(|e| err(e.to_string()))?;
        if let Some(c) = &file.calibration {
            if c.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                file.calibration = Some(base.join(c));
            }
        }
        Ok(file)
    }
}

impl Config {
    /// Applies `layer` on top of `self`.
    pub fn merge(mut self, layer: &ConfigFile) -> Self {
        let l = layer.clone();
        self.epsilon = l.epsilon.unwrap_or(self.epsilon);
        self.t_threshold = l.t_threshold.unwrap_or(self.t_threshold);
        self.policy = l.policy.unwrap_or(self.policy);
        self.profile.p = l.p.unwrap_or(self.profile.p);
        self.profile.cycle_time = l.cycle_time.unwrap_or(self.profile.cycle_time);
        self.profile.target_logical_error =
            l.target_logical_error.unwrap_or(self.profile.target_logical_error);
        self.calibration = l.calibration.or(self.calibration);
        self.seed = l.seed.unwrap_or(self.seed);
        self.shots = l.shots.unwrap_or(self.shots);
        self.t_max = l.t_max.unwrap_or(self.t_max);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        if self.shots == 0 {
            return Err(ConfigError::Shots);
        }
        self.profile.validate()?;
        Ok(())
    }

    /// Defaults, then the file at `explicit` or else `$HPCQC_CONFIG`, then
    /// `flags`.
    pub fn resolve(explicit: Option<&Path>, flags: &ConfigFile) -> Result<Self, ConfigError> {
        let env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let mut cfg = Config::default();
        if let Some(path) = explicit.map(Path::to_path_buf).or(env) {
            cfg = cfg.merge(&ConfigFile::load(&path)?);
        }
        let cfg = cfg.merge(flags);
        cfg.validate()?;
        Ok(cfg)
    }
}
