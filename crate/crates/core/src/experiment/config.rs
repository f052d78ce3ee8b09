//! Run configuration and its plain-text (TOML, flat keys) file form.
//!
//! ```toml
//! mode = "two"            # "single" | "two"
//! omega0 = 1.0
//! amplitude = 1.4142135623730951
//! mass = 1.0
//! phase = 0.0
//! omega = "1,5"           # comma list, start:stop:step, number or array
//! times = "1:5:1"
//! shots = 1024
//! seed = 7
//! trotter_steps = "single-shot"   # or a positive integer (single mode)
//! theta = 0.25            # two mode: fixed rotation angle
//! allow_theta_out_of_bounds = false
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::ThetaBounds;
use crate::hamiltonian::{DriveParams, OscillatorParams};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Single,
    Two,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Single => "single",
            Mode::Two => "two",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "single" | "1" => Ok(Mode::Single),
            "two" | "2" => Ok(Mode::Two),
            other => Err(ConfigError::new("mode", format!("expected `single` or `two`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrotterSteps {
    /// One circuit evaluated with the drive at the final time.
    SingleShot,
    /// Midpoint-sampled first-order Trotter circuit.
    Steps(usize),
}

impl FromStr for TrotterSteps {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "single-shot" {
            return Ok(TrotterSteps::SingleShot);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(TrotterSteps::Steps(n)),
            _ => Err(ConfigError::new(
                "trotter_steps",
                format!("expected `single-shot` or a positive integer, got `{s}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub osc: OscillatorParams,
    pub drive: DriveParams,
    pub times: Vec<f64>,
    pub drive_freqs: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub trotter_steps: TrotterSteps,
    pub theta_override: Option<f64>,
    pub allow_theta_out_of_bounds: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Single,
            osc: OscillatorParams::default(),
            drive: DriveParams::default(),
            times: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            drive_freqs: vec![1.0],
            shots: 1024,
            seed: 0,
            trotter_steps: TrotterSteps::SingleShot,
            theta_override: None,
            allow_theta_out_of_bounds: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.times.is_empty() {
            return Err(ConfigError::new("times", "must not be empty"));
        }
        for (i, &t) in self.times.iter().enumerate() {
            if !t.is_finite() || t < 0.0 {
                return Err(ConfigError::new("times", format!("{t} is not a finite non-negative time")));
            }
            if i > 0 && t <= self.times[i - 1] {
                return Err(ConfigError::new("times", "must be strictly increasing"));
            }
        }
        if self.drive_freqs.is_empty() {
            return Err(ConfigError::new("omega", "must not be empty"));
        }
        if let Some(w) = self.drive_freqs.iter().find(|w| !w.is_finite()) {
            return Err(ConfigError::new("omega", format!("{w} is not finite")));
        }
        if self.shots == 0 {
            return Err(ConfigError::new("shots", "must be at least 1"));
        }
        if let TrotterSteps::Steps(n) = self.trotter_steps {
            if n == 0 {
                return Err(ConfigError::new("trotter_steps", "must be at least 1"));
            }
            if self.mode == Mode::Two {
                return Err(ConfigError::new("trotter_steps", "stepped evolution applies to mode=single only"));
            }
        }
        if let Some(theta) = self.theta_override {
            if self.mode == Mode::Single {
                return Err(ConfigError::new("theta", "applies to mode=two only"));
            }
            if !self.allow_theta_out_of_bounds {
                ThetaBounds::SWEEP
                    .check(theta)
                    .map_err(|e| ConfigError::new("theta", e.to_string()))?;
            } else if !theta.is_finite() {
                return Err(ConfigError::new("theta", "must be finite"));
            }
        }
        Ok(())
    }

    /// Stable text used for the provenance hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn hash_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        Sha256::digest(self.canonical_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Parses `a,b,c` or `start:stop:step` (inclusive, `step > 0`).
pub fn parse_grid(field: &str, text: &str) -> Result<Vec<f64>, ConfigError> {
    let text = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| ConfigError::new(field, format!("`{}` is not a number", s.trim())))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError::new(field, format!("range `{text}` must be start:stop:step")));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || !step.is_finite() {
            return Err(ConfigError::new(field, format!("range `{text}` needs a finite positive step")));
        }
        if stop < start {
            return Err(ConfigError::new(field, format!("range `{text}` has stop < start")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(ConfigError::new(field, "range has too many points"));
        }
        Ok((0..count).map(|k| start + k as f64 * step).collect())
    } else {
        let vals = text.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
        if vals.is_empty() {
            return Err(ConfigError::new(field, "empty list"));
        }
        Ok(vals)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GridValue {
    Number(f64),
    List(Vec<f64>),
    Text(String),
}

impl GridValue {
    fn resolve(self, field: &str) -> Result<Vec<f64>, ConfigError> {
        match self {
            GridValue::Number(v) => Ok(vec![v]),
            GridValue::List(v) => Ok(v),
            GridValue::Text(s) => parse_grid(field, &s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum StepsValue {
    Int(i64),
    Text(String),
}

/// Flat key-value file form of [`RunConfig`]; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    mode: Option<String>,
    omega0: Option<f64>,
    amplitude: Option<f64>,
    mass: Option<f64>,
    phase: Option<f64>,
    omega: Option<GridValue>,
    times: Option<GridValue>,
    shots: Option<u64>,
    seed: Option<u64>,
    trotter_steps: Option<StepsValue>,
    theta: Option<f64>,
    allow_theta_out_of_bounds: Option<bool>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::new("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Explicit overrides, typically from command-line flags. `None` keeps the
/// value from the config file (or the default).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<String>,
    pub omega0: Option<f64>,
    pub amplitude: Option<f64>,
    pub mass: Option<f64>,
    pub phase: Option<f64>,
    pub omega: Option<String>,
    pub times: Option<String>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub trotter_steps: Option<String>,
    pub theta: Option<f64>,
    pub allow_theta_out_of_bounds: bool,
}

/// Layers defaults, then the config file, then the overrides, and validates.
pub fn resolve_config(file: Option<ConfigFile>, flags: &Overrides) -> Result<RunConfig, ConfigError> {
    let file = file.unwrap_or_default();
    let base = RunConfig::default();

    let mode = match flags.mode.as_deref().or(file.mode.as_deref()) {
        Some(m) => m.parse()?,
        None => base.mode,
    };
    let omega0 = flags.omega0.or(file.omega0).unwrap_or(base.osc.osc_freq());
    let osc = OscillatorParams::new(omega0).map_err(|e| ConfigError::new("omega0", e.to_string()))?;

    let amplitude = flags.amplitude.or(file.amplitude).unwrap_or(base.drive.amplitude());
    let mass = flags.mass.or(file.mass).unwrap_or(base.drive.mass());
    let phase = flags.phase.or(file.phase).unwrap_or(base.drive.phase());

    let drive_freqs = match (&flags.omega, file.omega) {
        (Some(s), _) => parse_grid("omega", s)?,
        (None, Some(v)) => v.resolve("omega")?,
        (None, None) => base.drive_freqs.clone(),
    };
    let times = match (&flags.times, file.times) {
        (Some(s), _) => parse_grid("times", s)?,
        (None, Some(v)) => v.resolve("times")?,
        (None, None) => base.times.clone(),
    };
    let first_freq = drive_freqs.first().copied().unwrap_or(1.0);
    let drive = DriveParams::new(amplitude, mass, phase, first_freq).map_err(|e| {
        let field = match &e {
            crate::hamiltonian::HamiltonianError::InvalidDrive { field, .. } => *field,
            _ => "drive",
        };
        ConfigError::new(field, e.to_string())
    })?;

    let trotter_steps = match (&flags.trotter_steps, file.trotter_steps) {
        (Some(s), _) => s.parse()?,
        (None, Some(StepsValue::Int(n))) if n >= 1 => TrotterSteps::Steps(n as usize),
        (None, Some(StepsValue::Int(n))) => {
            return Err(ConfigError::new("trotter_steps", format!("must be at least 1, got {n}")))
        }
        (None, Some(StepsValue::Text(s))) => s.parse()?,
        (None, None) => base.trotter_steps,
    };

    let cfg = RunConfig {
        mode,
        osc,
        drive,
        times,
        drive_freqs,
        shots: flags.shots.or(file.shots).unwrap_or(base.shots),
        seed: flags.seed.or(file.seed).unwrap_or(base.seed),
        trotter_steps,
        theta_override: flags.theta.or(file.theta),
        allow_theta_out_of_bounds: flags.allow_theta_out_of_bounds
            || file.allow_theta_out_of_bounds.unwrap_or(false),
    };
    cfg.validate()?;
    Ok(cfg)
}
