//! Experiment configuration from a TOML document with dotted keys.
//!
//! ```toml
//! [channel]
//! beta_a = 0.0
//! bsm_phase_offset = 0.0
//!
//! [sweep]            # sweeps beta_b over [start, end)
//! points = 61
//!
//! [noise]
//! preset = "calibrated"
//! background_click = 0.0
//!
//! [sim]
//! mode = "montecarlo"
//! shots = 100000
//! seed = 7
//!
//! [protocol]
//! alice_menu = "one_check"
//!
//! [output]
//! directory = "out"
//! emit_svg = true
//! ```

use std::f64::consts::TAU;
use std::path::PathBuf;

use rfiqkd_core::qcore::NoiseParams;
use rfiqkd_core::simkit::{MenuMode, SimMode};
use toml::Value;

use crate::error::{LabError, Result};

/// ⟨ZZ⟩ magnitude and X/Y fringe visibility of the reference experiment.
pub const CALIBRATED_ZZ: f64 = 0.987;
pub const CALIBRATED_VISIBILITY: f64 = 0.945;

pub const KNOWN_KEYS: &[&str] = &[
    "channel.beta_a",
    "channel.beta_b",
    "channel.bsm_phase_offset",
    "sweep.start",
    "sweep.end",
    "sweep.points",
    "noise.preset",
    "noise.depol_a",
    "noise.depol_b",
    "noise.dephase_a",
    "noise.dephase_b",
    "noise.background_click",
    "sim.mode",
    "sim.shots",
    "sim.seed",
    "protocol.alice_menu",
    "protocol.bob_menu",
    "protocol.phase_variant",
    "protocol.phase_theta",
    "output.directory",
    "output.emit_svg",
];

/// β_B sweep over the half-open interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl SweepSpec {
    pub fn full_turn(points: usize) -> Self {
        SweepSpec {
            start: 0.0,
            end: TAU,
            points,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.end - self.start) / self.points as f64;
        (0..self.points)
            .map(|k| self.start + k as f64 * step)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(LabError::Config(format!(
                "sweep.points = {} must be ≥ 2",
                self.points
            )));
        }
        if self.start.partial_cmp(&self.end) != Some(std::cmp::Ordering::Less) {
            return Err(LabError::Config(format!(
                "sweep.start = {} must be below sweep.end = {}",
                self.start, self.end
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub beta_a: f64,
    pub beta_b: f64,
    pub bsm_phase_offset: f64,
    /// When set, `beta_b` is ignored and swept instead.
    pub sweep: Option<SweepSpec>,
    pub noise: NoiseParams,
    pub mode: SimMode,
    pub shots: u64,
    pub seed: u64,
    pub alice_menu: MenuMode,
    pub bob_menu: MenuMode,
    pub phase_variant: bool,
    pub phase_theta: f64,
    pub out_dir: PathBuf,
    pub emit_svg: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            beta_a: 0.0,
            beta_b: 0.0,
            bsm_phase_offset: 0.0,
            sweep: None,
            noise: NoiseParams::ideal(),
            mode: SimMode::Analytic,
            shots: 100_000,
            seed: 0,
            alice_menu: MenuMode::Six,
            bob_menu: MenuMode::Six,
            phase_variant: false,
            phase_theta: 0.0,
            out_dir: PathBuf::from("out"),
            emit_svg: true,
        }
    }
}

impl ExperimentConfig {
    /// The β_B values this configuration evaluates, in order.
    pub fn beta_b_values(&self) -> Vec<f64> {
        match &self.sweep {
            Some(s) => s.values(),
            None => vec![self.beta_b],
        }
    }

    pub fn check_phase(&self) -> Option<f64> {
        self.phase_variant.then_some(self.phase_theta)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if self.mode == SimMode::MonteCarlo && self.shots < 1 {
            return Err(LabError::Config(
                "sim.shots must be ≥ 1 in montecarlo mode".into(),
            ));
        }
        self.noise.validate().map_err(|e| match e {
            rfiqkd_core::QkdError::Domain { name, value, range } => {
                LabError::Config(format!("noise.{name} = {value} is outside {range}"))
            }
            other => LabError::from(other),
        })?;
        if self.bob_menu != MenuMode::Six {
            return Err(LabError::Config(format!(
                "protocol.bob_menu must be \"six\", got \"{}\"",
                self.bob_menu
            )));
        }
        if self.phase_variant && self.alice_menu != MenuMode::OneCheck {
            return Err(LabError::Config(
                "protocol.phase_variant requires protocol.alice_menu = \"one\"".into(),
            ));
        }
        for (key, v) in [
            ("channel.beta_a", self.beta_a),
            ("channel.beta_b", self.beta_b),
            ("channel.bsm_phase_offset", self.bsm_phase_offset),
            ("protocol.phase_theta", self.phase_theta),
        ] {
            if !v.is_finite() {
                return Err(LabError::Config(format!("{key} must be finite")));
            }
        }
        Ok(())
    }
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut Vec<(String, Value)>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => out.push((key, other.clone())),
        }
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(LabError::Config(format!("{key} must be a number"))),
    }
}

fn as_u64(key: &str, v: &Value) -> Result<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(LabError::Config(format!(
            "{key} must be a non-negative integer"
        ))),
    }
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| LabError::Config(format!("{key} must be a string")))
}

fn as_bool(key: &str, v: &Value) -> Result<bool> {
    v.as_bool()
        .ok_or_else(|| LabError::Config(format!("{key} must be true or false")))
}

fn key_error(key: &str, e: rfiqkd_core::QkdError) -> LabError {
    LabError::Config(format!("{key}: {e}"))
}

fn probability(key: &str, v: &Value) -> Result<f64> {
    let p = as_f64(key, v)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(LabError::Config(format!("{key} = {p} is outside [0, 1]")));
    }
    Ok(p)
}

/// Parse a configuration document. Missing keys take defaults; unknown
/// keys and out-of-range values are errors naming the key.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let doc: toml::Table = text.parse().map_err(|e: toml::de::Error| {
        LabError::Config(format!("malformed document: {}", e.message()))
    })?;
    let mut entries = Vec::new();
    flatten("", &doc, &mut entries);

    if let Some((key, _)) = entries
        .iter()
        .find(|(k, _)| !KNOWN_KEYS.contains(&k.as_str()))
    {
        return Err(LabError::Config(format!("unknown key {key:?}")));
    }

    let mut cfg = ExperimentConfig::default();
    // the preset is the base the individual noise keys override
    if let Some((key, v)) = entries.iter().find(|(k, _)| k == "noise.preset") {
        cfg.noise = match as_str(key, v)? {
            "ideal" => NoiseParams::ideal(),
            "calibrated" => NoiseParams::calibrated(CALIBRATED_ZZ, CALIBRATED_VISIBILITY)?,
            other => {
                return Err(LabError::Config(format!(
                    "noise.preset = {other:?} (expected \"ideal\" or \"calibrated\")"
                )))
            }
        };
    }

    let mut sweep: Option<SweepSpec> = None;
    for (key, v) in &entries {
        let k = key.as_str();
        match k {
            "channel.beta_a" => cfg.beta_a = as_f64(k, v)?,
            "channel.beta_b" => cfg.beta_b = as_f64(k, v)?,
            "channel.bsm_phase_offset" => cfg.bsm_phase_offset = as_f64(k, v)?,
            "sweep.start" => sweep.get_or_insert(SweepSpec::full_turn(61)).start = as_f64(k, v)?,
            "sweep.end" => sweep.get_or_insert(SweepSpec::full_turn(61)).end = as_f64(k, v)?,
            "sweep.points" => {
                sweep.get_or_insert(SweepSpec::full_turn(61)).points = as_u64(k, v)? as usize
            }
            "noise.preset" => {}
            "noise.depol_a" => cfg.noise.depol_a = probability(k, v)?,
            "noise.depol_b" => cfg.noise.depol_b = probability(k, v)?,
            "noise.dephase_a" => cfg.noise.dephase_a = probability(k, v)?,
            "noise.dephase_b" => cfg.noise.dephase_b = probability(k, v)?,
            "noise.background_click" => cfg.noise.background_click = probability(k, v)?,
            "sim.mode" => cfg.mode = as_str(k, v)?.parse().map_err(|e| key_error(k, e))?,
            "sim.shots" => cfg.shots = as_u64(k, v)?,
            "sim.seed" => cfg.seed = as_u64(k, v)?,
            "protocol.alice_menu" => {
                cfg.alice_menu = as_str(k, v)?.parse().map_err(|e| key_error(k, e))?
            }
            "protocol.bob_menu" => {
                cfg.bob_menu = as_str(k, v)?.parse().map_err(|e| key_error(k, e))?
            }
            "protocol.phase_variant" => cfg.phase_variant = as_bool(k, v)?,
            "protocol.phase_theta" => cfg.phase_theta = as_f64(k, v)?,
            "output.directory" => cfg.out_dir = PathBuf::from(as_str(k, v)?),
            "output.emit_svg" => cfg.emit_svg = as_bool(k, v)?,
            _ => unreachable!("key list checked above"),
        }
    }
    cfg.sweep = sweep;
    cfg.validate()?;
    Ok(cfg)
}
