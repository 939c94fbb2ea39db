//! Scenario files.
//!
//! A scenario is a JSON object with a `mode` and optional sections; every omitted
//! section takes the reference-experiment default. Detunings are given in Hz
//! (multiplied by `2π` internally) and every angle in units of `π`. Parsing fills
//! in all defaults, so emitting a parsed scenario and parsing it again yields the
//! same value.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{linspace, FlopSequence, DEFAULT_PHI_SAMPLES, DEFAULT_T_POINTS};
use crate::bloch::BlochVector;
use crate::expsim::{AtomCount, NoiseModel, PhasePolicy};
use crate::protocol::{secure_read_delay, Choice, ProtocolConfig};
use crate::sequence::FrameSet;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("invalid field `{field}`: {constraint}")]
    InvalidField { field: String, constraint: String },
}

impl ScenarioError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioError::Malformed(_) => "malformed-input",
            ScenarioError::UnknownMode(_) => "unknown-mode",
            ScenarioError::MissingField(_) => "missing-field",
            ScenarioError::InvalidField { .. } => "invalid-field",
        }
    }

    fn invalid(field: &str, constraint: impl Into<String>) -> Self {
        ScenarioError::InvalidField { field: field.to_string(), constraint: constraint.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Normal,
    Scrambled,
    Retrieved,
    Sdbv,
    AmbiguitySweep,
    Optimize,
    SecureChoice,
    Fit,
}

impl Mode {
    pub const ALL: [Mode; 8] = [
        Mode::Normal,
        Mode::Scrambled,
        Mode::Retrieved,
        Mode::Sdbv,
        Mode::AmbiguitySweep,
        Mode::Optimize,
        Mode::SecureChoice,
        Mode::Fit,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Normal => "normal",
            Mode::Scrambled => "scrambled",
            Mode::Retrieved => "retrieved",
            Mode::Sdbv => "sdbv",
            Mode::AmbiguitySweep => "ambiguity-sweep",
            Mode::Optimize => "optimize",
            Mode::SecureChoice => "secure-choice",
            Mode::Fit => "fit",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| ScenarioError::UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramesConfig {
    pub delta_w_hz: f64,
    pub delta_s_hz: f64,
    #[serde(default)]
    pub phi_s_pi: f64,
}

impl Default for FramesConfig {
    fn default() -> Self {
        Self { delta_w_hz: 100.0, delta_s_hz: 100.0, phi_s_pi: 0.0 }
    }
}

impl FramesConfig {
    pub fn frame_set(&self) -> FrameSet {
        FrameSet {
            delta_w: TAU * self.delta_w_hz,
            delta_s: TAU * self.delta_s_hz,
            phi_s: crate::bloch::reduce_angle(PI * self.phi_s_pi),
        }
    }
}

fn default_half() -> f64 {
    0.5
}

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    /// write → scramble, seconds
    pub t1: f64,
    /// scramble → retrieve, seconds
    pub t2: f64,
    /// retrieve → read, seconds; resolved to the smallest `2kπ` delay when omitted
    #[serde(default)]
    pub t3: Option<f64>,
    #[serde(default = "default_half")]
    pub write_area_pi: f64,
    #[serde(default = "default_one")]
    pub scramble_area_pi: f64,
    #[serde(default = "default_half")]
    pub read_area_pi: f64,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        Self { t1: 5e-3, t2: 5e-3, t3: None, write_area_pi: 0.5, scramble_area_pi: 1.0, read_area_pi: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TGrid {
    Linspace { start: f64, stop: f64, points: usize },
    Values(Vec<f64>),
}

impl TGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            TGrid::Linspace { start, stop, points } => linspace(*start, *stop, *points),
            TGrid::Values(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Interval grid in seconds; defaults to two WRI periods on 201 points.
    #[serde(default)]
    pub t: Option<TGrid>,
    #[serde(default = "default_phi_samples")]
    pub phi_samples: usize,
}

fn default_phi_samples() -> usize {
    DEFAULT_PHI_SAMPLES
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { t: None, phi_samples: DEFAULT_PHI_SAMPLES }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedState {
    Ground,
    Excited,
    /// State written by a `π/2` write pulse from `|g⟩`.
    Plus,
    /// State written by a `3π/2` write pulse from `|g⟩`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RecordedState {
    Named(NamedState),
    Angles { polar_pi: f64, azimuth_pi: f64 },
    Vector { x: f64, y: f64, z: f64 },
}

impl Default for RecordedState {
    fn default() -> Self {
        RecordedState::Named(NamedState::Plus)
    }
}

impl RecordedState {
    pub fn vector(&self) -> BlochVector {
        match *self {
            RecordedState::Named(NamedState::Ground) => BlochVector::ground(),
            RecordedState::Named(NamedState::Excited) => BlochVector::excited(),
            RecordedState::Named(NamedState::Plus) => BlochVector::new(0.0, -1.0, 0.0),
            RecordedState::Named(NamedState::Minus) => BlochVector::new(0.0, 1.0, 0.0),
            RecordedState::Angles { polar_pi, azimuth_pi } => BlochVector::from_angles(PI * polar_pi, PI * azimuth_pi),
            RecordedState::Vector { x, y, z } => BlochVector::new(x, y, z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Atoms per shot; `null` for exact readout.
    #[serde(default)]
    pub atom_count: Option<u64>,
    /// Contrast decay time in seconds; `null` for none.
    #[serde(default)]
    pub contrast_decay_tau: Option<f64>,
    #[serde(default)]
    pub phase_jitter_sigma_pi: f64,
    #[serde(default)]
    pub seed: u64,
}

impl NoiseConfig {
    pub fn model(&self) -> NoiseModel {
        NoiseModel {
            atom_count: self.atom_count.map_or(AtomCount::Exact, AtomCount::Finite),
            contrast_decay_tau: self.contrast_decay_tau.unwrap_or(f64::INFINITY),
            phase_jitter_sigma: PI * self.phase_jitter_sigma_pi,
            rng_seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlopKind {
    Normal,
    Scrambled,
    Retrieved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialsConfig {
    pub sequence: FlopKind,
    pub count: usize,
    pub phase: PhasePolicy,
}

impl Default for TrialsConfig {
    fn default() -> Self {
        Self { sequence: FlopKind::Normal, count: 5, phase: PhasePolicy::Fixed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub start_pi: f64,
    pub stop_pi: f64,
    pub points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { start_pi: 0.0, stop_pi: 2.0, points: 41 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(ScenarioError::invalid("output.format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: Format,
}

fn default_wait_phase() -> f64 {
    0.5
}

fn default_tolerance() -> f64 {
    1e-3
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

/// A validated scenario with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    pub mode: Mode,
    #[serde(default)]
    pub frames: FramesConfig,
    #[serde(default)]
    pub protocol: ProtocolSection,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub recorded: RecordedState,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub choice: Option<Choice>,
    /// Precession between scramble and read for the xz projection, units of π.
    #[serde(default = "default_wait_phase")]
    pub wait_phase_pi: f64,
    #[serde(default)]
    pub sweep: SweepConfig,
    /// Scramble-area tolerance of the optimizer, radians.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub trials: TrialsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Non-fatal findings from validation.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl Scenario {
    pub fn frame_set(&self) -> FrameSet {
        self.frames.frame_set()
    }

    pub fn t_grid(&self) -> Vec<f64> {
        self.grid.t.as_ref().map(TGrid::values).unwrap_or_default()
    }

    pub fn protocol_config(&self) -> ProtocolConfig {
        ProtocolConfig {
            frames: self.frame_set(),
            t1: self.protocol.t1,
            t2: self.protocol.t2,
            t3: self.protocol.t3.unwrap_or(0.0),
            write_area: PI * self.protocol.write_area_pi,
            scramble_area: PI * self.protocol.scramble_area_pi,
            read_area: PI * self.protocol.read_area_pi,
        }
    }

    pub fn flop_sequence(&self, kind: FlopKind) -> FlopSequence {
        let theta_s = PI * self.protocol.scramble_area_pi;
        match kind {
            FlopKind::Normal => FlopSequence::Normal,
            FlopKind::Scrambled => FlopSequence::Scrambled { theta_s, t1: self.protocol.t1 },
            FlopKind::Retrieved => FlopSequence::Retrieved { theta_s, t1: self.protocol.t1, t2: self.protocol.t2 },
        }
    }

    pub fn noise_model(&self) -> Option<NoiseModel> {
        self.noise.map(|n| n.model())
    }

    /// Resolved scenario as pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Fills defaults that depend on other fields and checks every constraint.
    fn resolve(mut self) -> Result<Self, ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::invalid(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let f = self.frames;
        for (field, v) in [("frames.delta_w_hz", f.delta_w_hz), ("frames.delta_s_hz", f.delta_s_hz)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ScenarioError::invalid(field, "must be a positive finite detuning"));
            }
        }
        finite("frames.phi_s_pi", f.phi_s_pi)?;

        let p = self.protocol;
        non_negative("protocol.t1", p.t1)?;
        non_negative("protocol.t2", p.t2)?;
        if let Some(t3) = p.t3 {
            non_negative("protocol.t3", t3)?;
        }
        finite("protocol.write_area_pi", p.write_area_pi)?;
        finite("protocol.scramble_area_pi", p.scramble_area_pi)?;
        finite("protocol.read_area_pi", p.read_area_pi)?;
        if p.t3.is_none() {
            let delay = secure_read_delay(&self.frame_set(), p.t1, p.t2, None)
                .map_err(|e| ScenarioError::invalid("protocol.t3", e.to_string()))?;
            self.protocol.t3 = Some(delay.t3);
        }

        let grid = self.grid.t.clone().unwrap_or(TGrid::Linspace {
            start: 0.0,
            stop: 2.0 / f.delta_w_hz,
            points: DEFAULT_T_POINTS,
        });
        let values = grid.values();
        if values.is_empty() {
            return Err(ScenarioError::invalid("grid.t", "interval grid must contain at least one point"));
        }
        if values.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(ScenarioError::invalid("grid.t", "interval grid values must be finite and non-negative"));
        }
        self.grid.t = Some(grid);
        if self.grid.phi_samples == 0 {
            return Err(ScenarioError::invalid("grid.phi_samples", "must be at least 1"));
        }

        let v = self.recorded.vector();
        if !v.is_finite() || (v.norm() - 1.0).abs() > 1e-9 {
            return Err(ScenarioError::invalid("recorded", "must be a unit Bloch vector"));
        }
        finite("wait_phase_pi", self.wait_phase_pi)?;
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(ScenarioError::invalid("tolerance", "must be positive"));
        }
        if let Some(n) = &self.noise {
            if n.atom_count == Some(0) {
                return Err(ScenarioError::invalid("noise.atom_count", "must be at least 1 or null"));
            }
            if let Some(tau) = n.contrast_decay_tau {
                if tau.is_nan() || tau <= 0.0 {
                    return Err(ScenarioError::invalid("noise.contrast_decay_tau", "must be positive or null"));
                }
            }
            if !(n.phase_jitter_sigma_pi >= 0.0 && n.phase_jitter_sigma_pi.is_finite()) {
                return Err(ScenarioError::invalid("noise.phase_jitter_sigma_pi", "must be finite and non-negative"));
            }
        }

        self.warnings.clear();
        match self.mode {
            Mode::Retrieved => {
                if let Some(w) = descrambling_warning(&self) {
                    self.warnings.push(w);
                }
            }
            Mode::AmbiguitySweep => {
                let s = self.sweep;
                finite("sweep.start_pi", s.start_pi)?;
                finite("sweep.stop_pi", s.stop_pi)?;
                if s.points == 0 {
                    return Err(ScenarioError::invalid("sweep.points", "must be at least 1"));
                }
            }
            Mode::SecureChoice => {
                if self.choice.is_none() {
                    return Err(ScenarioError::MissingField("choice".into()));
                }
                self.protocol_config()
                    .check_timing()
                    .map_err(|e| ScenarioError::invalid("protocol", e.to_string()))?;
            }
            Mode::Fit => {
                if self.noise.is_none() {
                    return Err(ScenarioError::MissingField("noise".into()));
                }
                if self.trials.count == 0 {
                    return Err(ScenarioError::invalid("trials.count", "must be at least 1"));
                }
                if values.len() < 6 {
                    return Err(ScenarioError::invalid("grid.t", "fitting needs at least 6 intervals"));
                }
                if self.trials.sequence == FlopKind::Retrieved {
                    if let Some(w) = descrambling_warning(&self) {
                        self.warnings.push(w);
                    }
                }
            }
            Mode::Normal | Mode::Scrambled | Mode::Sdbv | Mode::Optimize => {}
        }
        Ok(self)
    }
}

fn finite(field: &str, v: f64) -> Result<(), ScenarioError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ScenarioError::invalid(field, "must be finite"))
    }
}

fn non_negative(field: &str, v: f64) -> Result<(), ScenarioError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(ScenarioError::invalid(field, "must be finite and non-negative"))
    }
}

fn descrambling_warning(s: &Scenario) -> Option<String> {
    let phase = s.frame_set().delta_s * s.protocol.t2;
    let odd = ((phase / PI - 1.0) / 2.0).round() * 2.0 + 1.0;
    let tol = crate::protocol::TIMING_TOLERANCE * (odd * PI).abs().max(PI);
    if (phase - odd * PI).abs() > tol {
        Some(format!(
            "SRI phase between scramble and retrieve is {:.6}π, not an odd multiple of π; retrieval will not descramble",
            phase / PI
        ))
    } else {
        None
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    if text.trim().is_empty() {
        return Err(ScenarioError::Malformed("empty document".into()));
    }
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ScenarioError::Malformed(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ScenarioError::Malformed("top level must be a JSON object".into()))?;
    match obj.get("mode") {
        None => return Err(ScenarioError::MissingField("mode".into())),
        Some(serde_json::Value::String(m)) => {
            m.parse::<Mode>()?;
        }
        Some(_) => return Err(ScenarioError::invalid("mode", "must be a string")),
    }
    let scenario: Scenario = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        if let Some(rest) = inner.strip_prefix("missing field `") {
            let name = rest.split('`').next().unwrap_or_default();
            let field = if path == "." { name.to_string() } else { format!("{path}.{name}") };
            ScenarioError::MissingField(field)
        } else {
            ScenarioError::InvalidField { field: path, constraint: inner }
        }
    })?;
    scenario.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_normal_scenario_uses_reference_detuning() {
        let s = parse_scenario(r#"{"mode": "normal"}"#).unwrap();
        assert_eq!(s.mode, Mode::Normal);
        assert_eq!(s.frame_set().delta_w, TAU * 100.0);
        assert_eq!(s.frame_set().delta_w, crate::sequence::REFERENCE_DETUNING);
        assert_eq!(s.t_grid().len(), DEFAULT_T_POINTS);
        assert_eq!(s.protocol.t3, Some(0.0));
    }

    #[test]
    fn empty_and_garbage_documents_are_malformed() {
        assert_eq!(parse_scenario("").unwrap_err().code(), "malformed-input");
        assert_eq!(parse_scenario("   \n").unwrap_err().code(), "malformed-input");
        assert_eq!(parse_scenario("{").unwrap_err().code(), "malformed-input");
        assert_eq!(parse_scenario("[1, 2]").unwrap_err().code(), "malformed-input");
    }

    #[test]
    fn mode_errors() {
        assert_eq!(parse_scenario("{}").unwrap_err(), ScenarioError::MissingField("mode".into()));
        assert_eq!(
            parse_scenario(r#"{"mode": "teleport"}"#).unwrap_err(),
            ScenarioError::UnknownMode("teleport".into())
        );
    }

    #[test]
    fn field_errors_name_the_field() {
        let e = parse_scenario(r#"{"mode": "normal", "grid": {"t": {"start": 0, "stop": 1, "points": 0}}}"#)
            .unwrap_err();
        assert!(matches!(&e, ScenarioError::InvalidField { field, .. } if field == "grid.t"), "{e:?}");

        let e = parse_scenario(r#"{"mode": "normal", "frames": {"delta_w_hz": -5, "delta_s_hz": 100}}"#).unwrap_err();
        assert!(matches!(&e, ScenarioError::InvalidField { field, .. } if field == "frames.delta_w_hz"));

        let e = parse_scenario(r#"{"mode": "normal", "frames": {"delta_w_hz": 100}}"#).unwrap_err();
        assert_eq!(e, ScenarioError::MissingField("frames.delta_s_hz".into()));

        let e = parse_scenario(r#"{"mode": "normal", "grid": {"phi_samples": "many"}}"#).unwrap_err();
        assert!(matches!(&e, ScenarioError::InvalidField { field, .. } if field == "grid.phi_samples"));

        let e = parse_scenario(r#"{"mode": "normal", "colour": "blue"}"#).unwrap_err();
        assert_eq!(e.code(), "invalid-field");

        let e = parse_scenario(r#"{"mode": "secure-choice"}"#).unwrap_err();
        assert_eq!(e, ScenarioError::MissingField("choice".into()));

        let e = parse_scenario(r#"{"mode": "fit"}"#).unwrap_err();
        assert_eq!(e, ScenarioError::MissingField("noise".into()));

        let e = parse_scenario(r#"{"mode": "normal", "schema_version": 7}"#).unwrap_err();
        assert!(matches!(&e, ScenarioError::InvalidField { field, .. } if field == "schema_version"));
    }

    #[test]
    fn unmet_descrambling_condition_warns_but_parses() {
        // δ_S·T2 = 2π·100·1.25 ms = π/2
        let s = parse_scenario(r#"{"mode": "retrieved", "protocol": {"t1": 0.005, "t2": 0.00125}}"#).unwrap();
        assert_eq!(s.warnings.len(), 1);
        let s = parse_scenario(r#"{"mode": "retrieved"}"#).unwrap();
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn secure_choice_rejects_bad_timing() {
        let e = parse_scenario(
            r#"{"mode": "secure-choice", "choice": "yes", "protocol": {"t1": 0.005, "t2": 0.004}}"#,
        )
        .unwrap_err();
        assert!(matches!(&e, ScenarioError::InvalidField { field, .. } if field == "protocol"));
    }

    #[test]
    fn recorded_state_forms() {
        let s = parse_scenario(r#"{"mode": "sdbv", "recorded": "excited"}"#).unwrap();
        assert_eq!(s.recorded.vector(), BlochVector::excited());
        let s = parse_scenario(r#"{"mode": "sdbv", "recorded": {"polar_pi": 0.5, "azimuth_pi": 0}}"#).unwrap();
        assert!((s.recorded.vector().x - 1.0).abs() < 1e-15);
        let s = parse_scenario(r#"{"mode": "sdbv", "recorded": {"x": 0, "y": 0, "z": 1}}"#).unwrap();
        assert_eq!(s.recorded.vector(), BlochVector::ground());
        assert!(parse_scenario(r#"{"mode": "sdbv", "recorded": {"x": 0, "y": 0, "z": 2}}"#).is_err());
    }

    #[test]
    fn explicit_grid_values() {
        let s = parse_scenario(r#"{"mode": "normal", "grid": {"t": [0, 0.001, 0.002]}}"#).unwrap();
        assert_eq!(s.t_grid(), vec![0.0, 0.001, 0.002]);
        let e = parse_scenario(r#"{"mode": "normal", "grid": {"t": []}}"#).unwrap_err();
        assert!(matches!(&e, ScenarioError::InvalidField { field, .. } if field == "grid.t"));
    }
}
