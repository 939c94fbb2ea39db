//! Two-frame pulse timelines.
//!
//! Everything is evaluated in the rotating frame of the write-read interferometer
//! (WRI). A wait of `Δt` precesses the state by `δ_W·Δt` about +z, a WRI pulse
//! rotates about the x-axis, and a pulse of the scramble-retrieve interferometer
//! (SRI) issued at absolute time `t` rotates about the in-plane axis at
//! `η(t) = (δ_W − δ_S)·t + φ_S`. Pulses are instantaneous; time advances only
//! through waits.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::bloch::{precess_unchecked, reduce_angle, rotate_unchecked, BlochVector};
use crate::error::{ensure_finite, Error, Result};

/// Detuning of both interferometers used in the reference experiment, `2π × 100 Hz`.
pub const REFERENCE_DETUNING: f64 = TAU * 100.0;
/// Duration of a WRI pulse in the reference experiment (annotation only).
pub const REFERENCE_WRI_PULSE_DURATION: f64 = 0.45e-3;
/// Duration of an SRI pulse in the reference experiment (annotation only).
pub const REFERENCE_SRI_PULSE_DURATION: f64 = 2.75e-3;

/// Raman detunings of the two interferometers and their relative phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSet {
    /// WRI detuning in rad/s.
    pub delta_w: f64,
    /// SRI detuning in rad/s.
    pub delta_s: f64,
    /// WRI–SRI phase offset, radians in `[0, 2π)`.
    pub phi_s: f64,
}

impl FrameSet {
    pub fn new(delta_w: f64, delta_s: f64, phi_s: f64) -> Result<Self> {
        ensure_finite("delta_W", delta_w)?;
        ensure_finite("delta_S", delta_s)?;
        ensure_finite("phi_S", phi_s)?;
        Ok(Self { delta_w, delta_s, phi_s: reduce_angle(phi_s) })
    }

    /// Both detunings at `2π × 100 rad/s`, `φ_S = 0`.
    pub fn reference() -> Self {
        Self { delta_w: REFERENCE_DETUNING, delta_s: REFERENCE_DETUNING, phi_s: 0.0 }
    }

    /// Same detunings with a different phase offset.
    pub fn with_phi(&self, phi_s: f64) -> Self {
        Self { phi_s: reduce_angle(phi_s), ..*self }
    }

    fn validate(&self) -> Result<()> {
        ensure_finite("delta_W", self.delta_w)?;
        ensure_finite("delta_S", self.delta_s)?;
        ensure_finite("phi_S", self.phi_s)
    }
}

impl Default for FrameSet {
    fn default() -> Self {
        Self::reference()
    }
}

/// Which interferometer drives a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// Write-read interferometer.
    W,
    /// Scramble-retrieve interferometer.
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SequenceEvent {
    Pulse { frame: Frame, area: f64 },
    Wait { duration: f64 },
}

impl SequenceEvent {
    pub fn pulse(frame: Frame, area: f64) -> Self {
        SequenceEvent::Pulse { frame, area }
    }

    pub fn wait(duration: f64) -> Self {
        SequenceEvent::Wait { duration }
    }
}

/// Nominal pulse durations carried alongside a timeline. They do not enter the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseDurations {
    pub tau_w: f64,
    pub tau_s: f64,
}

impl PulseDurations {
    pub fn reference() -> Self {
        Self { tau_w: REFERENCE_WRI_PULSE_DURATION, tau_s: REFERENCE_SRI_PULSE_DURATION }
    }
}

/// Ordered list of pulses and waits.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    pub events: Vec<SequenceEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse_durations: Option<PulseDurations>,
}

impl Timeline {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_events(events: Vec<SequenceEvent>) -> Self {
        Self { events, pulse_durations: None }
    }

    pub fn pulse(mut self, frame: Frame, area: f64) -> Self {
        self.events.push(SequenceEvent::pulse(frame, area));
        self
    }

    pub fn wait(mut self, duration: f64) -> Self {
        self.events.push(SequenceEvent::wait(duration));
        self
    }

    pub fn then(mut self, other: &Timeline) -> Self {
        self.events.extend_from_slice(&other.events);
        self
    }

    pub fn annotated(mut self, durations: PulseDurations) -> Self {
        self.pulse_durations = Some(durations);
        self
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Total elapsed time (sum of waits).
    pub fn duration(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match e {
                SequenceEvent::Wait { duration } => *duration,
                SequenceEvent::Pulse { .. } => 0.0,
            })
            .sum()
    }

    /// Absolute time of every pulse, in order.
    pub fn pulse_times(&self) -> Vec<(f64, Frame, f64)> {
        let mut t = 0.0;
        let mut out = Vec::new();
        for event in &self.events {
            match *event {
                SequenceEvent::Wait { duration } => t += duration,
                SequenceEvent::Pulse { frame, area } => out.push((t, frame, area)),
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (i, event) in self.events.iter().enumerate() {
            match *event {
                SequenceEvent::Wait { duration } => {
                    if !duration.is_finite() || duration < 0.0 {
                        return Err(Error::InvalidTimeline(format!(
                            "event {i}: wait duration must be finite and non-negative, got {duration}"
                        )));
                    }
                }
                SequenceEvent::Pulse { area, .. } => {
                    if !area.is_finite() {
                        return Err(Error::InvalidTimeline(format!(
                            "event {i}: pulse area must be finite, got {area}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Axis azimuth of an SRI pulse issued at absolute time `t`, reduced to `[0, 2π)`.
pub fn sri_axis_angle(t: f64, frames: &FrameSet) -> f64 {
    reduce_angle((frames.delta_w - frames.delta_s) * t + frames.phi_s)
}

fn apply(v: BlochVector, t: &mut f64, event: &SequenceEvent, frames: &FrameSet) -> BlochVector {
    match *event {
        SequenceEvent::Wait { duration } => {
            *t += duration;
            precess_unchecked(v, reduce_angle(frames.delta_w * duration))
        }
        SequenceEvent::Pulse { frame: Frame::W, area } => rotate_unchecked(v, 0.0, reduce_angle(area)),
        SequenceEvent::Pulse { frame: Frame::S, area } => {
            rotate_unchecked(v, sri_axis_angle(*t, frames), reduce_angle(area))
        }
    }
}

fn check_inputs(timeline: &Timeline, frames: &FrameSet, v0: &BlochVector) -> Result<()> {
    timeline.validate()?;
    frames.validate()?;
    v0.check_finite()
}

/// Final state after applying every event of `timeline` to `v0`.
pub fn simulate(timeline: &Timeline, frames: &FrameSet, v0: BlochVector) -> Result<BlochVector> {
    check_inputs(timeline, frames, &v0)?;
    Ok(simulate_unchecked(timeline, frames, v0))
}

/// `simulate` without validation, for inner loops over inputs already checked once.
pub(crate) fn simulate_unchecked(timeline: &Timeline, frames: &FrameSet, v0: BlochVector) -> BlochVector {
    let mut t = 0.0;
    timeline.events.iter().fold(v0, |v, e| apply(v, &mut t, e, frames))
}

/// State after every event, starting with `(0, v0)`.
pub fn trajectory(
    timeline: &Timeline,
    frames: &FrameSet,
    v0: BlochVector,
) -> Result<Vec<(f64, BlochVector)>> {
    check_inputs(timeline, frames, &v0)?;
    let mut t = 0.0;
    let mut v = v0;
    let mut out = Vec::with_capacity(timeline.len() + 1);
    out.push((t, v));
    for event in &timeline.events {
        v = apply(v, &mut t, event, frames);
        out.push((t, v));
    }
    Ok(out)
}
