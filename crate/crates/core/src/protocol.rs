//! Write–scramble–retrieve–read protocols and the secure yes/no record.
//!
//! A choice is written as `|+⟩` (area `π/2`) or `|−⟩` (area `3π/2`), scrambled by an
//! SRI pulse, descrambled by a second SRI pulse once the SRI has accumulated an odd
//! multiple of `π`, and read out by a `π/2` WRI pulse once the accumulated WRI phase
//! is a multiple of `2π`. With an ideal protocol "yes" reads `P_e = 1` and "no"
//! reads `P_e = 0` whatever the phase offset `φ_S`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::bloch::{excitation_probability, BlochVector};
use crate::error::{ensure_finite, Error, Result};
use crate::sequence::{simulate, Frame, FrameSet, Timeline};

/// Relative phase tolerance for timing checks.
pub const TIMING_TOLERANCE: f64 = 1e-9;
/// Default decision boundary for [`decode_choice`].
pub const DECODE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    Yes,
    No,
}

impl Choice {
    pub const ALL: [Choice; 2] = [Choice::Yes, Choice::No];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub frames: FrameSet,
    /// write → scramble, seconds
    pub t1: f64,
    /// scramble → retrieve, seconds
    pub t2: f64,
    /// retrieve → read, seconds
    pub t3: f64,
    pub write_area: f64,
    pub scramble_area: f64,
    pub read_area: f64,
}

impl ProtocolConfig {
    /// Reference timings: `T1 = T2 = 5 ms`, read right after retrieve, `π` scramble.
    pub fn reference() -> Self {
        Self {
            frames: FrameSet::reference(),
            t1: 5e-3,
            t2: 5e-3,
            t3: 0.0,
            write_area: FRAC_PI_2,
            scramble_area: PI,
            read_area: FRAC_PI_2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("T1", self.t1), ("T2", self.t2), ("T3", self.t3)] {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {t}")));
            }
        }
        ensure_finite("write area", self.write_area)?;
        ensure_finite("scramble area", self.scramble_area)?;
        ensure_finite("read area", self.read_area)?;
        ensure_finite("delta_W", self.frames.delta_w)?;
        ensure_finite("delta_S", self.frames.delta_s)?;
        ensure_finite("phi_S", self.frames.phi_s)
    }

    /// Write–scramble–retrieve–read timeline using `write_area` for the write pulse.
    pub fn timeline(&self) -> Timeline {
        protocol_timeline(self.write_area, self)
    }

    /// Checks the descrambling condition `δ_S·T2 = (2m+1)π` and the read condition
    /// `δ_W·(T1+T2+T3) = 2kπ`, each to [`TIMING_TOLERANCE`] relative phase.
    pub fn check_timing(&self) -> Result<()> {
        self.validate()?;
        let sri_phase = self.frames.delta_s * self.t2;
        let m = ((sri_phase / PI - 1.0) / 2.0).round();
        let target = (2.0 * m + 1.0) * PI;
        if (sri_phase - target).abs() > TIMING_TOLERANCE * target.abs().max(PI) {
            return Err(Error::ProtocolMisconfiguration(format!(
                "SRI phase between scramble and retrieve is {sri_phase} rad, not an odd multiple of π"
            )));
        }
        let wri_phase = self.frames.delta_w * (self.t1 + self.t2 + self.t3);
        let k = (wri_phase / TAU).round();
        let target = k * TAU;
        if (wri_phase - target).abs() > TIMING_TOLERANCE * target.abs().max(TAU) {
            return Err(Error::ProtocolMisconfiguration(format!(
                "WRI phase before the read pulse is {wri_phase} rad, not a multiple of 2π"
            )));
        }
        Ok(())
    }
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self::reference()
    }
}

fn positive_detuning(name: &str, delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {delta}")))
    }
}

/// Scramble → retrieve delay `(2m+1)π/δ_S`.
pub fn retrieve_delay(delta_s: f64, m: u32) -> Result<f64> {
    positive_detuning("delta_S", delta_s)?;
    Ok((2.0 * f64::from(m) + 1.0) * PI / delta_s)
}

/// Write → read delay `(2n+1)π/δ_W` at which a normal Ramsey sequence returns to `|g⟩`.
pub fn faithful_read_delay(delta_w: f64, n: u32) -> Result<f64> {
    positive_detuning("delta_W", delta_w)?;
    Ok((2.0 * f64::from(n) + 1.0) * PI / delta_w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadDelay {
    /// Retrieve → read delay in seconds.
    pub t3: f64,
    /// Multiple of `2π` accumulated by the WRI before the read pulse.
    pub k: u64,
}

/// Retrieve → read delay making the total WRI phase `2kπ`.
///
/// With `k = None` the smallest feasible `k` is chosen, so the delay may be zero.
pub fn secure_read_delay(frames: &FrameSet, t1: f64, t2: f64, k: Option<u64>) -> Result<ReadDelay> {
    positive_detuning("delta_W", frames.delta_w)?;
    for (name, t) in [("T1", t1), ("T2", t2)] {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {t}")));
        }
    }
    let elapsed = frames.delta_w * (t1 + t2);
    let turns = elapsed / TAU;
    let k = match k {
        Some(k) => {
            if (k as f64) < turns * (1.0 - TIMING_TOLERANCE) {
                return Err(Error::InfeasibleTiming(format!(
                    "WRI phase {elapsed} rad already exceeds 2π·{k}"
                )));
            }
            k
        }
        None => (turns * (1.0 - TIMING_TOLERANCE)).ceil().max(0.0) as u64,
    };
    let t3 = ((k as f64 * TAU - elapsed) / frames.delta_w).max(0.0);
    // absorb rounding residue when the target is already met
    let t3 = if t3 * frames.delta_w <= TIMING_TOLERANCE * elapsed.max(TAU) { 0.0 } else { t3 };
    Ok(ReadDelay { t3, k })
}

/// Write pulse area for a choice: `π/2` for yes, `3π/2` for no.
pub fn encode_choice(choice: Choice) -> f64 {
    match choice {
        Choice::Yes => FRAC_PI_2,
        Choice::No => 3.0 * FRAC_PI_2,
    }
}

fn protocol_timeline(write_area: f64, config: &ProtocolConfig) -> Timeline {
    Timeline::new()
        .pulse(Frame::W, write_area)
        .wait(config.t1)
        .pulse(Frame::S, config.scramble_area)
        .wait(config.t2)
        .pulse(Frame::S, config.scramble_area)
        .wait(config.t3)
        .pulse(Frame::W, config.read_area)
}

/// Full write–scramble–retrieve–read timeline for `choice`. The write area comes from
/// [`encode_choice`]; `config.write_area` is not used.
pub fn secure_timeline(choice: Choice, config: &ProtocolConfig) -> Timeline {
    protocol_timeline(encode_choice(choice), config)
}

/// Runs the secure record for `choice` at phase offset `phi_s` and returns the read-out `P_e`.
pub fn run_secure_choice(choice: Choice, phi_s: f64, config: &ProtocolConfig) -> Result<f64> {
    config.check_timing()?;
    ensure_finite("phi_S", phi_s)?;
    let frames = config.frames.with_phi(phi_s);
    excitation_probability(simulate(&secure_timeline(choice, config), &frames, BlochVector::ground())?)
}

/// Maps a read-out excitation probability back to a choice.
pub fn decode_choice(p_e: f64, threshold: f64) -> Result<Choice> {
    if !(0.0..=1.0).contains(&p_e) {
        return Err(Error::InvalidArgument(format!("excitation probability {p_e} is outside [0, 1]")));
    }
    if p_e > threshold {
        Ok(Choice::Yes)
    } else if p_e < threshold {
        Ok(Choice::No)
    } else {
        Err(Error::Indeterminate(p_e))
    }
}

/// Bloch vector right after the scramble pulse.
pub fn scrambled_state(choice: Choice, phi_s: f64, config: &ProtocolConfig) -> Result<BlochVector> {
    config.validate()?;
    let tl = Timeline::new()
        .pulse(Frame::W, encode_choice(choice))
        .wait(config.t1)
        .pulse(Frame::S, config.scramble_area);
    simulate(&tl, &config.frames.with_phi(phi_s), BlochVector::ground())
}

/// Excitation probability an observer would read at the scrambled stage: the read
/// pulse is applied immediately after the scramble pulse, without retrieval.
pub fn scrambled_readout(choice: Choice, phi_s: f64, config: &ProtocolConfig) -> Result<f64> {
    config.validate()?;
    let tl = Timeline::new()
        .pulse(Frame::W, encode_choice(choice))
        .wait(config.t1)
        .pulse(Frame::S, config.scramble_area)
        .pulse(Frame::W, config.read_area);
    excitation_probability(simulate(&tl, &config.frames.with_phi(phi_s), BlochVector::ground())?)
}

/// Largest elementwise gap between the sorted scrambled-stage readouts for yes and for no
/// over `n_phi` uniform phase offsets.
pub fn secrecy_check(config: &ProtocolConfig, n_phi: usize) -> Result<f64> {
    if n_phi < 16 {
        return Err(Error::InvalidArgument(format!("n_phi must be at least 16, got {n_phi}")));
    }
    let grid = crate::analysis::phi_grid(n_phi);
    let samples = |choice: Choice| -> Result<Vec<f64>> {
        let mut v = grid
            .iter()
            .map(|&phi| scrambled_readout(choice, phi, config))
            .collect::<Result<Vec<f64>>>()?;
        v.sort_by(f64::total_cmp);
        Ok(v)
    };
    let yes = samples(Choice::Yes)?;
    let no = samples(Choice::No)?;
    Ok(yes.iter().zip(&no).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}
