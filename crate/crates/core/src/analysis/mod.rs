//! Ramsey flops, scrambled state distributions and phase-ambiguity metrics.
//!
//! `φ_S` is always sampled on the deterministic grid `φ_k = 2πk/n` here; random
//! draws of the phase offset belong to [`crate::expsim`].

mod ambiguity;
mod optimize;
pub mod search;

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{excitation_probability, rotate_unchecked, BlochVector};
use crate::error::{Error, Result};
use crate::sequence::{simulate_unchecked, Frame, FrameSet, Timeline};

pub use ambiguity::{ambiguity_report, AmbiguityReport};
pub use optimize::{optimize_scramble_area, ScrambleOptimum, SCAN_POINTS};

/// Default number of `φ_S` samples.
pub const DEFAULT_PHI_SAMPLES: usize = 256;
/// Default number of interval samples.
pub const DEFAULT_T_POINTS: usize = 201;

/// Tolerance on `|‖v‖ − 1|` for vectors required to be pure states.
const UNIT_NORM_TOLERANCE: f64 = 1e-9;

/// `n` evenly spaced phase offsets `2πk/n`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points).map(|i| start + step * i as f64).collect()
        }
    }
}

/// Two flop periods, `[0, 4π/δ_W]`, on 201 points.
pub fn default_t_grid(delta_w: f64) -> Vec<f64> {
    linspace(0.0, 2.0 * TAU / delta_w.abs(), DEFAULT_T_POINTS)
}

pub(crate) fn check_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("interval grid is empty".into()));
    }
    if let Some(bad) = t_grid.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "interval grid values must be finite and non-negative, got {bad}"
        )));
    }
    Ok(())
}

pub(crate) fn check_phi_samples(phi: &[f64]) -> Result<()> {
    if phi.is_empty() {
        return Err(Error::InvalidArgument("phase sample list is empty".into()));
    }
    if let Some(bad) = phi.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("phase samples must be finite, got {bad}")));
    }
    Ok(())
}

pub(crate) fn check_unit(name: &str, v: &BlochVector) -> Result<()> {
    if !v.is_finite() || (v.norm() - 1.0).abs() > UNIT_NORM_TOLERANCE {
        return Err(Error::InvalidArgument(format!("{name} must be a unit Bloch vector, got {v:?}")));
    }
    Ok(())
}

fn check_finite_param(name: &str, value: f64) -> Result<()> {
    crate::error::ensure_finite(name, value)
}

/// The three Ramsey sequences started from `|g⟩` with `π/2` write and read pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlopSequence {
    /// write, wait `T`, read
    Normal,
    /// write, wait `T1`, scramble, wait `T`, read
    Scrambled { theta_s: f64, t1: f64 },
    /// write, wait `T1`, scramble, wait `T2`, retrieve, wait `T`, read
    Retrieved { theta_s: f64, t1: f64, t2: f64 },
}

impl FlopSequence {
    pub fn timeline(&self, t: f64) -> Timeline {
        let write = Timeline::new().pulse(Frame::W, FRAC_PI_2);
        let body = match *self {
            FlopSequence::Normal => write,
            FlopSequence::Scrambled { theta_s, t1 } => write.wait(t1).pulse(Frame::S, theta_s),
            FlopSequence::Retrieved { theta_s, t1, t2 } => {
                write.wait(t1).pulse(Frame::S, theta_s).wait(t2).pulse(Frame::S, theta_s)
            }
        };
        body.wait(t).pulse(Frame::W, FRAC_PI_2)
    }

    /// Total free-evolution time for the final interval `t`.
    pub fn total_interval(&self, t: f64) -> f64 {
        match *self {
            FlopSequence::Normal => t,
            FlopSequence::Scrambled { t1, .. } => t1 + t,
            FlopSequence::Retrieved { t1, t2, .. } => t1 + t2 + t,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let check_time = |name: &str, v: f64| {
            if !v.is_finite() || v < 0.0 {
                Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {v}")))
            } else {
                Ok(())
            }
        };
        match *self {
            FlopSequence::Normal => Ok(()),
            FlopSequence::Scrambled { theta_s, t1 } => {
                check_finite_param("scramble area", theta_s)?;
                check_time("T1", t1)
            }
            FlopSequence::Retrieved { theta_s, t1, t2 } => {
                check_finite_param("scramble area", theta_s)?;
                check_time("T1", t1)?;
                check_time("T2", t2)
            }
        }
    }

    /// Excitation probability after the sequence with final interval `t`.
    pub fn excitation(&self, t: f64, frames: &FrameSet) -> Result<f64> {
        self.validate()?;
        check_t_grid(&[t])?;
        excitation_probability(simulate_unchecked(&self.timeline(t), frames, BlochVector::ground()))
    }
}

/// Excitation probability sampled on an interval grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlopCurve {
    /// Intervals in seconds.
    pub t: Vec<f64>,
    pub p_e: Vec<f64>,
}

impl FlopCurve {
    /// Intervals in units of the WRI period `2π/δ_W`.
    pub fn normalized_t(&self, delta_w: f64) -> Vec<f64> {
        self.t.iter().map(|t| t * delta_w / TAU).collect()
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// One flop curve per `φ_S` sample on a shared interval grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlopFamily {
    pub t: Vec<f64>,
    pub phi_s: Vec<f64>,
    /// `rows[i][j]` is `P_e` at `phi_s[i]`, `t[j]`.
    pub rows: Vec<Vec<f64>>,
}

impl FlopFamily {
    /// `max_φ P_e − min_φ P_e` at interval index `j`.
    pub fn spread_at(&self, j: usize) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .map(|r| r[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
        hi - lo
    }

    pub fn spreads(&self) -> Vec<f64> {
        (0..self.t.len()).map(|j| self.spread_at(j)).collect()
    }

    /// Largest `|row − curve|` over all rows and intervals.
    pub fn max_deviation_from(&self, curve: &FlopCurve) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().zip(&curve.p_e).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

/// Evaluates `sequence` at every `(φ_S, T)` cell.
pub fn flop_family(
    sequence: &FlopSequence,
    t_grid: &[f64],
    phi_samples: &[f64],
    frames: &FrameSet,
) -> Result<FlopFamily> {
    sequence.validate()?;
    check_t_grid(t_grid)?;
    check_phi_samples(phi_samples)?;
    let rows = phi_samples
        .par_iter()
        .map(|&phi| {
            let f = frames.with_phi(phi);
            t_grid
                .iter()
                .map(|&t| {
                    excitation_probability(simulate_unchecked(&sequence.timeline(t), &f, BlochVector::ground()))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FlopFamily { t: t_grid.to_vec(), phi_s: phi_samples.iter().map(|p| crate::bloch::reduce_angle(*p)).collect(), rows })
}

/// Unscrambled Ramsey flop, computed through the sequence engine.
pub fn normal_flop(delta_w: f64, t_grid: &[f64]) -> Result<FlopCurve> {
    check_finite_param("delta_W", delta_w)?;
    let frames = FrameSet::new(delta_w, delta_w, 0.0)?;
    let mut family = flop_family(&FlopSequence::Normal, t_grid, &[0.0], &frames)?;
    Ok(FlopCurve { t: family.t, p_e: family.rows.remove(0) })
}

/// Ramsey flop with a scramble pulse of area `theta_s` after `t1`.
pub fn scrambled_flop(
    theta_s: f64,
    t1: f64,
    t_grid: &[f64],
    phi_samples: &[f64],
    frames: &FrameSet,
) -> Result<FlopFamily> {
    flop_family(&FlopSequence::Scrambled { theta_s, t1 }, t_grid, phi_samples, frames)
}

/// Ramsey flop with scramble after `t1` and retrieve after a further `t2`.
pub fn retrieved_flop(
    theta_s: f64,
    t1: f64,
    t2: f64,
    t_grid: &[f64],
    phi_samples: &[f64],
    frames: &FrameSet,
) -> Result<FlopFamily> {
    flop_family(&FlopSequence::Retrieved { theta_s, t1, t2 }, t_grid, phi_samples, frames)
}

/// Scrambled state distribution: the recorded vector after an SRI pulse, one point per `φ_S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sdbv {
    pub recorded: BlochVector,
    pub theta_s: f64,
    pub phi_s: Vec<f64>,
    pub points: Vec<BlochVector>,
}

pub fn sdbv(recorded: BlochVector, theta_s: f64, n_phi: usize) -> Result<Sdbv> {
    check_unit("recorded state", &recorded)?;
    check_finite_param("scramble area", theta_s)?;
    if n_phi == 0 {
        return Err(Error::InvalidArgument("n_phi must be at least 1".into()));
    }
    let phi_s = phi_grid(n_phi);
    let theta = crate::bloch::reduce_angle(theta_s);
    let points = phi_s.iter().map(|&phi| rotate_unchecked(recorded, phi, theta)).collect();
    Ok(Sdbv { recorded, theta_s, phi_s, points })
}

/// A scrambled-and-read point projected onto the xz-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XzPoint {
    pub phi_s: f64,
    pub x: f64,
    pub z: f64,
}

/// Scrambles `recorded`, precesses by `wait_phase`, applies a `π/2` read pulse and drops y.
pub fn sdbv_projection_xz(
    recorded: BlochVector,
    theta_s: f64,
    wait_phase: f64,
    n_phi: usize,
) -> Result<Vec<XzPoint>> {
    check_finite_param("wait phase", wait_phase)?;
    let dist = sdbv(recorded, theta_s, n_phi)?;
    let beta = crate::bloch::reduce_angle(wait_phase);
    Ok(dist
        .phi_s
        .iter()
        .zip(&dist.points)
        .map(|(&phi_s, &v)| {
            let r = rotate_unchecked(crate::bloch::precess_unchecked(v, beta), 0.0, FRAC_PI_2);
            XzPoint { phi_s, x: r.x, z: r.z }
        })
        .collect())
}
