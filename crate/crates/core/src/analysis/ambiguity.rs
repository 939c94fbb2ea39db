use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::search::{golden_section_max, golden_section_min};
use super::{check_t_grid, check_unit, phi_grid};
use crate::bloch::{excitation_probability, BlochVector};
use crate::error::{ensure_finite, Error, Result};
use crate::sequence::{simulate_unchecked, Frame, FrameSet, Timeline};

/// Width below which extremum refinement stops, in radians of `φ_S`.
const REFINE_TOLERANCE: f64 = 1e-10;

/// Spread of the read-out excitation probability over the unknown phase offset.
///
/// The readout is: scramble the recorded vector with an SRI pulse at `t = 0`,
/// precess for `T`, then apply a `π/2` WRI read pulse. For each `T` the range is
/// taken over continuous `φ_S`: the uniform grid locates every local extremum and
/// each one is then polished by golden-section search between its grid neighbours.
/// The raw grid ranges are kept alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityReport {
    pub theta_s: f64,
    pub t: Vec<f64>,
    /// `max − min` over the `φ_S` grid samples only.
    pub sampled_ranges: Vec<f64>,
    /// `max − min` over continuous `φ_S`.
    pub ranges: Vec<f64>,
    /// `min` of `ranges` over the interval grid.
    pub aggregate: f64,
    /// Index into `t` where the aggregate is attained (first on ties).
    pub worst_index: usize,
}

fn readout(theta_s: f64, t: f64) -> Timeline {
    Timeline::new().pulse(Frame::S, theta_s).wait(t).pulse(Frame::W, FRAC_PI_2)
}

/// Continuous-phase range of `f` on the circle, seeded by samples on `grid`.
fn refined_range<F: Fn(f64) -> f64>(f: F, grid: &[f64], values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let (mut lo, mut hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    let sampled = hi - lo;
    if n < 3 {
        return (sampled, sampled);
    }
    let step = TAU / n as f64;
    for k in 0..n {
        let prev = values[(k + n - 1) % n];
        let next = values[(k + 1) % n];
        let v = values[k];
        if v > prev && v >= next {
            let (_, fx) = golden_section_max(&f, grid[k] - step, grid[k] + step, REFINE_TOLERANCE);
            hi = hi.max(fx);
        }
        if v < prev && v <= next {
            let (_, fx) = golden_section_min(&f, grid[k] - step, grid[k] + step, REFINE_TOLERANCE);
            lo = lo.min(fx);
        }
    }
    (sampled, (hi - lo).clamp(0.0, 1.0))
}

pub fn ambiguity_report(
    recorded: BlochVector,
    theta_s: f64,
    t_grid: &[f64],
    phi_samples: usize,
    frames: &FrameSet,
) -> Result<AmbiguityReport> {
    check_unit("recorded state", &recorded)?;
    ensure_finite("scramble area", theta_s)?;
    check_t_grid(t_grid)?;
    if phi_samples == 0 {
        return Err(Error::InvalidArgument("phi_samples must be at least 1".into()));
    }
    let grid = phi_grid(phi_samples);
    let per_t: Vec<(f64, f64)> = t_grid
        .par_iter()
        .map(|&t| {
            let tl = readout(theta_s, t);
            let p = |phi: f64| {
                let v = simulate_unchecked(&tl, &frames.with_phi(phi), recorded);
                excitation_probability(v).unwrap_or(f64::NAN)
            };
            let values: Vec<f64> = grid.iter().map(|&phi| p(phi)).collect();
            refined_range(p, &grid, &values)
        })
        .collect();
    if per_t.iter().any(|(s, r)| !s.is_finite() || !r.is_finite()) {
        return Err(Error::InvalidState("non-finite excitation probability in ambiguity scan".into()));
    }
    let (sampled_ranges, ranges): (Vec<f64>, Vec<f64>) = per_t.into_iter().unzip();
    let (worst_index, aggregate) = ranges
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &r)| if r < bv { (i, r) } else { (bi, bv) });
    Ok(AmbiguityReport {
        theta_s,
        t: t_grid.to_vec(),
        sampled_ranges,
        ranges,
        aggregate,
        worst_index,
    })
}
