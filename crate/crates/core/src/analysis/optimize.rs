use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ambiguity::ambiguity_report;
use super::search::golden_section_max;
use crate::bloch::{reduce_angle, BlochVector};
use crate::error::{Error, Result};
use crate::sequence::FrameSet;

/// Coarse scan resolution over `[0, 2π)`: one-degree steps.
pub const SCAN_POINTS: usize = 360;
/// Scan values within this distance of the best one count as ties.
const TIE_TOLERANCE: f64 = 1e-12;
/// Scan values within this distance of the best one belong to its plateau.
const PLATEAU_TOLERANCE: f64 = 1e-9;

/// Scramble area maximizing the aggregate phase ambiguity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScrambleOptimum {
    /// Optimal area in `[0, 2π)`.
    pub theta: f64,
    /// Aggregate ambiguity at `theta`.
    pub ambiguity: f64,
    /// Interval of scan points within `1e-9` of the maximum. Collapses to `theta`
    /// when the maximum is isolated.
    pub plateau: (f64, f64),
}

pub fn optimize_scramble_area(
    recorded: BlochVector,
    t_grid: &[f64],
    phi_samples: usize,
    frames: &FrameSet,
    tolerance: f64,
) -> Result<ScrambleOptimum> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let score = |theta: f64| -> Result<f64> {
        Ok(ambiguity_report(recorded, theta, t_grid, phi_samples, frames)?.aggregate)
    };
    let step = TAU / SCAN_POINTS as f64;
    let scan: Vec<f64> = (0..SCAN_POINTS)
        .into_par_iter()
        .map(|i| score(step * i as f64))
        .collect::<Result<_>>()?;

    let best_value = scan.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best = scan.iter().position(|&a| a >= best_value - TIE_TOLERANCE).unwrap_or(0);

    let in_plateau = |i: usize| scan[i] >= best_value - PLATEAU_TOLERANCE;
    let mut lo = best;
    while lo > 0 && in_plateau(lo - 1) {
        lo -= 1;
    }
    let mut hi = best;
    while hi + 1 < SCAN_POINTS && in_plateau(hi + 1) {
        hi += 1;
    }

    if hi - lo >= 2 {
        let (a, b) = (step * lo as f64, step * hi as f64);
        let theta = 0.5 * (a + b);
        return Ok(ScrambleOptimum { theta, ambiguity: score(theta)?, plateau: (a, b) });
    }

    // Golden section on the neighbouring scan cells. Evaluation errors cannot occur
    // here since every input was already accepted by the scan.
    let centre = step * best as f64;
    let (x, fx) = golden_section_max(
        |theta| score(theta).unwrap_or(f64::NEG_INFINITY),
        centre - step,
        centre + step,
        tolerance,
    );
    let (theta, ambiguity) = if fx >= scan[best] { (reduce_angle(x), fx) } else { (centre, scan[best]) };
    Ok(ScrambleOptimum { theta, ambiguity, plateau: (theta, theta) })
}
