//! Experiment emulation: finite-ensemble readout noise, contrast decay, repeated
//! trials and fringe fitting.
//!
//! All randomness flows through [`SimRng`] (ChaCha8). Trial `i` of a run seeded with
//! `s` draws from stream `i` of the generator keyed by `s`, so trials can be evaluated
//! in any order or in parallel without changing a single bit of the output.

mod fit;

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{check_t_grid, FlopCurve, FlopSequence};
use crate::bloch::{excitation_probability, precess_unchecked, reduce_angle, BlochVector, PROBABILITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::sequence::{simulate_unchecked, FrameSet, Timeline};

pub use fit::{
    damped_sinusoid, fit_damped_sinusoid, initial_guess, FitParams, FitResult, DEGENERACY_ALPHA, MAX_ITERATIONS,
};

/// The simulation generator.
pub type SimRng = ChaCha8Rng;

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Number of atoms read out per shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomCount {
    Finite(u64),
    /// No projection noise: the readout returns the exact probability.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub atom_count: AtomCount,
    /// Contrast decay time in seconds; `f64::INFINITY` disables decay.
    pub contrast_decay_tau: f64,
    /// Standard deviation of the per-shot WRI phase offset, radians.
    pub phase_jitter_sigma: f64,
    pub rng_seed: u64,
}

impl NoiseModel {
    /// Exact readout, no decay, no jitter.
    pub fn noiseless(seed: u64) -> Self {
        Self {
            atom_count: AtomCount::Exact,
            contrast_decay_tau: f64::INFINITY,
            phase_jitter_sigma: 0.0,
            rng_seed: seed,
        }
    }

    pub fn with_atoms(self, n: u64) -> Self {
        Self { atom_count: AtomCount::Finite(n), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.atom_count == AtomCount::Finite(0) {
            return Err(Error::InvalidArgument("atom count must be at least 1".into()));
        }
        if self.contrast_decay_tau.is_nan() || self.contrast_decay_tau <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "contrast decay time must be positive or infinite, got {}",
                self.contrast_decay_tau
            )));
        }
        if !self.phase_jitter_sigma.is_finite() || self.phase_jitter_sigma < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "phase jitter must be finite and non-negative, got {}",
                self.phase_jitter_sigma
            )));
        }
        Ok(())
    }
}

/// Single-shot ensemble readout: a binomial count of excited atoms divided by `N`.
pub fn project_noise<R: Rng + ?Sized>(p_true: f64, atoms: AtomCount, rng: &mut R) -> Result<f64> {
    if !(-PROBABILITY_TOLERANCE..=1.0 + PROBABILITY_TOLERANCE).contains(&p_true) {
        return Err(Error::InvalidArgument(format!("probability {p_true} is outside [0, 1]")));
    }
    let p = p_true.clamp(0.0, 1.0);
    match atoms {
        AtomCount::Exact => Ok(p),
        AtomCount::Finite(0) => Err(Error::InvalidArgument("atom count must be at least 1".into())),
        AtomCount::Finite(n) => {
            let dist = Binomial::new(n, p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(dist.sample(rng) as f64 / n as f64)
        }
    }
}

fn damp_value(p: f64, t: f64, tau: f64) -> f64 {
    let factor = (-t / tau).exp();
    if factor == 1.0 {
        p
    } else {
        (0.5 + (p - 0.5) * factor).clamp(0.0, 1.0)
    }
}

/// Shrinks the fringe toward `P = 0.5` with `P'(T) = 0.5 + (P(T) − 0.5)·e^(−T/τ)`.
pub fn damp_contrast(curve: &FlopCurve, tau: f64) -> Result<FlopCurve> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidArgument(format!("decay time must be positive or infinite, got {tau}")));
    }
    check_t_grid(&curve.t)?;
    if curve.p_e.len() != curve.t.len() {
        return Err(Error::InvalidArgument("curve columns have different lengths".into()));
    }
    let p_e = curve.t.iter().zip(&curve.p_e).map(|(&t, &p)| damp_value(p, t, tau)).collect();
    Ok(FlopCurve { t: curve.t.clone(), p_e })
}

/// How the WRI–SRI phase offset is chosen for each shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasePolicy {
    /// Use `frames.phi_s` for every shot.
    Fixed,
    /// Draw `φ_S` uniformly from `[0, 2π)` for every shot.
    Fresh,
}

/// What each trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSequence {
    pub flop: FlopSequence,
    pub frames: FrameSet,
    pub phase: PhasePolicy,
}

/// Per-interval statistics over repeated trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub t: Vec<f64>,
    pub mean: Vec<f64>,
    /// Sample standard deviation (`k − 1` denominator; zero when `k = 1`).
    pub std: Vec<f64>,
    pub k: usize,
    /// `samples[i][j]`: trial `i`, interval `j`.
    pub samples: Vec<Vec<f64>>,
}

impl TrialStats {
    /// `max − min` over trials at interval index `j`.
    pub fn sample_range(&self, j: usize) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .map(|s| s[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
        hi - lo
    }

    pub fn mean_curve(&self) -> FlopCurve {
        FlopCurve { t: self.t.clone(), p_e: self.mean.clone() }
    }
}

/// One measured point: ideal dynamics with a jittered final precession, then decay
/// and projection noise.
fn shot<R: Rng + ?Sized>(
    timeline: &Timeline,
    frames: &FrameSet,
    t: f64,
    noise: &NoiseModel,
    rng: &mut R,
    jitter: Option<&Normal<f64>>,
) -> Result<f64> {
    let (read, body) = timeline.events.split_last().expect("flop timelines end with a read pulse");
    let mut v = simulate_unchecked(&Timeline::from_events(body.to_vec()), frames, BlochVector::ground());
    if let Some(dist) = jitter {
        v = precess_unchecked(v, reduce_angle(dist.sample(rng)));
    }
    v = simulate_unchecked(&Timeline::from_events(vec![*read]), frames, v);
    let p = damp_value(excitation_probability(v)?, t, noise.contrast_decay_tau);
    project_noise(p, noise.atom_count, rng)
}

fn run_one_trial(
    sequence: &TrialSequence,
    noise: &NoiseModel,
    t_grid: &[f64],
    trial: u64,
) -> Result<Vec<f64>> {
    let mut rng = trial_rng(noise.rng_seed, trial);
    let jitter = if noise.phase_jitter_sigma > 0.0 {
        Some(Normal::new(0.0, noise.phase_jitter_sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?)
    } else {
        None
    };
    t_grid
        .iter()
        .map(|&t| {
            let frames = match sequence.phase {
                PhasePolicy::Fixed => sequence.frames,
                PhasePolicy::Fresh => sequence.frames.with_phi(rng.random_range(0.0..TAU)),
            };
            shot(&sequence.flop.timeline(t), &frames, t, noise, &mut rng, jitter.as_ref())
        })
        .collect()
}

/// Repeats `sequence` over `t_grid` for `k_trials` trials and summarizes each interval.
///
/// Every shot (one trial at one interval) is an independent preparation of the
/// ensemble, so a fresh phase policy redraws `φ_S` per shot.
pub fn run_trials(
    sequence: &TrialSequence,
    noise: &NoiseModel,
    k_trials: usize,
    t_grid: &[f64],
) -> Result<TrialStats> {
    if k_trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    noise.validate()?;
    sequence.flop.validate()?;
    check_t_grid(t_grid)?;
    let samples = (0..k_trials as u64)
        .into_par_iter()
        .map(|trial| run_one_trial(sequence, noise, t_grid, trial))
        .collect::<Result<Vec<_>>>()?;

    let k = k_trials as f64;
    let mut mean = Vec::with_capacity(t_grid.len());
    let mut std = Vec::with_capacity(t_grid.len());
    for j in 0..t_grid.len() {
        let m = samples.iter().map(|s| s[j]).sum::<f64>() / k;
        let var = if k_trials > 1 {
            samples.iter().map(|s| (s[j] - m).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        mean.push(m);
        std.push(var.sqrt());
    }
    Ok(TrialStats { t: t_grid.to_vec(), mean, std, k: k_trials, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_binomials() {
        let mut rng = trial_rng(7, 0);
        for n in [1, 10, 10_000] {
            assert_eq!(project_noise(0.0, AtomCount::Finite(n), &mut rng).unwrap(), 0.0);
            assert_eq!(project_noise(1.0, AtomCount::Finite(n), &mut rng).unwrap(), 1.0);
        }
        assert_eq!(project_noise(0.37, AtomCount::Exact, &mut rng).unwrap(), 0.37);
    }

    #[test]
    fn readout_lands_on_the_count_lattice() {
        let mut rng = trial_rng(3, 1);
        for _ in 0..100 {
            let p = project_noise(0.3, AtomCount::Finite(7), &mut rng).unwrap();
            let count = p * 7.0;
            assert!((count - count.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_readout_inputs() {
        let mut rng = trial_rng(0, 0);
        assert!(project_noise(1.5, AtomCount::Finite(10), &mut rng).is_err());
        assert!(project_noise(f64::NAN, AtomCount::Exact, &mut rng).is_err());
        assert!(project_noise(0.5, AtomCount::Finite(0), &mut rng).is_err());
    }

    #[test]
    fn damping_examples() {
        let c = FlopCurve { t: vec![0.0, 1.0, 2.0], p_e: vec![0.1, 0.0, 0.93] };
        assert_eq!(damp_contrast(&c, f64::INFINITY).unwrap(), c);
        let d = damp_contrast(&c, 1.0).unwrap();
        assert_eq!(d.p_e[0], 0.1);
        assert!((d.p_e[1] - 0.316_060_279_414_278_6).abs() < 1e-15);
        assert!(damp_contrast(&c, 0.0).is_err());
        assert!(damp_contrast(&c, -2.0).is_err());
    }

    #[test]
    fn streams_are_independent_and_repeatable() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(11, 0).random()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut r0 = trial_rng(11, 0);
        let mut r1 = trial_rng(11, 1);
        assert_ne!(r0.random::<u64>(), r1.random::<u64>());
    }

    #[test]
    fn zero_trials_rejected() {
        let seq = TrialSequence { flop: FlopSequence::Normal, frames: FrameSet::reference(), phase: PhasePolicy::Fixed };
        assert!(run_trials(&seq, &NoiseModel::noiseless(0), 0, &[0.0]).is_err());
        let bad = NoiseModel { contrast_decay_tau: 0.0, ..NoiseModel::noiseless(0) };
        assert!(run_trials(&seq, &bad, 1, &[0.0]).is_err());
    }
}
