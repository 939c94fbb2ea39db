//! Damped-sinusoid fringe fitting, `y(T) = c + A·e^(−T/τ)·cos(ωT + χ)`.
//!
//! Levenberg–Marquardt on the five parameters, with time rescaled to the data span
//! and the decay rate `1/τ` kept non-negative. Starting point, unless supplied:
//!
//! - offset: mean of the data
//! - frequency: highest peak of the least-squares periodogram of the mean-removed data
//! - amplitude: half the peak-to-peak spread
//! - phase: linear least-squares projection at the starting frequency
//! - decay: slope of the log of the RMS envelope between the two halves of the record
//!
//! A fit is flagged degenerate when the oscillating part carries no more energy than
//! noise alone would produce after a best-frequency search: with `n` points, residual
//! variance `σ²` and `α = 0.01`, the fringe is accepted only if
//! `Σ (A·e^(−T/τ)·cos(ωT + χ))² > σ²·(2·ln(n / 2α) + 2)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix5, Vector5};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Iteration cap of the solver.
pub const MAX_ITERATIONS: usize = 1000;
/// False-alarm level of the degeneracy test.
pub const DEGENERACY_ALPHA: f64 = 0.01;
const MIN_POINTS: usize = 6;
const SPECTRUM_OVERSAMPLING: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub offset: f64,
    pub amplitude: f64,
    /// Decay time in seconds, `f64::INFINITY` for an undamped fringe.
    pub tau: f64,
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Phase in `(−π, π]`.
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: FitParams,
    /// Root-mean-square residual.
    pub rms: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit or the solver produced non-finite values.
    pub converged: bool,
    /// No significant oscillation in the data.
    pub degenerate: bool,
}

pub fn damped_sinusoid(p: &FitParams, t: f64) -> f64 {
    p.offset + p.amplitude * (-t / p.tau).exp() * (p.omega * t + p.phase).cos()
}

fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn check_data(t: &[f64], y: &[f64]) -> Result<()> {
    if t.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "time and value columns differ in length ({} vs {})",
            t.len(),
            y.len()
        )));
    }
    if t.len() < MIN_POINTS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_POINTS} points are needed, got {}",
            t.len()
        )));
    }
    if t.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("data contains non-finite values".into()));
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Least-squares fit `d ≈ a·cos ωt + b·sin ωt`; returns `(a, b, explained energy)`.
fn project(t: &[f64], d: &[f64], omega: f64) -> (f64, f64, f64) {
    let (mut cc, mut ss, mut cs, mut dc, mut ds) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&ti, &di) in t.iter().zip(d) {
        let (s, c) = (omega * ti).sin_cos();
        cc += c * c;
        ss += s * s;
        cs += c * s;
        dc += di * c;
        ds += di * s;
    }
    let det = cc * ss - cs * cs;
    if det.abs() < 1e-300 {
        return (0.0, 0.0, 0.0);
    }
    let a = (dc * ss - ds * cs) / det;
    let b = (ds * cc - dc * cs) / det;
    (a, b, a * dc + b * ds)
}

/// Angular frequency of the strongest peak of the least-squares periodogram of `d`.
fn spectral_peak(t: &[f64], d: &[f64]) -> f64 {
    let (t_min, t_max) = t.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let span = t_max - t_min;
    if span <= 0.0 {
        return 0.0;
    }
    let mut sorted = t.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut steps: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).filter(|s| *s > 0.0).collect();
    if steps.is_empty() {
        return 0.0;
    }
    steps.sort_by(f64::total_cmp);
    let nyquist = 0.5 / steps[steps.len() / 2];
    let df = 1.0 / (span * SPECTRUM_OVERSAMPLING);
    let bins = (nyquist / df).floor() as usize;
    let mut best = (0.0, f64::NEG_INFINITY);
    for b in 1..=bins {
        let w = TAU * df * b as f64;
        let (_, _, power) = project(t, d, w);
        if power > best.1 {
            best = (w, power);
        }
    }
    best.0
}

/// Phase `χ` of `A·cos(ωt + χ)` from the least-squares projection at `omega`.
fn projected_phase(t: &[f64], d: &[f64], omega: f64) -> f64 {
    let (a, b, _) = project(t, d, omega);
    (-b).atan2(a)
}

/// Starting point for [`fit_damped_sinusoid`]; see the module docs for the recipe.
pub fn initial_guess(t: &[f64], y: &[f64]) -> Result<FitParams> {
    check_data(t, y)?;
    let offset = mean(y);
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let amplitude = 0.5 * (hi - lo);
    let d: Vec<f64> = y.iter().map(|v| v - offset).collect();
    let omega = spectral_peak(t, &d);
    let phase = projected_phase(t, &d, omega);

    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by(|&a, &b| t[a].total_cmp(&t[b]));
    let (first, second) = order.split_at(order.len() / 2);
    let envelope = |idx: &[usize]| {
        let rms = (idx.iter().map(|&i| d[i] * d[i]).sum::<f64>() / idx.len() as f64).sqrt();
        let tm = idx.iter().map(|&i| t[i]).sum::<f64>() / idx.len() as f64;
        (rms, tm)
    };
    let (a1, t1) = envelope(first);
    let (a2, t2) = envelope(second);
    let rate = (a1 / a2).ln() / (t2 - t1);
    let tau = if rate.is_finite() && rate > 0.0 { 1.0 / rate } else { f64::INFINITY };

    Ok(FitParams { offset, amplitude, tau, omega, phase })
}

/// Model and Jacobian in rescaled time `s = t / scale`, parameters `[c, A, γ, ω, χ]`.
struct Problem<'a> {
    s: &'a [f64],
    y: &'a [f64],
}

impl Problem<'_> {
    fn residuals(&self, p: &Vector5<f64>) -> Vec<f64> {
        self.s
            .iter()
            .zip(self.y)
            .map(|(&s, &y)| y - (p[0] + p[1] * (-p[2] * s).exp() * (p[3] * s + p[4]).cos()))
            .collect()
    }

    fn cost(&self, p: &Vector5<f64>) -> f64 {
        self.residuals(p).iter().map(|r| r * r).sum()
    }

    /// `JᵀJ` and `Jᵀr` of the model (not the residual) at `p`.
    fn normal_equations(&self, p: &Vector5<f64>, r: &[f64]) -> (Matrix5<f64>, Vector5<f64>) {
        let mut jtj = Matrix5::zeros();
        let mut jtr = Vector5::zeros();
        for (&s, &ri) in self.s.iter().zip(r) {
            let e = (-p[2] * s).exp();
            let (sn, cs) = (p[3] * s + p[4]).sin_cos();
            let row = Vector5::new(1.0, e * cs, -s * p[1] * e * cs, -s * p[1] * e * sn, -p[1] * e * sn);
            jtj += row * row.transpose();
            jtr += row * ri;
        }
        (jtj, jtr)
    }
}

/// Least-squares fit of a damped sinusoid to `(t, y)`.
///
/// Non-convergence is reported through [`FitResult::converged`]; the parameters of the
/// last accepted iterate are still returned.
pub fn fit_damped_sinusoid(t: &[f64], y: &[f64], initial: Option<FitParams>) -> Result<FitResult> {
    check_data(t, y)?;
    let guess = match initial {
        Some(g) => g,
        None => initial_guess(t, y)?,
    };
    let n = t.len();
    let scale = t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let s: Vec<f64> = t.iter().map(|v| v / scale).collect();
    let problem = Problem { s: &s, y };

    let y_mean = mean(y);
    let spread = y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>();
    if guess.amplitude.abs() <= 1e-12 || spread == 0.0 {
        let params = FitParams { offset: y_mean, amplitude: 0.0, tau: f64::INFINITY, omega: guess.omega, phase: 0.0 };
        let rms = (spread / n as f64).sqrt();
        return Ok(FitResult { params, rms, iterations: 0, converged: true, degenerate: true });
    }

    let rate = if guess.tau.is_finite() { (1.0 / guess.tau).max(0.0) } else { 0.0 };
    let mut p = Vector5::new(guess.offset, guess.amplitude, rate * scale, guess.omega * scale, guess.phase);
    let mut r = problem.residuals(&p);
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let cost_floor = 1e-28 * y.iter().map(|v| v * v).sum::<f64>().max(1e-300);

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        if cost <= cost_floor {
            converged = true;
            break;
        }
        let (jtj, jtr) = problem.normal_equations(&p, &r);
        let mut accepted = false;
        while lambda < 1e16 {
            let mut a = jtj;
            for i in 0..5 {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let Some(mut step) = a.cholesky().map(|c| c.solve(&jtr)) else {
                lambda *= 4.0;
                continue;
            };
            if p[2] == 0.0 && step[2] < 0.0 {
                // decay rate pinned at its bound: solve for the other four
                let mut b = a;
                let mut g = jtr;
                for i in 0..5 {
                    b[(2, i)] = 0.0;
                    b[(i, 2)] = 0.0;
                }
                b[(2, 2)] = 1.0;
                g[2] = 0.0;
                match b.cholesky() {
                    Some(c) => step = c.solve(&g),
                    None => {
                        lambda *= 4.0;
                        continue;
                    }
                }
            }
            let mut trial = p + step;
            trial[2] = trial[2].max(0.0);
            let trial_cost = problem.cost(&trial);
            if trial_cost.is_finite() && trial_cost < cost {
                let small_step = (trial - p).norm() <= 1e-12 * (p.norm() + 1e-12);
                let small_gain = cost - trial_cost <= 1e-14 * cost;
                p = trial;
                r = problem.residuals(&p);
                cost = trial_cost;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if small_step || small_gain {
                    converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            // no downhill step at any damping: a minimum to working precision
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !p.iter().all(|v| v.is_finite()) {
        converged = false;
    }

    let (mut amplitude, mut phase) = (p[1], p[4]);
    if amplitude < 0.0 {
        amplitude = -amplitude;
        phase += PI;
    }
    let rate = p[2] / scale;
    let params = FitParams {
        offset: p[0],
        amplitude,
        tau: if rate > 0.0 { 1.0 / rate } else { f64::INFINITY },
        omega: p[3] / scale,
        phase: wrap_phase(phase),
    };
    let rms = (cost / n as f64).sqrt();
    let degenerate = is_degenerate(&params, t, cost, n);
    Ok(FitResult { params, rms, iterations, converged, degenerate })
}

fn is_degenerate(params: &FitParams, t: &[f64], cost: f64, n: usize) -> bool {
    if params.amplitude <= 1e-9 {
        return true;
    }
    let signal: f64 = t
        .iter()
        .map(|&ti| (params.amplitude * (-ti / params.tau).exp() * (params.omega * ti + params.phase).cos()).powi(2))
        .sum();
    let noise_var = cost / (n - 5) as f64;
    let threshold = 2.0 * (n as f64 / (2.0 * DEGENERACY_ALPHA)).ln() + 2.0;
    signal <= noise_var * threshold
}
