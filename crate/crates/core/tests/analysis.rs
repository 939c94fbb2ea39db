use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use ramsey_scramble::analysis::{
    ambiguity_report, default_t_grid, linspace, normal_flop, optimize_scramble_area, phi_grid, retrieved_flop,
    scrambled_flop, sdbv, sdbv_projection_xz, FlopSequence,
};
use ramsey_scramble::sequence::REFERENCE_DETUNING;
use ramsey_scramble::{BlochVector, FrameSet};

const DW: f64 = REFERENCE_DETUNING;

fn plus() -> BlochVector {
    BlochVector::new(0.0, -1.0, 0.0)
}

fn short_grid() -> Vec<f64> {
    linspace(0.0, 2.0 * TAU / DW, 17)
}

fn ambiguity(recorded: BlochVector, theta: f64, phi_samples: usize) -> f64 {
    ambiguity_report(recorded, theta, &short_grid(), phi_samples, &FrameSet::reference()).unwrap().aggregate
}

#[test]
fn normal_flop_is_raised_cosine() {
    let grid = default_t_grid(DW);
    assert_eq!(grid.len(), 201);
    let curve = normal_flop(DW, &grid).unwrap();
    for (t, p) in curve.t.iter().zip(&curve.p_e) {
        assert!((p - (1.0 + (DW * t).cos()) / 2.0).abs() <= 1e-12);
    }
    let dark: Vec<f64> = (0..4).map(|n| (2 * n + 1) as f64 * PI / DW).collect();
    for p in normal_flop(DW, &dark).unwrap().p_e {
        assert_eq!(p, 0.0);
    }
}

#[test]
fn normalized_time_counts_periods() {
    let curve = normal_flop(DW, &default_t_grid(DW)).unwrap();
    let n = curve.normalized_t(DW);
    assert_eq!(n[0], 0.0);
    assert!((n[200] - 2.0).abs() <= 1e-12);
}

#[test]
fn bad_grids_are_rejected() {
    let f = FrameSet::reference();
    assert!(normal_flop(DW, &[]).is_err());
    assert!(normal_flop(DW, &[0.0, -1e-3]).is_err());
    assert!(normal_flop(DW, &[f64::NAN]).is_err());
    assert!(scrambled_flop(PI, 0.005, &[0.0], &[], &f).is_err());
    assert!(ambiguity_report(plus(), PI, &[0.0], 0, &f).is_err());
    assert!(sdbv(BlochVector::new(0.0, 0.0, 2.0), PI, 8).is_err());
    assert!(optimize_scramble_area(plus(), &[0.0], 8, &f, 0.0).is_err());
}

#[test]
fn scrambling_ranges_match_closed_forms() {
    // equatorial record: (1 − cos θ)/2; |e⟩ record: sin θ
    for k in 0..=12 {
        let theta = k as f64 * PI / 12.0;
        let eq = ambiguity(plus(), theta, 256);
        assert!((eq - (1.0 - theta.cos()) / 2.0).abs() <= 1e-9, "θ={theta}: {eq}");
        let ex = ambiguity(BlochVector::excited(), theta, 256);
        assert!((ex - theta.sin().abs()).abs() <= 1e-9, "θ={theta}: {ex}");
    }
}

#[test]
fn refined_range_beats_sampled_range() {
    let f = FrameSet::reference();
    let r = ambiguity_report(plus(), FRAC_PI_2, &[0.0137], 7, &f).unwrap();
    assert!(r.ranges[0] >= r.sampled_ranges[0]);
    assert!((r.ranges[0] - 0.5).abs() <= 1e-9);
}

#[test]
fn sdbv_of_pi_scramble_stays_on_equator() {
    let d = sdbv(plus(), PI, 256).unwrap();
    assert_eq!(d.points.len(), 256);
    assert!(d.points.iter().all(|v| v.z.abs() <= 1e-9));
    let d = sdbv(BlochVector::excited(), FRAC_PI_2, 256).unwrap();
    assert!(d.points.iter().all(|v| v.z.abs() <= 1e-9));
}

#[test]
fn projection_drops_y_after_read() {
    let pts = sdbv_projection_xz(BlochVector::ground(), 0.0, 0.0, 4).unwrap();
    // |g⟩ unscrambled, read by π/2 about x lands on −y: origin of the xz-plane
    for p in pts {
        assert!(p.x.abs() <= 1e-15 && p.z.abs() <= 1e-15);
    }
}

#[test]
fn retrieved_rows_follow_the_shifted_normal_flop() {
    let f = FrameSet::reference();
    let (t1, t2) = (0.005, PI / f.delta_s);
    let grid = default_t_grid(DW);
    let fam = retrieved_flop(PI, t1, t2, &grid, &phi_grid(32), &f).unwrap();
    let shifted: Vec<f64> = grid.iter().map(|t| t1 + t2 + t).collect();
    let reference = normal_flop(DW, &shifted).unwrap();
    for row in &fam.rows {
        for (a, b) in row.iter().zip(&reference.p_e) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
    assert_eq!(FlopSequence::Retrieved { theta_s: PI, t1, t2 }.total_interval(1.0), t1 + t2 + 1.0);
}

#[test]
fn optimizer_agrees_with_brute_force_scan() {
    let f = FrameSet::reference();
    let grid = short_grid();
    for recorded in [BlochVector::excited(), plus()] {
        let opt = optimize_scramble_area(recorded, &grid, 64, &f, 1e-6).unwrap();
        let best = (0..629)
            .map(|k| k as f64 * 0.01)
            .map(|th| ambiguity_report(recorded, th, &grid, 64, &f).unwrap().aggregate)
            .fold(0.0, f64::max);
        assert!(opt.ambiguity >= best - 1e-6, "{} vs {best}", opt.ambiguity);
        assert!(opt.plateau.0 <= opt.theta && opt.theta <= opt.plateau.1);
    }
}

#[test]
fn projection_geometry() {
    // quarter-turn scramble of the written superposition: circle of radius ½ centred ½ from the origin
    let pts = sdbv_projection_xz(plus(), FRAC_PI_2, FRAC_PI_2, 256).unwrap();
    let n = pts.len() as f64;
    let (cx, cz) = (pts.iter().map(|p| p.x).sum::<f64>() / n, pts.iter().map(|p| p.z).sum::<f64>() / n);
    assert!(((cx * cx + cz * cz).sqrt() - 0.5).abs() <= 1e-9);
    for p in &pts {
        assert!((((p.x - cx).powi(2) + (p.z - cz).powi(2)).sqrt() - 0.5).abs() <= 1e-9);
    }
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.z), b.max(p.z)));
    assert!((hi - lo - 1.0).abs() <= 1e-3);

    let pts = sdbv_projection_xz(plus(), PI, FRAC_PI_2, 256).unwrap();
    assert!(pts.iter().all(|p| (p.x * p.x + p.z * p.z - 1.0).abs() <= 1e-12));

    let pts = sdbv_projection_xz(plus(), 0.0, FRAC_PI_2, 16).unwrap();
    assert!(pts.windows(2).all(|w| w[0].x == w[1].x && w[0].z == w[1].z));
}

#[test]
fn zero_area_scramble_reduces_to_normal_flop() {
    let f = FrameSet::reference();
    let grid = default_t_grid(DW);
    let (t1, t2) = (0.004, 0.0031);
    let scr = scrambled_flop(0.0, t1, &grid, &phi_grid(16), &f).unwrap();
    let ret = retrieved_flop(0.0, t1, t2, &grid, &phi_grid(16), &f).unwrap();
    let n1 = normal_flop(DW, &grid.iter().map(|t| t + t1).collect::<Vec<_>>()).unwrap();
    let n2 = normal_flop(DW, &grid.iter().map(|t| t + t1 + t2).collect::<Vec<_>>()).unwrap();
    assert!(scr.max_deviation_from(&n1) <= 1e-12);
    assert!(ret.max_deviation_from(&n2) <= 1e-12);
}

#[test]
fn excited_record_with_half_turn_has_no_ambiguity() {
    assert!(ambiguity(BlochVector::excited(), PI, 256) <= 1e-9);
}

#[test]
fn ground_record_optimum_is_a_quarter_turn() {
    let opt = optimize_scramble_area(BlochVector::ground(), &short_grid(), 64, &FrameSet::reference(), 1e-6).unwrap();
    assert!((opt.theta - FRAC_PI_2).abs() <= 1e-3, "{opt:?}");
    assert!((opt.ambiguity - 1.0).abs() <= 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equatorial_ranges_ignore_the_recorded_azimuth(a in 0.0..TAU) {
        // a write-to-scramble delay only moves the recorded azimuth
        let v = BlochVector::equator(a);
        let f = FrameSet::reference();
        let half = ambiguity_report(v, FRAC_PI_2, &short_grid(), 256, &f).unwrap();
        let full = ambiguity_report(v, PI, &short_grid(), 256, &f).unwrap();
        prop_assert!(half.ranges.iter().all(|r| (r - 0.5).abs() <= 1e-9));
        prop_assert!(full.ranges.iter().all(|r| (r - 1.0).abs() <= 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ambiguity_is_symmetric_in_area(theta in 0.0..PI, polar in 0.0..PI, az in 0.0..TAU) {
        let v = BlochVector::from_angles(polar, az);
        prop_assert!((ambiguity(v, theta, 64) - ambiguity(v, TAU - theta, 64)).abs() <= 1e-9);
    }

    #[test]
    fn equatorial_sdbv_height(a in 0.0..TAU, theta in -TAU..TAU) {
        let d = sdbv(BlochVector::equator(a), theta, 32).unwrap();
        for (phi, v) in d.phi_s.iter().zip(&d.points) {
            prop_assert!((v.z - theta.sin() * (a - phi).sin()).abs() <= 1e-12);
        }
    }

    #[test]
    fn excited_sdbv_is_a_latitude_circle(theta in -TAU..TAU) {
        let d = sdbv(BlochVector::excited(), theta, 32).unwrap();
        for v in &d.points {
            prop_assert!((v.z + theta.cos()).abs() <= 1e-12);
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn doubling_phase_samples_keeps_the_range(theta in 0.0..TAU, polar in 0.0..PI, az in 0.0..TAU) {
        let v = BlochVector::from_angles(polar, az);
        prop_assert!((ambiguity(v, theta, 128) - ambiguity(v, theta, 256)).abs() <= 1e-9);
    }

    #[test]
    fn scramble_delay_trades_against_read_interval(theta in 0.0..TAU, t1 in 0.0..0.02f64, shift in 0u32..64) {
        // delaying the scramble by whole φ-grid steps of precession rotates the scrambled
        // distribution about z, which a longer read interval does as well
        let f = FrameSet::reference();
        let n = 64;
        let dt = shift as f64 * (TAU / n as f64) / f.delta_w;
        let grid = linspace(0.0, 0.02, 9);
        let later: Vec<f64> = grid.iter().map(|t| t + dt).collect();
        let a = scrambled_flop(theta, t1 + dt, &grid, &phi_grid(n), &f).unwrap().spreads();
        let b = scrambled_flop(theta, t1, &later, &phi_grid(n), &f).unwrap().spreads();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}
