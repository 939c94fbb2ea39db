use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;
use ramsey_scramble::analysis::phi_grid;
use ramsey_scramble::protocol::{
    decode_choice, encode_choice, faithful_read_delay, retrieve_delay, run_secure_choice, scrambled_readout,
    scrambled_state, secrecy_check, secure_read_delay, secure_timeline, Choice, ProtocolConfig, DECODE_THRESHOLD,
};
use ramsey_scramble::{Error, FrameSet};

fn expected(choice: Choice) -> f64 {
    match choice {
        Choice::Yes => 1.0,
        Choice::No => 0.0,
    }
}

#[test]
fn reference_protocol_reads_back_the_choice() {
    let config = ProtocolConfig::reference();
    for phi in phi_grid(64) {
        for choice in Choice::ALL {
            let p = run_secure_choice(choice, phi, &config).unwrap();
            assert!((p - expected(choice)).abs() <= 1e-9);
            assert_eq!(decode_choice(p, DECODE_THRESHOLD).unwrap(), choice);
        }
    }
    assert!(secrecy_check(&config, 64).unwrap() <= 1e-9);
}

#[test]
fn scrambled_stage_sits_on_the_equator() {
    let config = ProtocolConfig::reference();
    for phi in phi_grid(32) {
        for choice in Choice::ALL {
            assert!(scrambled_state(choice, phi, &config).unwrap().z.abs() <= 1e-12);
        }
    }
}

#[test]
fn half_pi_scramble_leaks_the_choice() {
    let config = ProtocolConfig { scramble_area: FRAC_PI_2, ..ProtocolConfig::reference() };
    assert!(secrecy_check(&config, 64).unwrap() > 0.1);
}

#[test]
fn mistimed_protocols_are_refused() {
    let bad_retrieve = ProtocolConfig { t2: 4e-3, ..ProtocolConfig::reference() };
    assert!(matches!(run_secure_choice(Choice::Yes, 0.0, &bad_retrieve), Err(Error::ProtocolMisconfiguration(_))));
    let bad_read = ProtocolConfig { t3: 1e-3, ..ProtocolConfig::reference() };
    assert!(matches!(run_secure_choice(Choice::No, 0.0, &bad_read), Err(Error::ProtocolMisconfiguration(_))));
}

#[test]
fn delays() {
    let f = FrameSet::reference();
    assert!((retrieve_delay(f.delta_s, 0).unwrap() - 5e-3).abs() <= 1e-15);
    assert!((retrieve_delay(f.delta_s, 2).unwrap() - 25e-3).abs() <= 1e-15);
    assert!((faithful_read_delay(f.delta_w, 1).unwrap() - 15e-3).abs() <= 1e-15);
    assert!(retrieve_delay(0.0, 0).is_err());

    let d = secure_read_delay(&f, 5e-3, 5e-3, None).unwrap();
    assert_eq!((d.t3, d.k), (0.0, 1));
    let d = secure_read_delay(&f, 5e-3, 10e-3, None).unwrap();
    assert!((d.t3 - 5e-3).abs() <= 1e-12 && d.k == 2);
    let d = secure_read_delay(&f, 5e-3, 5e-3, Some(3)).unwrap();
    assert!((d.t3 - 20e-3).abs() <= 1e-12);
    assert!(matches!(secure_read_delay(&f, 5e-3, 10e-3, Some(1)), Err(Error::InfeasibleTiming(_))));
}

#[test]
fn decoding_edges() {
    assert_eq!(decode_choice(1.0, 0.5).unwrap(), Choice::Yes);
    assert_eq!(decode_choice(0.0, 0.5).unwrap(), Choice::No);
    assert!(matches!(decode_choice(0.5, 0.5), Err(Error::Indeterminate(_))));
    assert!(decode_choice(1.2, 0.5).is_err());
    assert!(decode_choice(f64::NAN, 0.5).is_err());
}

#[test]
fn encoding_areas() {
    assert_eq!(encode_choice(Choice::Yes), FRAC_PI_2);
    assert_eq!(encode_choice(Choice::No), 3.0 * FRAC_PI_2);
    assert_eq!(secure_timeline(Choice::Yes, &ProtocolConfig::reference()).len(), 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn any_consistent_timing_decodes(
        ds_hz in 20.0..300.0f64,
        m in 0u32..5,
        t1 in 0.0..0.03f64,
        extra in 0u64..3,
        theta in 0.0..TAU,
        phi in 0.0..TAU,
        choice in prop_oneof![Just(Choice::Yes), Just(Choice::No)],
    ) {
        let frames = FrameSet::new(TAU * 100.0, TAU * ds_hz, 0.0).unwrap();
        let t2 = retrieve_delay(frames.delta_s, m).unwrap();
        let minimal = secure_read_delay(&frames, t1, t2, None).unwrap();
        let delay = secure_read_delay(&frames, t1, t2, Some(minimal.k + extra)).unwrap();
        let config = ProtocolConfig { frames, t1, t2, t3: delay.t3, scramble_area: theta, ..ProtocolConfig::reference() };
        let p = run_secure_choice(choice, phi, &config).unwrap();
        prop_assert!((p - expected(choice)).abs() <= 1e-9);
        prop_assert_eq!(decode_choice(p, DECODE_THRESHOLD).unwrap(), choice);
    }

    #[test]
    fn pi_scramble_hides_the_choice(phi in 0.0..TAU, t1 in 0.0..0.02f64) {
        // with a π scramble, the readout for yes at φ equals the readout for no at some φ'
        let config = ProtocolConfig { t1, ..ProtocolConfig::reference() };
        let y = scrambled_readout(Choice::Yes, phi, &config).unwrap();
        let v = scrambled_state(Choice::Yes, phi, &config).unwrap();
        prop_assert!(v.z.abs() <= 1e-12);
        prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
        let hit = phi_grid(4096)
            .into_iter()
            .map(|p| (scrambled_readout(Choice::No, p, &config).unwrap() - y).abs())
            .fold(f64::INFINITY, f64::min);
        prop_assert!(hit <= 2e-3);
        prop_assert!(scrambled_readout(Choice::No, phi, &config).unwrap() >= 0.0);
    }
}
