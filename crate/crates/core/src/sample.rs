//! Seeded random inputs for experiments and tests.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuit::{Circuit, CircuitBuilder};
use crate::stages::StageParams;
use crate::state::{normalize, PhotonLabel, SinglePhotonState};
use crate::synth::{TargetPhoton, TargetSpec};

/// Haar-random single-photon state over `num_modes` modes.
pub fn random_photon<R: Rng + ?Sized>(rng: &mut R, num_modes: usize) -> SinglePhotonState {
    loop {
        let raw: Vec<Complex64> = (0..num_modes)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = normalize(&raw) {
            return s;
        }
    }
}

/// Random two-rail target with labels 1..=n.
pub fn random_target<R: Rng + ?Sized>(rng: &mut R, n: usize) -> TargetSpec {
    let photons = (1..=n)
        .map(|k| {
            let s = random_photon(rng, 2);
            TargetPhoton::new(PhotonLabel::new(k as u32).expect("k >= 1"), s.amps()[0], s.amps()[1])
        })
        .collect();
    TargetSpec::new(photons).expect("random factors are normalized")
}

pub fn random_stage<R: Rng + ?Sized>(rng: &mut R) -> StageParams {
    StageParams::wrapped(
        rng.random_range(0.0..=FRAC_PI_2),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    )
}

/// Random valid circuit: beam splitters and phase shifters on undetected
/// modes, interleaved with up to `max_detectors` detectors. At least one mode
/// always stays undetected.
pub fn random_circuit<R: Rng + ?Sized>(
    rng: &mut R,
    num_modes: usize,
    num_elements: usize,
    max_detectors: usize,
) -> Circuit {
    let max_detectors = max_detectors.min(num_modes - 1);
    let num_detectors = rng.random_range(0..=max_detectors);
    let mut detect_at: Vec<usize> = (0..num_detectors).map(|_| rng.random_range(0..=num_elements)).collect();
    detect_at.sort_unstable();

    let mut b = CircuitBuilder::new(num_modes);
    let mut live: Vec<usize> = (0..num_modes).collect();
    let mut next_detector = 0;
    for i in 0..=num_elements {
        while next_detector < detect_at.len() && detect_at[next_detector] == i && live.len() > 1 {
            let m = live.remove(rng.random_range(0..live.len()));
            b.detect(m);
            next_detector += 1;
        }
        if i == num_elements {
            break;
        }
        if live.len() >= 2 && rng.random_bool(0.6) {
            let a = live[rng.random_range(0..live.len())];
            let mut c = a;
            while c == a {
                c = live[rng.random_range(0..live.len())];
            }
            b.beam_splitter(a, c, rng.random_range(0.0..FRAC_PI_2));
        } else {
            let m = live[rng.random_range(0..live.len())];
            b.phase_shift(m, rng.random_range(0.0..TAU));
        }
    }
    b.build().expect("generator only touches live modes")
}
