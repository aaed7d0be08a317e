//! Brute-force simulation over the joint amplitude table.
//!
//! Slow on purpose. Every element acts on every photon slot of every
//! mode-assignment tuple, and post-selection drops whole tuples, so nothing
//! here assumes the joint state factorizes.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::circuit::{simulate, Circuit, Element};
use crate::error::{Error, Result};
use crate::stages::{beam_splitter_matrix, Mat2};
use crate::state::{densify, ComplexAmp, DenseJointState, ProductState, ZERO_NORM};

/// Largest joint table (`M^N`) the oracle accepts.
pub const MAX_DENSE_SIZE: u64 = 10_000_000;

type Table = BTreeMap<Vec<usize>, ComplexAmp>;

fn apply_two_mode(amps: Table, slots: usize, a: usize, b: usize, m: &Mat2) -> Table {
    let mut amps = amps;
    for k in 0..slots {
        let mut next = Table::new();
        for (tuple, amp) in amps {
            let col = if tuple[k] == a {
                0
            } else if tuple[k] == b {
                1
            } else {
                *next.entry(tuple).or_default() += amp;
                continue;
            };
            for (row, out_mode) in [(0, a), (1, b)] {
                let coeff = m.0[row][col];
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut t = tuple.clone();
                t[k] = out_mode;
                *next.entry(t).or_default() += coeff * amp;
            }
        }
        next.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        amps = next;
    }
    amps
}

fn apply_phase(mut amps: Table, mode: usize, phi: f64) -> Table {
    let factor = Complex64::from_polar(1.0, phi);
    for (tuple, amp) in amps.iter_mut() {
        for &m in tuple.iter() {
            if m == mode {
                *amp *= factor;
            }
        }
    }
    amps
}

/// Propagates a joint state through `c` and post-selects on every detector
/// reading vacuum. Returns the renormalized state and the kept probability.
pub fn dense_simulate(c: &Circuit, input: &DenseJointState) -> Result<(DenseJointState, f64)> {
    if input.num_modes != c.num_modes() {
        return Err(Error::ModeCountMismatch {
            expected: c.num_modes(),
            got: input.num_modes,
        });
    }
    let size = (input.num_modes as u64).checked_pow(input.num_photons as u32);
    match size {
        Some(s) if s <= MAX_DENSE_SIZE => {}
        _ => {
            return Err(Error::StateTooLarge {
                size: format!("{}^{}", input.num_modes, input.num_photons),
            })
        }
    }

    let n = input.num_photons;
    let mut amps = input.amps.clone();
    for e in c.elements() {
        amps = match *e {
            Element::BeamSplitter { mode_a, mode_b, theta } => {
                apply_two_mode(amps, n, mode_a, mode_b, &beam_splitter_matrix(theta))
            }
            Element::PhaseShift { mode, phi } => apply_phase(amps, mode, phi),
        };
    }

    let detected = c.detector_modes();
    let before = amps.len();
    amps.retain(|tuple, _| !tuple.iter().any(|m| detected.contains(m)));
    if amps.len() == before {
        return Ok((
            DenseJointState {
                num_modes: input.num_modes,
                num_photons: n,
                amps,
            },
            1.0,
        ));
    }
    let probability: f64 = amps.values().map(|a| a.norm_sqr()).sum();
    if probability.is_nan() || probability < ZERO_NORM {
        return Err(Error::VanishingProbability {
            label: None,
            probability,
        });
    }
    let norm = probability.sqrt();
    amps.values_mut().for_each(|a| *a /= norm);
    Ok((
        DenseJointState {
            num_modes: input.num_modes,
            num_photons: n,
            amps,
        },
        probability,
    ))
}

/// Differences between the factorized and dense simulations of one circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub max_amp_diff: f64,
    pub prob_diff: f64,
}

/// Runs `simulate` and `dense_simulate` on the same input and compares.
///
/// Each factorized photon is phase-aligned (largest amplitude real and
/// positive) and the dense state gets the single global phase that makes the
/// matching tuple real and positive.
pub fn cross_check(c: &Circuit, input: &ProductState) -> Result<CrossCheck> {
    let fast = simulate(c, input)?;
    let (dense, dense_prob) = dense_simulate(c, &densify(input))?;

    let aligned = fast.state.phase_aligned();
    let pivot: Vec<usize> = aligned.photons().iter().map(|p| p.state.largest_mode()).collect();
    let expected = densify(&aligned);
    let anchor = dense.amp(&pivot);
    let rot = if anchor.norm() > 0.0 {
        anchor.conj() / anchor.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };

    let mut max_amp_diff: f64 = 0.0;
    for (tuple, a) in &dense.amps {
        max_amp_diff = max_amp_diff.max((a * rot - expected.amp(tuple)).norm());
    }
    for (tuple, b) in &expected.amps {
        if !dense.amps.contains_key(tuple) {
            max_amp_diff = max_amp_diff.max(b.norm());
        }
    }
    Ok(CrossCheck {
        max_amp_diff,
        prob_diff: (fast.probability - dense_prob).abs(),
    })
}
