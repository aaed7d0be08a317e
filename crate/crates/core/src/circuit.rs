//! Multi-mode circuits and vacuum post-selection.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{ProductState, SinglePhotonState, ZERO_NORM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Mixes two modes with transmission `cos θ` and reflection `i·sin θ`.
    BeamSplitter { mode_a: usize, mode_b: usize, theta: f64 },
    /// Multiplies one mode by `e^{iφ}`.
    PhaseShift { mode: usize, phi: f64 },
}

impl Element {
    pub fn beam_splitter(mode_a: usize, mode_b: usize, theta: f64) -> Self {
        Element::BeamSplitter { mode_a, mode_b, theta }
    }

    pub fn phase_shift(mode: usize, phi: f64) -> Self {
        Element::PhaseShift { mode, phi }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Element::BeamSplitter { mode_a, mode_b, .. } => vec![mode_a, mode_b],
            Element::PhaseShift { mode, .. } => vec![mode],
        }
    }

    pub fn touches(&self, mode: usize) -> bool {
        self.modes().contains(&mode)
    }

    /// Applies the element in place to one photon's amplitude vector.
    pub fn apply(&self, amps: &mut [Complex64]) {
        match *self {
            Element::BeamSplitter { mode_a, mode_b, theta } => {
                let (s, c) = theta.sin_cos();
                let r = Complex64::new(0.0, s);
                let (a, b) = (amps[mode_a], amps[mode_b]);
                amps[mode_a] = a * c + b * r;
                amps[mode_b] = a * r + b * c;
            }
            Element::PhaseShift { mode, phi } => {
                amps[mode] *= Complex64::from_polar(1.0, phi);
            }
        }
    }

    fn validate(&self, num_modes: usize) -> Result<()> {
        for mode in self.modes() {
            if mode >= num_modes {
                return Err(Error::ModeOutOfRange { mode, num_modes });
            }
        }
        match *self {
            Element::BeamSplitter { mode_a, mode_b, theta } => {
                if mode_a == mode_b {
                    return Err(Error::InvalidCircuit(format!(
                        "beam splitter joins mode {mode_a} with itself"
                    )));
                }
                if !theta.is_finite() {
                    return Err(Error::InvalidCircuit("non-finite beam splitter angle".into()));
                }
            }
            Element::PhaseShift { phi, .. } => {
                if !phi.is_finite() {
                    return Err(Error::InvalidCircuit("non-finite phase".into()));
                }
            }
        }
        Ok(())
    }
}

/// A vacuum detector on `mode`, declared after the first `position` elements.
///
/// Detectors absorb: no later element may act on a detected mode, so every
/// detection can equally be taken at the end of the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detector {
    pub mode: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_modes: usize,
    elements: Vec<Element>,
    detectors: Vec<Detector>,
}

impl Circuit {
    /// Validates and builds a circuit. Detectors are kept in declaration
    /// order, stably sorted by position.
    pub fn new(num_modes: usize, elements: Vec<Element>, mut detectors: Vec<Detector>) -> Result<Self> {
        if num_modes < 2 {
            return Err(Error::InvalidCircuit(format!(
                "a circuit needs at least 2 modes, got {num_modes}"
            )));
        }
        for e in &elements {
            e.validate(num_modes)?;
        }
        detectors.sort_by_key(|d| d.position);
        let mut seen = BTreeSet::new();
        for d in &detectors {
            if d.mode >= num_modes {
                return Err(Error::ModeOutOfRange {
                    mode: d.mode,
                    num_modes,
                });
            }
            if !seen.insert(d.mode) {
                return Err(Error::InvalidCircuit(format!("mode {} detected twice", d.mode)));
            }
            if d.position > elements.len() {
                return Err(Error::InvalidCircuit(format!(
                    "detector on mode {} placed after the end of the circuit",
                    d.mode
                )));
            }
            if let Some(i) = elements[d.position..].iter().position(|e| e.touches(d.mode)) {
                return Err(Error::InvalidCircuit(format!(
                    "element {} acts on mode {} after its detector",
                    d.position + i,
                    d.mode
                )));
            }
        }
        Ok(Circuit {
            num_modes,
            elements,
            detectors,
        })
    }

    /// Circuit with no elements and no detectors.
    pub fn empty(num_modes: usize) -> Result<Self> {
        Circuit::new(num_modes, Vec::new(), Vec::new())
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn detectors(&self) -> &[Detector] {
        &self.detectors
    }

    pub fn detector_modes(&self) -> BTreeSet<usize> {
        self.detectors.iter().map(|d| d.mode).collect()
    }
}

/// Incremental construction; `detect` places a detector after the elements
/// pushed so far.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    num_modes: usize,
    elements: Vec<Element>,
    detectors: Vec<Detector>,
}

impl CircuitBuilder {
    pub fn new(num_modes: usize) -> Self {
        CircuitBuilder {
            num_modes,
            elements: Vec::new(),
            detectors: Vec::new(),
        }
    }

    /// Continues from an existing circuit, widening it to `num_modes`.
    pub fn extend(circuit: &Circuit, num_modes: usize) -> Self {
        CircuitBuilder {
            num_modes: num_modes.max(circuit.num_modes),
            elements: circuit.elements.clone(),
            detectors: circuit.detectors.clone(),
        }
    }

    pub fn push(&mut self, element: Element) -> &mut Self {
        self.elements.push(element);
        self
    }

    pub fn beam_splitter(&mut self, mode_a: usize, mode_b: usize, theta: f64) -> &mut Self {
        self.push(Element::beam_splitter(mode_a, mode_b, theta))
    }

    pub fn phase_shift(&mut self, mode: usize, phi: f64) -> &mut Self {
        self.push(Element::phase_shift(mode, phi))
    }

    pub fn detect(&mut self, mode: usize) -> &mut Self {
        self.detectors.push(Detector {
            mode,
            position: self.elements.len(),
        });
        self
    }

    pub fn build(&self) -> Result<Circuit> {
        Circuit::new(self.num_modes, self.elements.clone(), self.detectors.clone())
    }
}

/// Outcome of conditioning on every detector reading zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectResult {
    /// Normalized state, zero on detector modes.
    pub state: ProductState,
    /// Probability that all detectors read zero.
    pub probability: f64,
    /// Per-photon survival probabilities, in photon order.
    pub photon_probabilities: Vec<f64>,
}

/// Propagates every photon through the elements. Detectors are not applied.
pub fn apply_circuit(c: &Circuit, input: &ProductState) -> Result<ProductState> {
    if input.num_modes() != c.num_modes {
        return Err(Error::ModeCountMismatch {
            expected: c.num_modes,
            got: input.num_modes(),
        });
    }
    input.map_states(|p| {
        let mut amps = p.state.amps().to_vec();
        for e in &c.elements {
            e.apply(&mut amps);
        }
        Ok(SinglePhotonState::from_raw_unchecked(amps))
    })
}

/// Projects every photon onto the non-detector modes and renormalizes.
///
/// Photons are distinguishable, so the vacuum projector factorizes and the
/// joint probability is the product of the per-photon kept norms.
pub fn post_select(s: &ProductState, detectors: &BTreeSet<usize>) -> Result<PostSelectResult> {
    if let Some(&mode) = detectors.iter().find(|&&m| m >= s.num_modes()) {
        return Err(Error::ModeOutOfRange {
            mode,
            num_modes: s.num_modes(),
        });
    }
    let mut photon_probabilities = Vec::with_capacity(s.num_photons());
    let state = s.map_states(|p| {
        let mut amps = p.state.amps().to_vec();
        if detectors.iter().all(|&m| amps[m] == Complex64::new(0.0, 0.0)) {
            photon_probabilities.push(1.0);
            return Ok(p.state.clone());
        }
        for &m in detectors {
            amps[m] = Complex64::new(0.0, 0.0);
        }
        let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if kept.is_nan() || kept < ZERO_NORM {
            return Err(Error::VanishingProbability {
                label: Some(p.label),
                probability: kept,
            });
        }
        photon_probabilities.push(kept);
        let norm = kept.sqrt();
        Ok(SinglePhotonState::from_raw_unchecked(
            amps.into_iter().map(|a| a / norm).collect(),
        ))
    })?;
    Ok(PostSelectResult {
        state,
        probability: photon_probabilities.iter().product(),
        photon_probabilities,
    })
}

pub fn simulate(c: &Circuit, input: &ProductState) -> Result<PostSelectResult> {
    post_select(&apply_circuit(c, input)?, &c.detector_modes())
}
