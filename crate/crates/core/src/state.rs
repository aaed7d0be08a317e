//! Photon states.
//!
//! Every photon carries its own frequency label and no two photons share a
//! label, so a joint state that starts as a product stays a product under any
//! linear-optical network. Each photon is therefore stored as one amplitude
//! vector over the circuit modes. [`DenseJointState`] is the brute-force
//! alternative over mode-assignment tuples and only exists to cross-check the
//! factorized path.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex probability amplitude.
pub type ComplexAmp = Complex64;

/// Tolerance on every normalization check.
pub const NORM_TOL: f64 = 1e-12;

/// Below this norm a vector is treated as zero.
pub const ZERO_NORM: f64 = 1e-15;

/// Frequency label of a distinguishable photon (index >= 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PhotonLabel(u32);

impl PhotonLabel {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidLabel);
        }
        Ok(PhotonLabel(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for PhotonLabel {
    type Error = Error;

    fn try_from(index: u32) -> Result<Self> {
        PhotonLabel::new(index)
    }
}

impl From<PhotonLabel> for u32 {
    fn from(label: PhotonLabel) -> u32 {
        label.0
    }
}

impl fmt::Display for PhotonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&format!("ω{}", self.0))
    }
}

/// Normalized amplitude vector of one photon over the circuit modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhotonState {
    amps: Vec<ComplexAmp>,
}

/// Rescales `raw` to unit norm.
pub fn normalize(raw: &[ComplexAmp]) -> Result<SinglePhotonState> {
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if raw.is_empty() || !norm.is_finite() || norm < ZERO_NORM {
        return Err(Error::ZeroVector);
    }
    Ok(SinglePhotonState {
        amps: raw.iter().map(|a| a / norm).collect(),
    })
}

impl SinglePhotonState {
    /// Wraps an already normalized vector, checking the norm.
    pub fn new(amps: Vec<ComplexAmp>) -> Result<Self> {
        let norm_sqr = squared_norm(&amps);
        if amps.is_empty() || !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::StateNotNormalized { norm_sqr });
        }
        Ok(SinglePhotonState { amps })
    }

    /// Photon sitting in `mode` of a `num_modes`-mode circuit.
    pub fn basis(num_modes: usize, mode: usize) -> Result<Self> {
        if mode >= num_modes {
            return Err(Error::ModeOutOfRange { mode, num_modes });
        }
        let mut amps = vec![ComplexAmp::new(0.0, 0.0); num_modes];
        amps[mode] = ComplexAmp::new(1.0, 0.0);
        Ok(SinglePhotonState { amps })
    }

    pub(crate) fn from_raw_unchecked(amps: Vec<ComplexAmp>) -> Self {
        SinglePhotonState { amps }
    }

    pub fn amps(&self) -> &[ComplexAmp] {
        &self.amps
    }

    pub fn num_modes(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        squared_norm(&self.amps)
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &SinglePhotonState) -> ComplexAmp {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// The same state with its largest-magnitude amplitude made real and
    /// positive. Ties go to the lowest mode.
    pub fn phase_aligned(&self) -> SinglePhotonState {
        let pivot = self.largest_mode();
        let a = self.amps[pivot];
        if a.norm() == 0.0 {
            return self.clone();
        }
        let rot = a.conj() / a.norm();
        SinglePhotonState {
            amps: self.amps.iter().map(|x| x * rot).collect(),
        }
    }

    pub(crate) fn largest_mode(&self) -> usize {
        let mut best = 0;
        for (m, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > self.amps[best].norm_sqr() {
                best = m;
            }
        }
        best
    }
}

fn squared_norm(amps: &[ComplexAmp]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// One photon factor of a [`ProductState`].
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPhoton {
    pub label: PhotonLabel,
    pub state: SinglePhotonState,
}

/// Tensor product of single-photon states, one per distinguishable photon.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    photons: Vec<LabeledPhoton>,
}

impl ProductState {
    pub fn new(photons: Vec<(PhotonLabel, SinglePhotonState)>) -> Result<Self> {
        if photons.is_empty() {
            return Err(Error::InvalidArgument(
                "a product state needs at least one photon".into(),
            ));
        }
        let num_modes = photons[0].1.num_modes();
        let mut seen = BTreeSet::new();
        for (label, state) in &photons {
            if !seen.insert(*label) {
                return Err(Error::LabelCollision(*label));
            }
            if state.num_modes() != num_modes {
                return Err(Error::ModeCountMismatch {
                    expected: num_modes,
                    got: state.num_modes(),
                });
            }
        }
        Ok(ProductState {
            photons: photons
                .into_iter()
                .map(|(label, state)| LabeledPhoton { label, state })
                .collect(),
        })
    }

    pub fn photons(&self) -> &[LabeledPhoton] {
        &self.photons
    }

    pub fn num_photons(&self) -> usize {
        self.photons.len()
    }

    pub fn num_modes(&self) -> usize {
        self.photons[0].state.num_modes()
    }

    pub fn labels(&self) -> Vec<PhotonLabel> {
        self.photons.iter().map(|p| p.label).collect()
    }

    pub fn get(&self, label: PhotonLabel) -> Option<&SinglePhotonState> {
        self.photons.iter().find(|p| p.label == label).map(|p| &p.state)
    }

    pub(crate) fn map_states(
        &self,
        mut f: impl FnMut(&LabeledPhoton) -> Result<SinglePhotonState>,
    ) -> Result<ProductState> {
        let photons = self
            .photons
            .iter()
            .map(|p| {
                Ok(LabeledPhoton {
                    label: p.label,
                    state: f(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductState { photons })
    }

    /// Every factor phase-aligned (see [`SinglePhotonState::phase_aligned`]).
    pub fn phase_aligned(&self) -> ProductState {
        ProductState {
            photons: self
                .photons
                .iter()
                .map(|p| LabeledPhoton {
                    label: p.label,
                    state: p.state.phase_aligned(),
                })
                .collect(),
        }
    }
}

/// Π_k |⟨a_k|b_k⟩|², pairing factors by label.
pub fn product_fidelity(a: &ProductState, b: &ProductState) -> Result<f64> {
    let la: BTreeSet<_> = a.labels().into_iter().collect();
    let lb: BTreeSet<_> = b.labels().into_iter().collect();
    if la != lb {
        return Err(Error::LabelMismatch);
    }
    if a.num_modes() != b.num_modes() {
        return Err(Error::ModeCountMismatch {
            expected: a.num_modes(),
            got: b.num_modes(),
        });
    }
    let mut fidelity = 1.0;
    for p in a.photons() {
        let other = b.get(p.label).expect("label sets are equal");
        fidelity *= p.state.inner(other).norm_sqr();
    }
    Ok(fidelity.clamp(0.0, 1.0))
}

/// Joint amplitude table over mode-assignment tuples `(m_1, …, m_N)`.
///
/// Only nonzero entries are stored. Iteration order is the lexicographic
/// order of the tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseJointState {
    pub num_modes: usize,
    pub num_photons: usize,
    pub amps: BTreeMap<Vec<usize>, ComplexAmp>,
}

impl DenseJointState {
    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn amp(&self, modes: &[usize]) -> ComplexAmp {
        self.amps.get(modes).copied().unwrap_or_default()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &DenseJointState) -> ComplexAmp {
        self.amps
            .iter()
            .filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b))
            .sum()
    }
}

/// Expands a product state into the joint amplitude table,
/// `amp(m_1, …, m_N) = Π_k a_k[m_k]`.
pub fn densify(p: &ProductState) -> DenseJointState {
    let mut amps: BTreeMap<Vec<usize>, ComplexAmp> = BTreeMap::new();
    amps.insert(Vec::new(), ComplexAmp::new(1.0, 0.0));
    for photon in p.photons() {
        let mut next = BTreeMap::new();
        for (prefix, a) in &amps {
            for (m, b) in photon.state.amps().iter().enumerate() {
                if *b == ComplexAmp::new(0.0, 0.0) {
                    continue;
                }
                let mut key = prefix.clone();
                key.push(m);
                next.insert(key, a * b);
            }
        }
        amps = next;
    }
    DenseJointState {
        num_modes: p.num_modes(),
        num_photons: p.num_photons(),
        amps,
    }
}
