//! Linear-optical preparation of product states of distinguishable photons.
//!
//! A single 2×2 unitary network cannot prepare an arbitrary product of two
//! photons in two rails: it always emits orthogonal factors. Adding vacuum
//! detectors to the unused outputs of balanced joining splitters and keeping
//! only the runs where they stay dark lifts that restriction, for any number
//! of photons, at a success probability of `2^{−(N²+N−2)/2}`.
//!
//! - [`state`]: per-photon amplitude vectors, fidelity, dense expansion.
//! - [`stages`]: 2×2 beam splitter / phase shifter algebra.
//! - [`circuit`]: multi-mode circuits and post-selection.
//! - [`oracle`]: brute-force joint-state simulator for cross-checks.
//! - [`synth`]: interferometer synthesis for a target product state.
//! - [`nogo`]: numerical experiments on what unitary networks cannot do.
//! - [`netlist`], [`target_doc`]: text formats.

pub mod circuit;
pub mod error;
pub mod netlist;
pub mod nogo;
pub mod oracle;
pub mod sample;
pub mod stages;
pub mod state;
pub mod synth;
pub mod target_doc;

pub use circuit::{apply_circuit, post_select, simulate, Circuit, CircuitBuilder, Element, PostSelectResult};
pub use error::{Diagnostic, Error, Result};
pub use netlist::{emit_netlist, parse_netlist};
pub use oracle::{cross_check, dense_simulate, CrossCheck};
pub use stages::{Mat2, StageParams};
pub use state::{densify, normalize, product_fidelity, ComplexAmp, PhotonLabel, ProductState, SinglePhotonState};
pub use synth::{synthesize, verify_target, SynthesisPlan, TargetPhoton, TargetSpec};
pub use target_doc::{emit_target_doc, parse_target_doc};
