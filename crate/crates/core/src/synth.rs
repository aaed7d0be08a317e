//! Interferometers that prepare arbitrary two-rail product states.
//!
//! Each photon is first given its own amplitude pair by a canonical stage.
//! Photons are then merged onto a common pair of output rails with balanced
//! beam splitters whose other outputs carry vacuum detectors. Conditioning on
//! those detectors staying dark makes each joining splitter behave as a
//! mirror for one incoming side and as a clear path for the other, so every
//! photon arrives on the rails with its prepared amplitudes intact.
//!
//! # Mode layout
//!
//! Two photons (4 modes):
//!
//! | mode | arm before the joining splitters | arm after |
//! |------|----------------------------------|-----------|
//! | 0    | a1 (reflected arm of A)          | d2, detector |
//! | 1    | a2 (transmitted arm of A)        | c1, detector |
//! | 2    | b2 (transmitted arm of B)        | c2, rail 1   |
//! | 3    | b1 (reflected arm of B)          | d1, rail 2   |
//!
//! Photon 1 enters A on mode 1, photon 2 enters B on mode 2. C joins modes
//! 1 and 2, D joins modes 0 and 3. Photon 1 is reflected onto the rails by
//! both C and D, photon 2 passes both.
//!
//! Each further photon adds two modes `e1 = M`, `e2 = M + 1`. It enters E on
//! `e2`; E reflects its rail-1 amplitude into `e1`. F joins rail 1 with
//! `e1`, G joins rail 2 with `e2`, and both `e1` and `e2` are then detected.
//! The rails never move, so the output rails are modes 2 and 3 for every
//! `N >= 2` (modes 0 and 1 for a single photon).

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::circuit::{simulate, Circuit, CircuitBuilder};
use crate::error::{Error, Result};
use crate::stages::StageParams;
use crate::state::{product_fidelity, ComplexAmp, PhotonLabel, ProductState, SinglePhotonState};

/// Tolerance on target normalization.
pub const TARGET_TOL: f64 = 1e-10;

/// Splitting angle of every joining splitter (C, D, F, G).
pub const BALANCED: f64 = FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetPhoton {
    pub label: PhotonLabel,
    /// Amplitude on rail 1.
    pub alpha1: ComplexAmp,
    /// Amplitude on rail 2.
    pub alpha2: ComplexAmp,
}

impl TargetPhoton {
    pub fn new(label: PhotonLabel, alpha1: ComplexAmp, alpha2: ComplexAmp) -> Self {
        TargetPhoton { label, alpha1, alpha2 }
    }
}

/// Requested per-photon two-rail amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec {
    photons: Vec<TargetPhoton>,
}

fn check_normalized(label: Option<PhotonLabel>, alpha1: ComplexAmp, alpha2: ComplexAmp) -> Result<()> {
    let norm_sqr = alpha1.norm_sqr() + alpha2.norm_sqr();
    if norm_sqr.is_nan() || (norm_sqr - 1.0).abs() > TARGET_TOL {
        return Err(Error::NotNormalized { label, norm_sqr });
    }
    Ok(())
}

impl TargetSpec {
    pub fn new(photons: Vec<TargetPhoton>) -> Result<Self> {
        if photons.is_empty() {
            return Err(Error::InvalidArgument("a target needs at least one photon".into()));
        }
        let mut seen = BTreeSet::new();
        for p in &photons {
            if !seen.insert(p.label) {
                return Err(Error::LabelCollision(p.label));
            }
            check_normalized(Some(p.label), p.alpha1, p.alpha2)?;
        }
        Ok(TargetSpec { photons })
    }

    pub fn photons(&self) -> &[TargetPhoton] {
        &self.photons
    }

    pub fn len(&self) -> usize {
        self.photons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.photons.is_empty()
    }

    /// The first `n` photons.
    pub fn prefix(&self, n: usize) -> Result<TargetSpec> {
        TargetSpec::new(self.photons[..n.min(self.photons.len())].to_vec())
    }

    /// The target as a product state over `num_modes` modes, with each
    /// photon's amplitudes placed on `rails`.
    pub fn to_product_state(&self, num_modes: usize, rails: (usize, usize)) -> Result<ProductState> {
        let photons = self
            .photons
            .iter()
            .map(|p| {
                let mut amps = vec![ComplexAmp::new(0.0, 0.0); num_modes];
                for (mode, a) in [(rails.0, p.alpha1), (rails.1, p.alpha2)] {
                    if mode >= num_modes {
                        return Err(Error::ModeOutOfRange { mode, num_modes });
                    }
                    amps[mode] = a;
                }
                Ok((p.label, crate::state::normalize(&amps)?))
            })
            .collect::<Result<Vec<_>>>()?;
        ProductState::new(photons)
    }
}

/// Angle and phases that put `alpha1` on the transmitted arm and `alpha2` on
/// the reflected arm of a canonical stage fed in one port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleStageSolution {
    /// `arccos |alpha1|`, in `[0, π/2]`.
    pub theta: f64,
    /// Phase shifter on the transmitted arm, `arg(alpha1)`.
    pub phi_alpha1: f64,
    /// Phase shifter on the reflected arm, `arg(alpha2) − π/2`.
    pub phi_alpha2: f64,
}

impl SingleStageSolution {
    /// Stage parameters for a stage fed in its top port.
    pub fn params(&self) -> StageParams {
        StageParams::wrapped(self.theta, self.phi_alpha1, self.phi_alpha2)
    }
}

/// Inverts `e^{iφ1}·cos θ = alpha1`, `e^{iφ2}·i·sin θ = alpha2`.
///
/// A phase with nothing to act on (zero amplitude) is set to 0.
pub fn solve_single_stage(alpha1: ComplexAmp, alpha2: ComplexAmp) -> Result<SingleStageSolution> {
    check_normalized(None, alpha1, alpha2)?;
    let theta = alpha2.norm().atan2(alpha1.norm());
    let phi_alpha1 = if alpha1.norm() < 1e-15 { 0.0 } else { alpha1.arg() };
    let phi_alpha2 = if alpha2.norm() < 1e-15 {
        0.0
    } else {
        alpha2.arg() - FRAC_PI_2
    };
    let p = StageParams::wrapped(theta, phi_alpha1, phi_alpha2);
    Ok(SingleStageSolution {
        theta: p.theta,
        phi_alpha1: p.phi_top,
        phi_alpha2: p.phi_bottom,
    })
}

/// A synthesized interferometer and where its photons go in and come out.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisPlan {
    pub circuit: Circuit,
    /// Stage settings by name: "A", "B", "C", "D", then "E_n", "F_n", "G_n"
    /// for the n-th photon, n >= 3.
    pub settings: BTreeMap<String, StageParams>,
    /// (rail 1, rail 2) output modes.
    pub output_rails: (usize, usize),
    /// Input mode of each photon, in photon order.
    pub inputs: Vec<(PhotonLabel, usize)>,
    pub predicted_probability: f64,
}

impl SynthesisPlan {
    pub fn num_photons(&self) -> usize {
        self.inputs.len()
    }

    pub fn labels(&self) -> Vec<PhotonLabel> {
        self.inputs.iter().map(|(l, _)| *l).collect()
    }

    /// Every photon in its input mode.
    pub fn input_state(&self) -> Result<ProductState> {
        let m = self.circuit.num_modes();
        ProductState::new(
            self.inputs
                .iter()
                .map(|&(label, mode)| Ok((label, SinglePhotonState::basis(m, mode)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

fn push_stage(b: &mut CircuitBuilder, top: usize, bottom: usize, p: &StageParams) {
    b.beam_splitter(top, bottom, p.theta)
        .phase_shift(top, p.phi_top)
        .phase_shift(bottom, p.phi_bottom);
}

/// Single photon: one canonical stage on modes (0, 1), fed in mode 0.
pub fn build_single_photon(label: PhotonLabel, alpha1: ComplexAmp, alpha2: ComplexAmp) -> Result<SynthesisPlan> {
    check_normalized(Some(label), alpha1, alpha2)?;
    let a = solve_single_stage(alpha1, alpha2)?.params();
    let mut b = CircuitBuilder::new(2);
    push_stage(&mut b, 0, 1, &a);
    Ok(SynthesisPlan {
        circuit: b.build()?,
        settings: BTreeMap::from([("A".to_string(), a)]),
        output_rails: (0, 1),
        inputs: vec![(label, 0)],
        predicted_probability: 1.0,
    })
}

/// Raw settings of the two-photon interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonSettings {
    /// Stage A; top arm a2 (mode 1), bottom arm a1 (mode 0).
    pub a: StageParams,
    /// Stage B; top arm b2 (mode 2), bottom arm b1 (mode 3).
    pub b: StageParams,
    pub theta_c: f64,
    pub theta_d: f64,
}

impl TwoPhotonSettings {
    /// Settings in arm-phase form: `phi[j-1]` is φj, with φ1 on a1, φ2 on b1,
    /// φ3 on b2 and φ4 on a2. C and D are balanced.
    pub fn from_arm_phases(theta_a: f64, theta_b: f64, phi: [f64; 4]) -> Self {
        TwoPhotonSettings {
            a: StageParams::wrapped(theta_a, phi[3], phi[0]),
            b: StageParams::wrapped(theta_b, phi[2], phi[1]),
            theta_c: BALANCED,
            theta_d: BALANCED,
        }
    }
}

pub const TWO_PHOTON_MODES: usize = 4;
pub const TWO_PHOTON_RAILS: (usize, usize) = (2, 3);
pub const TWO_PHOTON_INPUTS: [usize; 2] = [1, 2];

pub fn two_photon_circuit(s: &TwoPhotonSettings) -> Result<Circuit> {
    let mut b = CircuitBuilder::new(TWO_PHOTON_MODES);
    push_stage(&mut b, 1, 0, &s.a);
    push_stage(&mut b, 2, 3, &s.b);
    b.beam_splitter(1, 2, s.theta_c)
        .beam_splitter(0, 3, s.theta_d)
        .detect(1)
        .detect(0);
    b.build()
}

fn expect_photons(t: &TargetSpec, n: usize) -> Result<()> {
    if t.len() != n {
        return Err(Error::WrongPhotonCount {
            expected: n,
            got: t.len(),
        });
    }
    Ok(())
}

pub fn build_two_photon(t: &TargetSpec) -> Result<SynthesisPlan> {
    build_two_photon_with(t, BALANCED, BALANCED)
}

/// Two-photon scheme with explicit joining angles. Only matched angles
/// (`theta_c == theta_d`) reproduce the target exactly.
pub fn build_two_photon_with(t: &TargetSpec, theta_c: f64, theta_d: f64) -> Result<SynthesisPlan> {
    expect_photons(t, 2)?;
    let [p1, p2] = [t.photons[0], t.photons[1]];
    let settings = TwoPhotonSettings {
        a: solve_single_stage(p1.alpha1, p1.alpha2)?.params(),
        b: solve_single_stage(p2.alpha1, p2.alpha2)?.params(),
        theta_c,
        theta_d,
    };
    // photon 1 is reflected by C and D, photon 2 transmitted
    let (sc, cc) = theta_c.sin_cos();
    let (sd, cd) = theta_d.sin_cos();
    let keep1 = sc * sc * p1.alpha1.norm_sqr() + sd * sd * p1.alpha2.norm_sqr();
    let keep2 = cc * cc * p2.alpha1.norm_sqr() + cd * cd * p2.alpha2.norm_sqr();
    Ok(SynthesisPlan {
        circuit: two_photon_circuit(&settings)?,
        settings: BTreeMap::from([
            ("A".to_string(), settings.a),
            ("B".to_string(), settings.b),
            ("C".to_string(), StageParams::splitter(theta_c)),
            ("D".to_string(), StageParams::splitter(theta_d)),
        ]),
        output_rails: TWO_PHOTON_RAILS,
        inputs: vec![(p1.label, TWO_PHOTON_INPUTS[0]), (p2.label, TWO_PHOTON_INPUTS[1])],
        predicted_probability: keep1 * keep2,
    })
}

/// Adds one photon to an existing plan.
pub fn extend_with_photon(
    plan: &SynthesisPlan,
    alpha1: ComplexAmp,
    alpha2: ComplexAmp,
    label: PhotonLabel,
) -> Result<SynthesisPlan> {
    if plan.inputs.iter().any(|(l, _)| *l == label) {
        return Err(Error::LabelCollision(label));
    }
    check_normalized(Some(label), alpha1, alpha2)?;
    let n = plan.num_photons() + 1;
    let m = plan.circuit.num_modes();
    let (e1, e2) = (m, m + 1);
    let (rail1, rail2) = plan.output_rails;

    // E's transmitted arm (e2) carries alpha2, its reflected arm (e1) alpha1
    let e = solve_single_stage(alpha2, alpha1)?.params();
    let mut b = CircuitBuilder::extend(&plan.circuit, m + 2);
    push_stage(&mut b, e2, e1, &e);
    b.beam_splitter(rail1, e1, BALANCED)
        .beam_splitter(rail2, e2, BALANCED)
        .detect(e1)
        .detect(e2);

    let mut settings = plan.settings.clone();
    settings.insert(format!("E_{n}"), e);
    settings.insert(format!("F_{n}"), StageParams::splitter(BALANCED));
    settings.insert(format!("G_{n}"), StageParams::splitter(BALANCED));
    let mut inputs = plan.inputs.clone();
    inputs.push((label, e2));

    Ok(SynthesisPlan {
        circuit: b.build()?,
        settings,
        output_rails: plan.output_rails,
        inputs,
        predicted_probability: plan.predicted_probability * 0.5f64.powi(n as i32),
    })
}

/// Builds the interferometer for any number of photons: one stage for a
/// single photon, the two-photon scheme, then one extension per further
/// photon.
pub fn synthesize(t: &TargetSpec) -> Result<SynthesisPlan> {
    let photons = t.photons();
    match photons.len() {
        0 => Err(Error::InvalidArgument("empty target".into())),
        1 => build_single_photon(photons[0].label, photons[0].alpha1, photons[0].alpha2),
        _ => photons[2..]
            .iter()
            .try_fold(build_two_photon(&t.prefix(2)?)?, |plan, p| {
                extend_with_photon(&plan, p.alpha1, p.alpha2, p.label)
            }),
    }
}

/// `2^{−(n²+n−2)/2}`: the chance that every detector stays dark when all
/// joining splitters are balanced. Equal to 1 for a single photon.
///
/// # Panics
/// If `n == 0`.
pub fn predicted_success_probability(n: usize) -> f64 {
    assert!(n >= 1, "at least one photon");
    let exponent = (n * n + n - 2) / 2;
    0.5f64.powi(exponent as i32)
}

/// Outcome of synthesizing and simulating a target.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub fidelity: f64,
    pub probability: f64,
    pub plan: SynthesisPlan,
    /// The simulated post-selected state.
    pub output: ProductState,
}

pub fn verify_target(t: &TargetSpec) -> Result<Verification> {
    let plan = synthesize(t)?;
    verify_plan(t, plan)
}

/// Simulates `plan` from its canonical inputs and scores it against `t`.
pub fn verify_plan(t: &TargetSpec, plan: SynthesisPlan) -> Result<Verification> {
    let result = simulate(&plan.circuit, &plan.input_state()?)?;
    let target = t.to_product_state(plan.circuit.num_modes(), plan.output_rails)?;
    Ok(Verification {
        fidelity: product_fidelity(&result.state, &target)?,
        probability: result.probability,
        plan,
        output: result.state,
    })
}

/// Rail amplitudes of each output photon, `(label, [rail1, rail2])`.
pub fn rail_amplitudes(state: &ProductState, rails: (usize, usize)) -> Vec<(PhotonLabel, [Complex64; 2])> {
    state
        .photons()
        .iter()
        .map(|p| (p.label, [p.state.amps()[rails.0], p.state.amps()[rails.1]]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stages::wrap_phase;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn label(i: u32) -> PhotonLabel {
        PhotonLabel::new(i).unwrap()
    }

    fn target(pairs: &[(Complex64, Complex64)]) -> TargetSpec {
        TargetSpec::new(
            pairs
                .iter()
                .enumerate()
                .map(|(k, &(a1, a2))| TargetPhoton::new(label(k as u32 + 1), a1, a2))
                .collect(),
        )
        .unwrap()
    }

    fn phase_close(a: f64, b: f64) -> bool {
        let d = wrap_phase(a - b);
        d < 1e-12 || (2.0 * PI - d) < 1e-12
    }

    #[test]
    fn solve_examples() {
        let s = solve_single_stage(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!((s.theta, s.phi_alpha1, s.phi_alpha2), (0.0, 0.0, 0.0));

        let s = solve_single_stage(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((s.theta - FRAC_PI_2).abs() < 1e-15);
        assert!(phase_close(s.phi_alpha2, -FRAC_PI_2));

        let s = solve_single_stage(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
        assert!((s.theta - FRAC_PI_4).abs() < 1e-15);
        assert!(phase_close(s.phi_alpha1, 0.0));
        assert!(phase_close(s.phi_alpha2, 0.0));

        assert!(matches!(
            solve_single_stage(c(0.9, 0.0), c(0.0, 0.0)),
            Err(Error::NotNormalized { label: None, .. })
        ));
    }

    #[test]
    fn solve_reconstructs() {
        let a1 = Complex64::from_polar(0.6, 2.0);
        let a2 = Complex64::from_polar(0.8, -1.3);
        let s = solve_single_stage(a1, a2).unwrap();
        let r1 = Complex64::from_polar(s.theta.cos(), s.phi_alpha1);
        let r2 = Complex64::from_polar(1.0, s.phi_alpha2) * c(0.0, s.theta.sin());
        assert!((r1 - a1).norm() < 1e-12);
        assert!((r2 - a2).norm() < 1e-12);
    }

    #[test]
    fn single_photon_plans() {
        let plan = build_single_photon(label(1), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(plan.settings["A"].theta, 0.0);
        assert_eq!(plan.predicted_probability, 1.0);

        let plan = build_single_photon(label(1), c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        let a = plan.settings["A"];
        assert!((a.theta - FRAC_PI_4).abs() < 1e-15);
        assert!(phase_close(a.phi_bottom, -FRAC_PI_2));
        let t = target(&[(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0))]);
        let v = verify_plan(&t, plan).unwrap();
        assert!(v.fidelity >= 1.0 - 1e-12);
        assert_eq!(v.probability, 1.0);
    }

    #[test]
    fn two_photon_degenerate_target() {
        let t = target(&[(c(1.0, 0.0), c(0.0, 0.0)), (c(1.0, 0.0), c(0.0, 0.0))]);
        let v = verify_target(&t).unwrap();
        assert!(v.fidelity >= 1.0 - 1e-12);
        assert!((v.probability - 0.25).abs() < 1e-12);
        assert!((v.plan.predicted_probability - 0.25).abs() < 1e-15);
    }

    #[test]
    fn two_photon_named_settings() {
        // θA = π/4, φ4 = φ1 = 0; θB = π/3, φ3 = π/2, φ2 = 0
        let s = TwoPhotonSettings::from_arm_phases(FRAC_PI_4, FRAC_PI_3, [0.0, 0.0, FRAC_PI_2, 0.0]);
        let circ = two_photon_circuit(&s).unwrap();
        let input = ProductState::new(vec![
            (label(1), SinglePhotonState::basis(4, 1).unwrap()),
            (label(2), SinglePhotonState::basis(4, 2).unwrap()),
        ])
        .unwrap();
        let out = simulate(&circ, &input).unwrap();
        let expected = target(&[
            (c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)),
            (c(0.0, 0.5), c(0.0, 3f64.sqrt() / 2.0)),
        ]);
        let f = product_fidelity(&out.state, &expected.to_product_state(4, TWO_PHOTON_RAILS).unwrap()).unwrap();
        assert!(f >= 1.0 - 1e-12);

        // and the inversion recovers the same settings
        let plan = build_two_photon(&expected).unwrap();
        let b = plan.settings["B"];
        assert!((b.theta - FRAC_PI_3).abs() < 1e-12);
        assert!(phase_close(b.phi_top, FRAC_PI_2));
        assert!(phase_close(b.phi_bottom, 0.0));
    }

    #[test]
    fn two_photon_errors() {
        let t = target(&[(c(1.0, 0.0), c(0.0, 0.0))]);
        assert!(matches!(build_two_photon(&t), Err(Error::WrongPhotonCount { .. })));
        assert!(matches!(
            TargetSpec::new(vec![
                TargetPhoton::new(label(1), c(1.0, 0.0), c(0.0, 0.0)),
                TargetPhoton::new(label(1), c(0.0, 1.0), c(0.0, 0.0)),
            ]),
            Err(Error::LabelCollision(_))
        ));
        assert!(matches!(
            TargetSpec::new(vec![TargetPhoton::new(label(1), c(0.9, 0.0), c(0.0, 0.0))]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn extension_examples() {
        let base = build_two_photon(&target(&[(c(0.6, 0.0), c(0.0, 0.8)), (c(0.0, 1.0), c(0.0, 0.0))])).unwrap();

        let plan = extend_with_photon(&base, c(1.0, 0.0), c(0.0, 0.0), label(3)).unwrap();
        let e = plan.settings["E_3"];
        assert!((e.theta - FRAC_PI_2).abs() < 1e-15);
        assert!(phase_close(e.phi_bottom, -FRAC_PI_2));
        assert_eq!(plan.circuit.num_modes(), 6);
        assert!((plan.predicted_probability - 1.0 / 32.0).abs() < 1e-15);

        let plan = extend_with_photon(&base, c(0.0, 0.0), c(1.0, 0.0), label(3)).unwrap();
        assert_eq!(plan.settings["E_3"].theta, 0.0);

        assert!(matches!(
            extend_with_photon(&base, c(1.0, 0.0), c(0.0, 0.0), label(2)),
            Err(Error::LabelCollision(_))
        ));
        assert!(matches!(
            extend_with_photon(&base, c(1.0, 0.0), c(0.1, 0.0), label(3)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn synthesize_dispatch() {
        let t1 = target(&[(c(0.6, 0.0), c(0.0, 0.8))]);
        assert_eq!(synthesize(&t1).unwrap().predicted_probability, 1.0);

        let t2 = target(&[(c(0.6, 0.0), c(0.0, 0.8)), (c(0.0, 0.6), c(0.8, 0.0))]);
        assert_eq!(synthesize(&t2).unwrap(), build_two_photon(&t2).unwrap());
    }

    #[test]
    fn success_probability_values() {
        assert_eq!(predicted_success_probability(1), 1.0);
        assert_eq!(predicted_success_probability(2), 0.25);
        assert_eq!(predicted_success_probability(3), 0.03125);
        assert_eq!(predicted_success_probability(5), 0.5f64.powi(14));
        for n in 1..10 {
            assert!(predicted_success_probability(n + 1) < predicted_success_probability(n));
        }
    }

    #[test]
    #[should_panic]
    fn success_probability_needs_a_photon() {
        predicted_success_probability(0);
    }

    #[test]
    fn rails_carry_targets() {
        let t = target(&[
            (c(0.6, 0.0), c(0.0, 0.8)),
            (c(0.0, 0.6), c(0.8, 0.0)),
            (Complex64::from_polar(0.28, 1.0), Complex64::from_polar(0.96, -2.0)),
        ]);
        let v = verify_target(&t).unwrap();
        assert!(v.fidelity >= 1.0 - 1e-12);
        for (_, amps) in rail_amplitudes(&v.output, v.plan.output_rails) {
            assert!((amps[0].norm_sqr() + amps[1].norm_sqr() - 1.0).abs() < 1e-12);
        }
        // every non-rail mode is detected
        let detected = v.plan.circuit.detector_modes();
        for m in 0..v.plan.circuit.num_modes() {
            assert_eq!(detected.contains(&m), m != 2 && m != 3);
        }
    }
}
