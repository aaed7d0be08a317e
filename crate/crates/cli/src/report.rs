//! JSON reports and their `--pretty` rendering.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_complex::Complex64;
use serde::Serialize;

use photon_product::nogo::{ClosureReport, NoGoReport, NoGoSweep};
use photon_product::synth::{rail_amplitudes, Verification};
use photon_product::{PhotonLabel, StageParams};

#[derive(Debug, Serialize)]
pub struct InputPort {
    pub label: PhotonLabel,
    pub mode: usize,
}

#[derive(Debug, Serialize)]
pub struct RailAmplitudes {
    pub label: PhotonLabel,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
}

fn rails_of(pairs: Vec<(PhotonLabel, [Complex64; 2])>) -> Vec<RailAmplitudes> {
    pairs
        .into_iter()
        .map(|(label, [alpha1, alpha2])| RailAmplitudes { label, alpha1, alpha2 })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct PlanReport {
    pub num_photons: usize,
    pub num_modes: usize,
    pub num_elements: usize,
    pub detectors: Vec<usize>,
    pub inputs: Vec<InputPort>,
    pub output_rails: (usize, usize),
    pub settings: BTreeMap<String, StageParams>,
    pub predicted_probability: f64,
    pub probability: f64,
    pub fidelity: f64,
    pub output: Vec<RailAmplitudes>,
}

impl PlanReport {
    pub fn new(v: &Verification) -> Self {
        let plan = &v.plan;
        PlanReport {
            num_photons: plan.num_photons(),
            num_modes: plan.circuit.num_modes(),
            num_elements: plan.circuit.elements().len(),
            detectors: plan.circuit.detectors().iter().map(|d| d.mode).collect(),
            inputs: plan
                .inputs
                .iter()
                .map(|&(label, mode)| InputPort { label, mode })
                .collect(),
            output_rails: plan.output_rails,
            settings: plan.settings.clone(),
            predicted_probability: plan.predicted_probability,
            probability: v.probability,
            fidelity: v.fidelity,
            output: rails_of(rail_amplitudes(&v.output, plan.output_rails)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub num_modes: usize,
    pub inputs: Vec<usize>,
    pub output_rails: (usize, usize),
    pub fidelity: f64,
    pub probability: f64,
    pub photon_probabilities: Vec<f64>,
    #[serde(serialize_with = "serialize_rails")]
    pub rail_amplitudes: Vec<(PhotonLabel, [Complex64; 2])>,
}

fn serialize_rails<S: serde::Serializer>(pairs: &[(PhotonLabel, [Complex64; 2])], s: S) -> Result<S::Ok, S::Error> {
    rails_of(pairs.to_vec()).serialize(s)
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub max_amp_diff: f64,
    pub prob_diff: f64,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub plan: PlanReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

pub enum Output {
    Synth(PlanReport),
    Simulate(SimulateReport),
    Verify(VerifyReport),
    NoGo(NoGoReport),
    NoGoSweep(NoGoSweep),
    Closure(ClosureReport),
}

fn complex(z: Complex64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

fn plan_lines(out: &mut String, p: &PlanReport) {
    writeln!(out, "photons      {}", p.num_photons).unwrap();
    writeln!(out, "modes        {}", p.num_modes).unwrap();
    writeln!(out, "elements     {}", p.num_elements).unwrap();
    writeln!(out, "detectors    {:?}", p.detectors).unwrap();
    writeln!(out, "rails        {} {}", p.output_rails.0, p.output_rails.1).unwrap();
    writeln!(out, "fidelity     {:.12}", p.fidelity).unwrap();
    writeln!(
        out,
        "probability  {:.6e} (predicted {:.6e})",
        p.probability, p.predicted_probability
    )
    .unwrap();
    writeln!(
        out,
        "{:<6} {:>10} {:>10} {:>10}",
        "stage", "theta", "phi_top", "phi_bot"
    )
    .unwrap();
    for (name, s) in &p.settings {
        writeln!(
            out,
            "{name:<6} {:>10.6} {:>10.6} {:>10.6}",
            s.theta, s.phi_top, s.phi_bottom
        )
        .unwrap();
    }
    writeln!(out, "{:<6} {:>5} {:>26} {:>26}", "photon", "input", "rail 1", "rail 2").unwrap();
    for (port, r) in p.inputs.iter().zip(&p.output) {
        writeln!(
            out,
            "{:<6} {:>5} {:>26} {:>26}",
            r.label,
            port.mode,
            complex(r.alpha1),
            complex(r.alpha2)
        )
        .unwrap();
    }
}

impl Output {
    pub fn to_json(&self) -> String {
        let mut s = match self {
            Output::Synth(r) => serde_json::to_string_pretty(r),
            Output::Simulate(r) => serde_json::to_string_pretty(r),
            Output::Verify(r) => serde_json::to_string_pretty(r),
            Output::NoGo(r) => serde_json::to_string_pretty(r),
            Output::NoGoSweep(r) => serde_json::to_string_pretty(r),
            Output::Closure(r) => serde_json::to_string_pretty(r),
        }
        .expect("reports hold plain data");
        s.push('\n');
        s
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Synth(p) => plan_lines(&mut out, p),
            Output::Verify(v) => {
                plan_lines(&mut out, &v.plan);
                if let Some(o) = &v.oracle {
                    writeln!(
                        out,
                        "oracle       amp diff {:.2e}, prob diff {:.2e}",
                        o.max_amp_diff, o.prob_diff
                    )
                    .unwrap();
                }
            }
            Output::Simulate(s) => {
                writeln!(out, "modes        {}", s.num_modes).unwrap();
                writeln!(out, "inputs       {:?}", s.inputs).unwrap();
                writeln!(out, "rails        {} {}", s.output_rails.0, s.output_rails.1).unwrap();
                writeln!(out, "fidelity     {:.12}", s.fidelity).unwrap();
                writeln!(out, "probability  {:.6e}", s.probability).unwrap();
                for ((label, [a, b]), p) in s.rail_amplitudes.iter().zip(&s.photon_probabilities) {
                    writeln!(out, "{label:<6} kept {p:.6} {:>26} {:>26}", complex(*a), complex(*b)).unwrap();
                }
            }
            Output::NoGo(r) => {
                writeln!(out, "overlap          {:.6}", r.target_overlap).unwrap();
                writeln!(out, "best fidelity    {:.9}", r.best_fidelity).unwrap();
                writeln!(out, "bound            {:.9}", r.bound_1d).unwrap();
                writeln!(out, "gap              {:.3e}", r.gap).unwrap();
                writeln!(out, "stages only      {:.9}", r.stage_family_fidelity).unwrap();
                let p = r.best_params;
                writeln!(
                    out,
                    "best unitary     theta {:.6}, phi_top {:.6}, phi_bot {:.6}, input phase {:.6}",
                    p.theta, p.phi_top, p.phi_bottom, r.input_phase
                )
                .unwrap();
            }
            Output::NoGoSweep(s) => {
                writeln!(
                    out,
                    "trials               {} (seed {}, budget {})",
                    s.trials, s.seed, s.budget
                )
                .unwrap();
                writeln!(
                    out,
                    "best fidelity        mean {:.6}, min {:.6}, max {:.6}",
                    s.mean_best_fidelity, s.min_best_fidelity, s.max_best_fidelity
                )
                .unwrap();
                writeln!(out, "max excess on bound  {:.3e}", s.max_excess_over_bound).unwrap();
            }
            Output::Closure(c) => {
                writeln!(out, "k                  {}", c.k).unwrap();
                writeln!(out, "trials             {} (seed {})", c.trials, c.seed).unwrap();
                writeln!(out, "phases             {:?}", c.phases).unwrap();
                writeln!(out, "noncanonical       {:.4}", c.fraction_noncanonical).unwrap();
                writeln!(
                    out,
                    "distance           max {:.6e}, mean {:.6e}",
                    c.max_distance, c.mean_distance
                )
                .unwrap();
                writeln!(
                    out,
                    "fit residual       max {:.3e}, mean {:.3e}",
                    c.max_fit_residual, c.mean_fit_residual
                )
                .unwrap();
            }
        }
        out
    }
}
