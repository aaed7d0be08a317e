//! Why no unitary two-mode network prepares a general two-photon product.
//!
//! With one photon fed into each input port of a 2×2 unitary `U`, the two
//! photons leave in the states `U·e₀` and `U·e₁`, which are orthogonal for
//! every `U`. A target whose two factors overlap can therefore never be
//! reached exactly. [`overlap_bound_1d`] gives the best achievable product
//! fidelity for a given overlap, and [`best_unitary_fidelity`] searches all
//! of U(2) numerically to confirm it.
//!
//! [`closure_experiment`] samples cascades of canonical stages and measures
//! how far they fall from a single canonical stage, both as whole matrices
//! and column by column.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sample::{random_stage, random_target};
use crate::stages::{
    beam_splitter_matrix, canonical_distance, compose_stages, fit_column, wrap_phase, Mat2, StageParams,
};
use crate::synth::{TargetPhoton, TargetSpec};

/// Smallest evaluation budget accepted by [`best_unitary_fidelity`].
pub const MIN_BUDGET: usize = 10_000;

/// Points in the [`overlap_bound_1d`] grid.
pub const BOUND_GRID: usize = 1_000_000;

/// Cascades farther than this from every canonical stage count as
/// non-canonical.
pub const NONCANONICAL_THRESHOLD: f64 = 1e-6;

fn pair(t: &TargetSpec) -> Result<[TargetPhoton; 2]> {
    match t.photons() {
        [a, b] => Ok([*a, *b]),
        other => Err(Error::WrongPhotonCount {
            expected: 2,
            got: other.len(),
        }),
    }
}

/// `|⟨t₁|t₂⟩|` for the two factors of a two-photon target.
pub fn pair_overlap(t: &TargetSpec) -> Result<f64> {
    let [a, b] = pair(t)?;
    let overlap = a.alpha1.conj() * b.alpha1 + a.alpha2.conj() * b.alpha2;
    Ok(overlap.norm().min(1.0))
}

/// `max_χ cos²χ·(c·sin χ + √(1−c²)·cos χ)²` over a grid on `[0, π/2]`:
/// the best product fidelity any unitary reaches when the target factors
/// have overlap `c`.
pub fn overlap_bound_1d(c: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(Error::OutOfRange(c));
    }
    let c = c.clamp(0.0, 1.0);
    let s = (1.0 - c * c).sqrt();
    let step = FRAC_PI_2 / (BOUND_GRID - 1) as f64;
    let best = (0..BOUND_GRID)
        .map(|j| {
            let (sin, cos) = (j as f64 * step).sin_cos();
            let amp = c * sin + s * cos;
            cos * cos * amp * amp
        })
        .fold(0.0, f64::max);
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoGoReport {
    /// `|⟨t₁|t₂⟩|`
    pub target_overlap: f64,
    /// Best product fidelity over all of U(2).
    pub best_fidelity: f64,
    pub best_params: StageParams,
    /// Relative phase on the second input port of the best unitary.
    pub input_phase: f64,
    pub bound_1d: f64,
    /// `bound_1d − best_fidelity`
    pub gap: f64,
    /// Best product fidelity with the input phase held at zero, i.e. over
    /// canonical stages only.
    pub stage_family_fidelity: f64,
}

/// U = diag(e^{iφt}, e^{iφb}) · BS(θ) · diag(1, e^{iδ}) with θ unrestricted,
/// so the search never sits on the θ = π/2 edge where φt goes flat.
fn unitary(x: &[f64; 4]) -> Mat2 {
    Mat2::phases(x[1], x[2]) * beam_splitter_matrix(x[0]) * Mat2::phases(0.0, x[3])
}

/// Folds a search point back to θ ∈ [0, π/2], up to a global phase:
/// BS(θ + π) = −BS(θ) and BS(π − θ) = diag(−1, 1)·BS(θ)·diag(1, −1).
fn canonical_point(x: &[f64; 4]) -> (StageParams, f64) {
    let [mut theta, mut phi_t, phi_b, mut delta] = *x;
    theta = theta.rem_euclid(PI);
    if theta > FRAC_PI_2 {
        theta = PI - theta;
        phi_t += PI;
        delta += PI;
    }
    (StageParams::wrapped(theta, phi_t, phi_b), wrap_phase(delta))
}

fn product_fidelity_of(u: &Mat2, t: &[TargetPhoton; 2]) -> f64 {
    let overlap = |p: &TargetPhoton, col: [num_complex::Complex64; 2]| {
        (p.alpha1.conj() * col[0] + p.alpha2.conj() * col[1]).norm_sqr()
    };
    overlap(&t[0], u.column(0)) * overlap(&t[1], u.column(1))
}

const STARTS: usize = 4;

/// Deterministic grid search over the active coordinates followed by
/// Hooke-Jeeves pattern search from the best few grid points.
fn maximize(f: impl Fn(&[f64; 4]) -> f64, active: [bool; 4], budget: usize) -> ([f64; 4], f64) {
    let upper = [PI, TAU, TAU, TAU];
    let dims = active.iter().filter(|a| **a).count();
    let per_axis = (((budget / 2) as f64).powf(1.0 / dims as f64).floor() as usize).max(2);
    let axis_points = |d: usize| if active[d] { per_axis } else { 1 };
    let spacing = |d: usize| upper[d] / per_axis as f64;

    let mut evals = 0usize;
    let mut top: Vec<([f64; 4], f64)> = Vec::new();
    let counts: Vec<usize> = (0..4).map(axis_points).collect();
    let total: usize = counts.iter().product();
    for idx in 0..total {
        let mut rest = idx;
        let mut x = [0.0; 4];
        for d in 0..4 {
            let i = rest % counts[d];
            rest /= counts[d];
            x[d] = i as f64 * spacing(d);
        }
        let v = f(&x);
        evals += 1;
        top.push((x, v));
        if top.len() > 4 * STARTS {
            top.sort_by(|a, b| b.1.total_cmp(&a.1));
            top.truncate(STARTS);
        }
    }
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    top.truncate(STARTS);

    let per_start = budget.saturating_sub(evals) / top.len().max(1);
    let mut best = top[0];
    for &(start, start_val) in &top {
        let used = std::cell::Cell::new(0usize);
        let mut f_counted = |y: &[f64; 4]| {
            used.set(used.get() + 1);
            f(y)
        };
        // Hooke-Jeeves: coordinate exploration around a base point, then a
        // pattern step along the last successful direction
        let (mut base, mut val) = (start, start_val);
        let mut step: [f64; 4] = std::array::from_fn(spacing);
        let explore = |from: [f64; 4], from_val: f64, step: &[f64; 4], f: &mut dyn FnMut(&[f64; 4]) -> f64| {
            let (mut x, mut v) = (from, from_val);
            for d in (0..4).filter(|d| active[*d]) {
                for sign in [1.0, -1.0] {
                    let mut y = x;
                    y[d] += sign * step[d];
                    let fy = f(&y);
                    if fy > v {
                        x = y;
                        v = fy;
                        break;
                    }
                }
            }
            (x, v)
        };
        loop {
            if step.iter().zip(&active).all(|(s, a)| !*a || *s <= 1e-13) {
                break;
            }
            let (x, v) = explore(base, val, &step, &mut f_counted);
            if v > val {
                let mut prev = base;
                base = x;
                val = v;
                loop {
                    let pattern = std::array::from_fn(|d| 2.0 * base[d] - prev[d]);
                    let pv = f_counted(&pattern);
                    let (x, v) = explore(pattern, pv, &step, &mut f_counted);
                    if v > val {
                        prev = base;
                        base = x;
                        val = v;
                    } else {
                        break;
                    }
                }
            } else {
                step.iter_mut().for_each(|s| *s *= 0.5);
            }
            if used.get() + 4 * dims + 1 > per_start {
                break;
            }
        }
        if val > best.1 {
            best = (base, val);
        }
    }
    best
}

/// Best product fidelity between a two-photon target and the photon pair a
/// single 2×2 unitary produces from one photon in each input port.
pub fn best_unitary_fidelity(t: &TargetSpec, budget: usize) -> Result<NoGoReport> {
    if budget < MIN_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "budget {budget} is below the minimum of {MIN_BUDGET}"
        )));
    }
    let photons = pair(t)?;
    let f = |x: &[f64; 4]| product_fidelity_of(&unitary(x), &photons);
    let (x, best_fidelity) = maximize(f, [true; 4], budget);
    let (_, stage_family_fidelity) = maximize(f, [true, true, true, false], budget);

    let target_overlap = pair_overlap(t)?;
    let bound_1d = overlap_bound_1d(target_overlap)?;
    let (best_params, input_phase) = canonical_point(&x);
    Ok(NoGoReport {
        target_overlap,
        best_fidelity,
        best_params,
        input_phase,
        bound_1d,
        gap: bound_1d - best_fidelity,
        stage_family_fidelity,
    })
}

/// Aggregate of [`best_unitary_fidelity`] over random targets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoGoSweep {
    pub trials: usize,
    pub seed: u64,
    pub budget: usize,
    /// Largest `best_fidelity − bound_1d` seen; should never exceed 1e-4.
    pub max_excess_over_bound: f64,
    pub mean_best_fidelity: f64,
    pub min_best_fidelity: f64,
    pub max_best_fidelity: f64,
    pub reports: Vec<NoGoReport>,
}

pub fn nogo_sweep(trials: usize, seed: u64, budget: usize) -> Result<NoGoSweep> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<TargetSpec> = (0..trials).map(|_| random_target(&mut rng, 2)).collect();
    let reports = targets
        .par_iter()
        .map(|t| best_unitary_fidelity(t, budget))
        .collect::<Result<Vec<_>>>()?;
    let fids = reports.iter().map(|r| r.best_fidelity);
    Ok(NoGoSweep {
        trials,
        seed,
        budget,
        max_excess_over_bound: reports.iter().map(|r| -r.gap).fold(f64::NEG_INFINITY, f64::max),
        mean_best_fidelity: fids.clone().sum::<f64>() / trials as f64,
        min_best_fidelity: fids.clone().fold(f64::INFINITY, f64::min),
        max_best_fidelity: fids.fold(f64::NEG_INFINITY, f64::max),
        reports,
    })
}

/// Which phases the random cascades carry between their beam splitters.
///
/// Phase-free splitters compose by adding angles, and a bare splitter is a
/// canonical stage only while its angle mod π lies in `[0, π/2]`. Zero-phase
/// cascades therefore draw each angle from `[0, π/(2k)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CascadePhases {
    Random,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub phases: CascadePhases,
    /// Fraction of cascades farther than 1e-6 from every canonical stage.
    pub fraction_noncanonical: f64,
    pub max_distance: f64,
    pub mean_distance: f64,
    /// Mean column-fit residual over both input ports.
    pub mean_fit_residual: f64,
    pub max_fit_residual: f64,
}

/// Samples `trials` cascades of `k` random stages and measures how far each
/// is from a single canonical stage.
pub fn closure_experiment(k: usize, trials: usize, seed: u64, phases: CascadePhases) -> Result<ClosureReport> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidArgument("k and trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cascades: Vec<Mat2> = (0..trials)
        .map(|_| {
            let stages: Vec<StageParams> = (0..k)
                .map(|_| {
                    let s = random_stage(&mut rng);
                    match phases {
                        CascadePhases::Random => s,
                        CascadePhases::Zero => StageParams::splitter(s.theta / k as f64),
                    }
                })
                .collect();
            compose_stages(&stages).expect("k >= 1")
        })
        .collect();

    let per_trial = cascades
        .par_iter()
        .map(|u| {
            let distance = canonical_distance(u)?;
            let r0 = fit_column(u, 0)?.residual;
            let r1 = fit_column(u, 1)?.residual;
            Ok((distance, r0, r1))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = trials as f64;
    let noncanonical = per_trial.iter().filter(|t| t.0 > NONCANONICAL_THRESHOLD).count();
    Ok(ClosureReport {
        k,
        trials,
        seed,
        phases,
        fraction_noncanonical: noncanonical as f64 / n,
        max_distance: per_trial.iter().map(|t| t.0).fold(0.0, f64::max),
        mean_distance: per_trial.iter().map(|t| t.0).sum::<f64>() / n,
        mean_fit_residual: per_trial.iter().map(|t| t.1 + t.2).sum::<f64>() / (2.0 * n),
        max_fit_residual: per_trial.iter().map(|t| t.1.max(t.2)).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stages::stage_matrix;
    use crate::state::PhotonLabel;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> TargetSpec {
        TargetSpec::new(vec![
            TargetPhoton::new(PhotonLabel::new(1).unwrap(), a.0, a.1),
            TargetPhoton::new(PhotonLabel::new(2).unwrap(), b.0, b.1),
        ])
        .unwrap()
    }

    #[test]
    fn overlap_examples() {
        let e0 = (c(1.0, 0.0), c(0.0, 0.0));
        let e1 = (c(0.0, 0.0), c(1.0, 0.0));
        let plus = (c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(pair_overlap(&two(e0, e1)).unwrap(), 0.0);
        assert!((pair_overlap(&two(plus, plus)).unwrap() - 1.0).abs() < 1e-15);
        assert!((pair_overlap(&two(e0, plus)).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn overlap_needs_two_photons() {
        let t = TargetSpec::new(vec![TargetPhoton::new(
            PhotonLabel::new(1).unwrap(),
            c(1.0, 0.0),
            c(0.0, 0.0),
        )])
        .unwrap();
        assert!(matches!(pair_overlap(&t), Err(Error::WrongPhotonCount { .. })));
    }

    #[test]
    fn bound_endpoints() {
        assert!((overlap_bound_1d(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((overlap_bound_1d(1.0).unwrap() - 0.25).abs() < 1e-12);
        let mid = overlap_bound_1d(FRAC_1_SQRT_2).unwrap();
        assert!(mid > 0.25 && mid < 1.0);
        assert!(matches!(overlap_bound_1d(1.5), Err(Error::OutOfRange(_))));
        assert!(matches!(overlap_bound_1d(-0.1), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let t = two((c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0)));
        assert!(matches!(best_unitary_fidelity(&t, 100), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn closure_rejects_empty() {
        assert!(closure_experiment(0, 5, 1, CascadePhases::Random).is_err());
        assert!(closure_experiment(2, 0, 1, CascadePhases::Random).is_err());
    }

    #[test]
    fn single_stage_cascades_are_canonical() {
        let r = closure_experiment(1, 20, 3, CascadePhases::Random).unwrap();
        assert_eq!(r.fraction_noncanonical, 0.0);
        assert!(r.max_distance <= 1e-8);
    }

    #[test]
    fn zero_phase_cascades_are_canonical() {
        for k in [2, 3, 5] {
            let r = closure_experiment(k, 10, 11, CascadePhases::Zero).unwrap();
            assert!(r.max_distance <= 1e-8, "k={k}: {}", r.max_distance);
        }
    }

    #[test]
    fn folded_point_keeps_the_unitary_up_to_phase() {
        for x in [
            [2.0, 0.3, 1.1, 0.7],
            [-0.4, 5.0, 2.0, 1.0],
            [4.0, 1.0, 0.2, 6.0],
            [1.2, 0.0, 0.0, 0.0],
        ] {
            let (p, delta) = canonical_point(&x);
            assert!((0.0..=FRAC_PI_2).contains(&p.theta));
            let folded = stage_matrix(&p) * Mat2::phases(0.0, delta);
            let u = unitary(&x);
            let g = (folded.adjoint() * u).trace();
            assert!((g.norm() - 2.0).abs() < 1e-12, "{x:?}");
            assert!(folded.scale(g / g.norm()).max_abs_diff(&u) < 1e-12);
        }
    }

    #[test]
    fn optimum_next_to_the_splitter_edge_is_found() {
        // optimum at θ just below π/2, where a clamped search used to stall
        let t = two(
            (
                c(0.02597656264995794, 0.0023556196612326713),
                c(0.9306887181570501, 0.364881047937669),
            ),
            (
                c(-0.6980723631566134, 0.7155519862636439),
                c(0.02270563471185905, -0.012836857225473734),
            ),
        );
        for budget in [MIN_BUDGET, 100_000] {
            let r = best_unitary_fidelity(&t, budget).unwrap();
            assert!(r.best_fidelity >= 1.0 - 1e-6, "{budget}: {r:?}");
            let u = stage_matrix(&r.best_params) * Mat2::phases(0.0, r.input_phase);
            assert!((product_fidelity_of(&u, &pair(&t).unwrap()) - r.best_fidelity).abs() < 1e-12);
        }
    }
}
