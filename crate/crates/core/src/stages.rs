//! Two-mode optical stages.
//!
//! A beam splitter with angle θ has transmission `t = cos θ` and reflection
//! `r = i·sin θ`. A canonical stage is a beam splitter followed by a phase
//! shifter on each output arm:
//!
//! ```text
//! ⎡ e^{iφt}·cos θ    i·e^{iφt}·sin θ ⎤
//! ⎣ i·e^{iφb}·sin θ  e^{iφb}·cos θ   ⎦
//! ```
//!
//! Rows are output modes and columns input modes. Any single column of any
//! 2×2 unitary is a column of some canonical stage, but a product of stages
//! with phases between them is in general *not* a canonical stage, even up
//! to a global phase. [`fit_column`] and [`canonical_distance`] measure those
//! two facts.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

/// 2×2 complex matrix, `m[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2([[a, z], [z, b]])
    }

    /// diag(e^{iφ0}, e^{iφ1})
    pub fn phases(phi0: f64, phi1: f64) -> Self {
        Mat2::diag(Complex64::from_polar(1.0, phi0), Complex64::from_polar(1.0, phi1))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn column(&self, col: usize) -> [Complex64; 2] {
        [self.0[0][col], self.0[1][col]]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn frobenius_distance(&self, other: &Mat2) -> f64 {
        let mut sum = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                sum += (self.0[r][c] - other.0[r][c]).norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// max |(U†U − I)_{ij}|
    pub fn unitarity_deviation(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2::identity())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

/// Maps any angle into `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Parameters of a canonical stage. The global phase is fixed to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageParams {
    /// Splitting angle in `[0, π/2]`.
    pub theta: f64,
    /// Phase on the top (first) output arm, `[0, 2π)`.
    pub phi_top: f64,
    /// Phase on the bottom (second) output arm, `[0, 2π)`.
    pub phi_bottom: f64,
}

impl StageParams {
    pub fn new(theta: f64, phi_top: f64, phi_bottom: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::OutOfRange(theta));
        }
        for phi in [phi_top, phi_bottom] {
            if !(0.0..TAU).contains(&phi) {
                return Err(Error::OutOfRange(phi));
            }
        }
        Ok(StageParams {
            theta,
            phi_top,
            phi_bottom,
        })
    }

    /// Builds parameters with the phases wrapped into `[0, 2π)` and θ
    /// clamped into `[0, π/2]`.
    pub fn wrapped(theta: f64, phi_top: f64, phi_bottom: f64) -> Self {
        StageParams {
            theta: theta.clamp(0.0, FRAC_PI_2),
            phi_top: wrap_phase(phi_top),
            phi_bottom: wrap_phase(phi_bottom),
        }
    }

    /// Bare beam splitter, no phases.
    pub fn splitter(theta: f64) -> Self {
        StageParams::wrapped(theta, 0.0, 0.0)
    }
}

/// `[[cos θ, i·sin θ], [i·sin θ, cos θ]]`
pub fn beam_splitter_matrix(theta: f64) -> Mat2 {
    let t = Complex64::new(theta.cos(), 0.0);
    let r = Complex64::new(0.0, theta.sin());
    Mat2([[t, r], [r, t]])
}

pub fn stage_matrix(p: &StageParams) -> Mat2 {
    Mat2::phases(p.phi_top, p.phi_bottom) * beam_splitter_matrix(p.theta)
}

/// Product of the stages in application order: the first stage listed acts
/// first, so it is the rightmost factor.
pub fn compose_stages(stages: &[StageParams]) -> Result<Mat2> {
    let (first, rest) = stages.split_first().ok_or(Error::EmptyList)?;
    Ok(rest.iter().fold(stage_matrix(first), |acc, p| stage_matrix(p) * acc))
}

fn check_unitary(u: &Mat2) -> Result<()> {
    let deviation = u.unitarity_deviation();
    if deviation.is_nan() || deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Result of [`fit_column`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnFit {
    pub params: StageParams,
    /// γ in `stage·e_port ≈ e^{iγ}·U·e_port`.
    pub global_phase: f64,
    pub residual: f64,
}

/// Finds the canonical stage whose `input_port` column equals that of `u`.
///
/// The phase shifters absorb every phase, so the returned global phase is
/// always zero.
pub fn fit_column(u: &Mat2, input_port: usize) -> Result<ColumnFit> {
    if input_port > 1 {
        return Err(Error::InvalidArgument(format!("input port {input_port} is not 0 or 1")));
    }
    check_unitary(u)?;
    let v = u.column(input_port);
    let (same, other) = if input_port == 0 { (v[0], v[1]) } else { (v[1], v[0]) };
    // |same| = cos θ travels straight through, |other| = sin θ is reflected
    let theta = other.norm().atan2(same.norm());
    let phi_same = phase_or_zero(same);
    let phi_other = if other.norm() < 1e-15 {
        0.0
    } else {
        other.arg() - FRAC_PI_2
    };
    let params = if input_port == 0 {
        StageParams::wrapped(theta, phi_same, phi_other)
    } else {
        StageParams::wrapped(theta, phi_other, phi_same)
    };
    let got = stage_matrix(&params).column(input_port);
    let residual = ((got[0] - v[0]).norm_sqr() + (got[1] - v[1]).norm_sqr()).sqrt();
    Ok(ColumnFit {
        params,
        global_phase: 0.0,
        residual,
    })
}

fn phase_or_zero(z: Complex64) -> f64 {
    if z.norm() < 1e-15 {
        0.0
    } else {
        z.arg()
    }
}

/// Result of [`canonical_fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFit {
    pub params: StageParams,
    pub global_phase: f64,
    pub distance: f64,
}

const GRID: usize = 32;
const REFINE_STEPS: usize = 100;

/// `min_γ ‖S − e^{iγ}·U‖_F` for fixed S. The optimal γ aligns the phase of
/// tr(U†S).
fn aligned_distance(s: &Mat2, u: &Mat2) -> (f64, f64) {
    let overlap = (u.adjoint() * *s).trace();
    let gamma = phase_or_zero(overlap);
    (s.frobenius_distance(&u.scale(Complex64::from_polar(1.0, gamma))), gamma)
}

/// Closest canonical stage to `u` up to a global phase, by a 32³ grid over
/// (θ, φt, φb) followed by 100 steps of compass-search refinement.
pub fn canonical_fit(u: &Mat2) -> Result<CanonicalFit> {
    check_unitary(u)?;
    let eval = |x: [f64; 3]| aligned_distance(&stage_matrix(&StageParams::wrapped(x[0], x[1], x[2])), u).0;

    let theta_step = FRAC_PI_2 / (GRID - 1) as f64;
    let phase_step = TAU / GRID as f64;
    let mut best = [0.0; 3];
    let mut best_val = f64::INFINITY;
    for i in 0..GRID {
        for j in 0..GRID {
            for k in 0..GRID {
                let x = [i as f64 * theta_step, j as f64 * phase_step, k as f64 * phase_step];
                let val = eval(x);
                if val < best_val {
                    best_val = val;
                    best = x;
                }
            }
        }
    }

    let mut steps = [theta_step, phase_step, phase_step];
    for _ in 0..REFINE_STEPS {
        let mut improved = None;
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut x = best;
                x[axis] += sign * steps[axis];
                if axis == 0 {
                    x[0] = x[0].clamp(0.0, FRAC_PI_2);
                }
                let val = eval(x);
                if val < improved.map_or(best_val, |(_, v)| v) {
                    improved = Some((x, val));
                }
            }
        }
        match improved {
            Some((x, val)) => {
                best = x;
                best_val = val;
            }
            None => steps.iter_mut().for_each(|s| *s *= 0.5),
        }
    }

    let params = StageParams::wrapped(best[0], best[1], best[2]);
    let (distance, gamma) = aligned_distance(&stage_matrix(&params), u);
    Ok(CanonicalFit {
        params,
        global_phase: wrap_phase(gamma),
        distance,
    })
}

/// Frobenius distance from `u` to the nearest canonical stage, up to a
/// global phase.
pub fn canonical_distance(u: &Mat2) -> Result<f64> {
    canonical_fit(u).map(|f| f.distance)
}
