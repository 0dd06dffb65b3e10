//! Numerical-range functionals of an algebra element.
//!
//! For a unital normed algebra the supremum of `Re W(a)` is the one-sided
//! derivative of `t ↦ ‖e + t a‖` at zero. That quotient is convex in `t`, so
//! the difference quotients decrease monotonically towards the limit as
//! `t → 0⁺`; we sample four step sizes and Richardson-extrapolate the last two.
//!
//! For norms with `‖e‖ ≠ 1` (Frobenius) the quotient uses `‖e‖` in place of
//! one; the induced norms all have `‖e‖ = 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::algebra::AlgebraSpec;
use crate::linalg::CMatrix;

pub const STEP_GRID: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];
pub const MONOTONE_SLACK: f64 = 1e-9;
pub const ANGLE_GRID: usize = 64;
pub const RADIUS_REFINE_TOL: f64 = 1e-4;
const MAX_ANGLES: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct SupReEstimate {
    pub value: f64,
    pub error_estimate: f64,
    /// `(t, (‖e + t a‖ − ‖e‖)/t)` over [`STEP_GRID`].
    pub quotients: Vec<(f64, f64)>,
    /// Quotients decreased (within [`MONOTONE_SLACK`]) as `t` shrank.
    pub monotone: bool,
}

pub fn mu_sup_re_estimate(alg: &AlgebraSpec, a: &CMatrix) -> SupReEstimate {
    let e = alg.unit();
    let e_norm = alg.norm(e);
    let quotients: Vec<(f64, f64)> = STEP_GRID
        .iter()
        .map(|&t| {
            (
                t,
                (alg.norm(&(e + a * Complex64::new(t, 0.0))) - e_norm) / t,
            )
        })
        .collect();
    let monotone = quotients
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 + MONOTONE_SLACK);
    let coarse = quotients[quotients.len() - 2];
    let fine = quotients[quotients.len() - 1];
    let ratio = coarse.0 / fine.0;
    let value = (ratio * fine.1 - coarse.1) / (ratio - 1.0);
    SupReEstimate {
        value,
        error_estimate: (value - fine.1).abs(),
        quotients,
        monotone,
    }
}

/// `sup Re W(a)`.
pub fn mu_sup_re(alg: &AlgebraSpec, a: &CMatrix) -> f64 {
    mu_sup_re_estimate(alg, a).value
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusEstimate {
    pub value: f64,
    /// Change of the maximum at the last grid doubling.
    pub last_change: f64,
    pub angles: usize,
    /// Every sampled quotient sequence was monotone.
    pub monotone: bool,
}

pub fn numerical_radius_estimate(alg: &AlgebraSpec, a: &CMatrix) -> RadiusEstimate {
    let mut monotone = true;
    let mut eval = |theta: f64| {
        let est = mu_sup_re_estimate(alg, &(a * Complex64::from_polar(1.0, theta)));
        monotone &= est.monotone;
        est.value
    };
    let mut angles = ANGLE_GRID;
    let mut best = (0..angles)
        .map(|k| eval(TAU * k as f64 / angles as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut last_change = f64::INFINITY;
    while angles < MAX_ANGLES {
        // only the midpoints are new at each doubling
        let refined = (0..angles)
            .map(|k| eval(TAU * (k as f64 + 0.5) / angles as f64))
            .fold(best, f64::max);
        angles *= 2;
        last_change = refined - best;
        best = refined;
        if last_change < RADIUS_REFINE_TOL {
            break;
        }
    }
    RadiusEstimate {
        value: best.max(0.0),
        last_change,
        angles,
        monotone,
    }
}

/// `sup |W(a)|`, as the largest `sup Re W(e^{iθ}a)` over an angular grid.
pub fn numerical_radius(alg: &AlgebraSpec, a: &CMatrix) -> f64 {
    numerical_radius_estimate(alg, a).value
}
