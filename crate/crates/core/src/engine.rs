//! Extension of an invertible-group isometry to a real-linear isometry.
//!
//! With `u₀ = lim_{a→0} T(a)` and `T₀ = T − u₀`, the real-linear map is
//!
//! ```text
//! T̃₀(0) = 0,   T̃₀(f) = T₀(f + 2‖f‖e) − T₀(2‖f‖e)
//! ```
//!
//! Both arguments on the right lie in `Ω = {a : ‖a − re‖ < r, r > 0}`, a
//! convex subset of the invertibles on which `T₀` is additive. The map is
//! evaluated on the `2d` real coordinate directions of the domain and stored
//! as a real matrix; [`verify_extension`] re-tests the resulting map against
//! the oracle at fresh random points.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{AlgebraError, AlgebraSpec, INVERTIBILITY_TOL};
use crate::linalg::{self, CMatrix, CVector, I};
use crate::oracle::IsometryOracle;
use crate::report::{Check, Diagnostics};
use crate::sampling;

pub const MIDPOINT_TOL: f64 = 1e-8;
pub const SEGMENT_GRID: usize = 101;
pub const U0_STEPS: [f64; 6] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7];
pub const U0_CAUCHY_TOL: f64 = 1e-8;
pub const U0_SEMISIMPLE_TOL: f64 = 1e-7;
pub const U0_RADICAL_TRIALS: usize = 200;
pub const EXTENSION_TOL: f64 = 1e-7;
const U0_RADICAL_SEED: u64 = 0x7530;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("segment leaves the domain at r = {r}")]
    SegmentLeavesDomain { r: f64 },
    #[error("lim T(εe) did not settle: last extrapolants differ by {last_step:.3e}")]
    NoConvergence { last_step: f64 },
    #[error("estimated u0 is not in the radical (max r(f·u0) = {0:.3e})")]
    ShiftNotRadical(f64),
    #[error("codomain is semisimple but ‖u0‖ = {0:.3e}")]
    ShiftNotZero(f64),
    #[error("extension argument f + 2‖f‖e is not invertible")]
    NonInvertibleArgument,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `‖T((f+g)/2) − (T(f)+T(g))/2‖′`, after checking that the segment from
/// `f` to `g` stays inside the oracle's domain on a 101-point grid.
pub fn check_midpoint(
    oracle: &IsometryOracle,
    f: &CMatrix,
    g: &CMatrix,
) -> Result<f64, EngineError> {
    for k in 0..SEGMENT_GRID {
        let r = k as f64 / (SEGMENT_GRID - 1) as f64;
        let p = f * Complex64::new(1.0 - r, 0.0) + g * Complex64::new(r, 0.0);
        if !oracle.in_domain(&p) {
            return Err(EngineError::SegmentLeavesDomain { r });
        }
    }
    let half = Complex64::new(0.5, 0.0);
    let mid = oracle.apply(&((f + g) * half));
    let avg = (oracle.apply(f) + oracle.apply(g)) * half;
    Ok(oracle.image_distance(&mid, &avg))
}

/// Largest `r(f·a)` over `trials` random invertible `f`.
pub fn quasinilpotence_defect(
    alg: &AlgebraSpec,
    a: &CMatrix,
    trials: usize,
    rng_seed: u64,
) -> Result<f64, AlgebraError> {
    let mut rng = sampling::rng_from_seed(rng_seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials.max(1) {
        let f = loop {
            let f = alg.random_element(&mut rng);
            if alg.is_invertible(&f) {
                break f;
            }
        };
        worst = worst.max(alg.spectral_radius(&alg.mul(&f, a)?)?);
    }
    Ok(worst)
}

/// `u₀ = lim_{ε→0} T(εe)`.
///
/// Samples the geometric schedule [`U0_STEPS`]; consecutive samples are
/// combined by linear extrapolation to `ε = 0`, and the estimate is
/// accepted once two successive extrapolants agree to [`U0_CAUCHY_TOL`].
/// The result is snapped onto the codomain span, checked for radical
/// membership by sampling, and required to vanish for semisimple codomains.
pub fn estimate_u0(oracle: &IsometryOracle) -> Result<CMatrix, EngineError> {
    let dom = oracle.domain();
    let cod = oracle.codomain();
    let samples: Vec<(f64, CMatrix)> = U0_STEPS
        .iter()
        .map(|&eps| {
            (
                eps,
                oracle.apply(&dom.scaled_unit(Complex64::new(eps, 0.0))),
            )
        })
        .collect();
    let extrapolants: Vec<CMatrix> = samples
        .windows(2)
        .map(|w| {
            let (e0, v0) = &w[0];
            let (e1, v1) = &w[1];
            // zero of the line through (e0, v0), (e1, v1)
            (v1 * Complex64::new(*e0, 0.0) - v0 * Complex64::new(*e1, 0.0))
                * Complex64::new(1.0 / (e0 - e1), 0.0)
        })
        .collect();

    let mut last_step = f64::INFINITY;
    let mut estimate = None;
    for w in extrapolants.windows(2) {
        last_step = cod.norm(&(&w[1] - &w[0]));
        if last_step < U0_CAUCHY_TOL {
            estimate = Some(w[1].clone());
            break;
        }
    }
    let u0 = cod.snap(&estimate.ok_or(EngineError::NoConvergence { last_step })?);

    let defect = quasinilpotence_defect(cod, &u0, U0_RADICAL_TRIALS, U0_RADICAL_SEED)?;
    if defect >= crate::algebra::QUASINILPOTENT_TOL {
        return Err(EngineError::ShiftNotRadical(defect));
    }
    if cod.is_semisimple()? {
        let size = cod.norm(&u0);
        if size >= U0_SEMISIMPLE_TOL {
            return Err(EngineError::ShiftNotZero(size));
        }
    }
    Ok(u0)
}

/// Interleaved `(Re c₁, Im c₁, Re c₂, …)` coordinates of `m` in `alg`'s basis.
pub fn real_coords(alg: &AlgebraSpec, m: &CMatrix) -> DVector<f64> {
    let (c, _) = alg.project(m);
    DVector::from_fn(2 * c.len(), |k, _| {
        if k % 2 == 0 {
            c[k / 2].re
        } else {
            c[k / 2].im
        }
    })
}

pub fn from_real_coords(alg: &AlgebraSpec, v: &DVector<f64>) -> CMatrix {
    let c = CVector::from_fn(v.len() / 2, |k, _| Complex64::new(v[2 * k], v[2 * k + 1]));
    alg.from_coords(&c)
}

/// The `j`-th real coordinate direction: `b_{j/2}` or `i·b_{j/2}`.
pub fn real_direction(alg: &AlgebraSpec, j: usize) -> CMatrix {
    let b = &alg.basis()[j / 2];
    if j.is_multiple_of(2) {
        b.clone()
    } else {
        b * I
    }
}

/// Real-linear part `T̃₀` plus the radical shift `u₀`.
#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub u0: CMatrix,
    /// `2d′ x 2d` real matrix in interleaved real coordinates.
    pub linear_map: DMatrix<f64>,
    pub diagnostics: Diagnostics,
    domain: std::sync::Arc<AlgebraSpec>,
    codomain: std::sync::Arc<AlgebraSpec>,
}

impl ExtensionResult {
    /// `T̃₀(f)`.
    pub fn apply(&self, f: &CMatrix) -> CMatrix {
        from_real_coords(
            &self.codomain,
            &(&self.linear_map * real_coords(&self.domain, f)),
        )
    }

    /// Least-squares preimage of `b` under `T̃₀` and the residual in the
    /// codomain norm.
    pub fn preimage(&self, b: &CMatrix) -> (CMatrix, f64) {
        let target = real_coords(&self.codomain, b);
        let (x, _) = linalg::least_squares_real(&self.linear_map, &target);
        let image = from_real_coords(&self.codomain, &(&self.linear_map * &x));
        (
            from_real_coords(&self.domain, &x),
            self.codomain.norm(&(image - b)),
        )
    }
}

/// `T̃₀` as a real matrix, for a given shift `u₀`.
pub fn linear_part(oracle: &IsometryOracle, u0: &CMatrix) -> Result<DMatrix<f64>, EngineError> {
    let dom = oracle.domain();
    let cod = oracle.codomain();
    let t0 = |a: &CMatrix| oracle.apply(a) - u0;
    let mut l = DMatrix::zeros(2 * cod.dim(), 2 * dom.dim());
    for j in 0..2 * dom.dim() {
        let f = real_direction(dom, j);
        let shift = dom.scaled_unit(Complex64::new(2.0 * dom.norm(&f), 0.0));
        let shifted = &f + &shift;
        if dom.min_abs_eigenvalue(&shifted)? <= INVERTIBILITY_TOL {
            return Err(EngineError::NonInvertibleArgument);
        }
        let image = t0(&shifted) - t0(&shift);
        l.set_column(j, &real_coords(cod, &image));
    }
    Ok(l)
}

/// Estimates `u₀`, builds `T̃₀` and attaches the diagnostics of
/// [`verify_extension`] run with `trials` samples.
pub fn build_extension_with(
    oracle: &IsometryOracle,
    trials: usize,
    rng_seed: u64,
) -> Result<ExtensionResult, EngineError> {
    let u0 = estimate_u0(oracle)?;
    let linear_map = linear_part(oracle, &u0)?;
    let mut ext = ExtensionResult {
        u0,
        linear_map,
        diagnostics: Diagnostics::default(),
        domain: oracle.domain().clone(),
        codomain: oracle.codomain().clone(),
    };
    ext.diagnostics = verify_extension(oracle, &ext, trials, rng_seed)?;
    Ok(ext)
}

pub fn build_extension(oracle: &IsometryOracle) -> Result<ExtensionResult, EngineError> {
    build_extension_with(oracle, 100, 0)
}

/// Re-tests the properties of `T̃₀` at random points.
///
/// Checks, in order: oracle-side additivity of `T₀` on pairs from Ω,
/// oracle-side real homogeneity, oddness of the linear map, norm
/// preservation, agreement `T̃₀(a) + u₀ = T(a)` on random invertibles,
/// solvability of `T̃₀(x) = b` for random `b`, and radical membership of `u₀`.
pub fn verify_extension(
    oracle: &IsometryOracle,
    ext: &ExtensionResult,
    trials: usize,
    rng_seed: u64,
) -> Result<Diagnostics, EngineError> {
    let dom = oracle.domain();
    let cod = oracle.codomain();
    let mut rng = sampling::rng_from_seed(rng_seed);
    let t0 = |a: &CMatrix| oracle.apply(a) - &ext.u0;
    let mut additivity: f64 = 0.0;
    let mut homogeneity: f64 = 0.0;
    let mut negation: f64 = 0.0;
    let mut isometry: f64 = 0.0;
    let mut extension: f64 = 0.0;
    let mut surjectivity: f64 = 0.0;

    for _ in 0..trials {
        let f = dom.omega_shift(&dom.random_element(&mut rng));
        let g = dom.omega_shift(&dom.random_element(&mut rng));
        let lhs = t0(&(&f + &g));
        additivity = additivity.max(cod.norm(&(lhs - t0(&f) - t0(&g))));
        let linear_side = ext.apply(&(&f + &g)) - ext.apply(&f) - ext.apply(&g);
        additivity = additivity.max(cod.norm(&linear_side));

        let a = dom.random_invertible(&mut rng);
        let r: f64 = loop {
            let r = 6.0 * rand::Rng::random::<f64>(&mut rng) - 3.0;
            if r.abs() > 0.1 {
                break r;
            }
        };
        let scaled = t0(&(&a * Complex64::new(r, 0.0)));
        homogeneity = homogeneity.max(cod.norm(&(scaled - t0(&a) * Complex64::new(r, 0.0))));

        let x = dom.random_element(&mut rng);
        negation = negation.max(cod.norm(&(ext.apply(&-&x) + ext.apply(&x))));
        isometry = isometry.max((cod.norm(&ext.apply(&x)) - dom.norm(&x)).abs());

        extension = extension.max(cod.norm(&(ext.apply(&a) + &ext.u0 - oracle.apply(&a))));

        let b = cod.random_element(&mut rng);
        surjectivity = surjectivity.max(ext.preimage(&b).1);
    }

    let defect =
        quasinilpotence_defect(cod, &ext.u0, U0_RADICAL_TRIALS, rng_seed ^ U0_RADICAL_SEED)?;

    let mut diag = Diagnostics::default();
    diag.push(Check::below("additivity", additivity, EXTENSION_TOL));
    diag.push(Check::below("homogeneity", homogeneity, EXTENSION_TOL));
    diag.push(Check::below("negation", negation, EXTENSION_TOL));
    diag.push(Check::below("isometry", isometry, EXTENSION_TOL));
    diag.push(Check::below("extension", extension, EXTENSION_TOL));
    diag.push(Check::below("surjectivity", surjectivity, EXTENSION_TOL));
    diag.push(Check::below(
        "u0 radical membership",
        defect,
        crate::algebra::QUASINILPOTENT_TOL,
    ));
    Ok(diag)
}
