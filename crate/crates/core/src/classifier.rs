//! Canonical-form recovery for isometries of `GL_n`.
//!
//! A surjective isometry `S` of the invertible n x n matrices has the form
//! `S(M) = S(E)·U·φ(M)·U⁻¹` with φ one of identity, transpose, entrywise
//! conjugation or conjugate transpose. [`classify`] recovers φ and `U`:
//!
//! 1. `Ψ = S(E)⁻¹·S` is extended to a real-linear map.
//! 2. Commutation of that map with multiplication by `i` decides between
//!    complex-linear and conjugate-linear; the latter is undone by
//!    pre-composing with entrywise conjugation.
//! 3. Multiplicative versus antimultiplicative decides the transpose flag;
//!    the latter is undone by pre-composing with transposition.
//! 4. What remains is an inner automorphism `M ↦ UMU⁻¹`, so `U` spans the
//!    one-dimensional solution space of `Ψ″(B)·U = U·B` over all matrix
//!    units `B`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, MultRule};
use crate::engine::{self, from_real_coords, real_coords, EngineError};
use crate::linalg::{self, CMatrix};
use crate::oracle::{self, FormTag, IsometryOracle, AUDIT_PAIRS};
use crate::sampling;

pub const LINEARITY_TOL: f64 = 1e-7;
pub const FORM_TOL: f64 = 1e-6;
pub const MULTIPLICATIVITY_TOL: f64 = 1e-6;
pub const NULL_SPACE_TOL: f64 = 1e-8;
pub const MULTIPLICATIVITY_PAIRS: usize = 20;
pub const RESIDUAL_SAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("classification failed at {stage}: {reason}")]
    Failed { stage: &'static str, reason: String },
}

impl ClassifyError {
    fn at(stage: &'static str, reason: impl Into<String>) -> Self {
        ClassifyError::Failed {
            stage,
            reason: reason.into(),
        }
    }

    pub fn stage(&self) -> &'static str {
        match self {
            ClassifyError::Failed { stage, .. } => stage,
        }
    }
}

impl From<EngineError> for ClassifyError {
    fn from(e: EngineError) -> Self {
        ClassifyError::at("extension", e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub tag: FormTag,
    /// Frobenius norm one, largest-modulus entry real positive.
    pub u: CMatrix,
    pub left_factor: CMatrix,
    pub residual: f64,
}

impl ClassificationResult {
    pub fn reconstruct(&self, m: &CMatrix) -> CMatrix {
        let u_inv = self
            .u
            .clone()
            .try_inverse()
            .expect("classified U is invertible");
        &self.left_factor * &self.u * self.tag.twist(m) * u_inv
    }
}

/// Scales `u` to Frobenius norm one and rotates the first entry of
/// (numerically) largest modulus, in row-major order, onto the positive
/// real axis.
pub fn normalize_conjugator(u: &CMatrix) -> CMatrix {
    let scaled = u / Complex64::new(linalg::frobenius(u), 0.0);
    let peak = scaled.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (rows, cols) = scaled.shape();
    let pivot = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .find(|&ij| scaled[ij].norm() >= peak * (1.0 - 1e-9))
        .expect("nonzero matrix has a peak entry");
    let z = scaled[pivot];
    scaled * (z.conj() / z.norm())
}

/// `min_{|λ|=1} ‖a − λb‖_F`.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let inner: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let lambda = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    linalg::frobenius(&(a - b * lambda))
}

fn is_full_matrix_algebra(alg: &AlgebraSpec) -> bool {
    let n = alg.ambient_dim();
    alg.dim() == n * n && alg.mult_rule() == MultRule::Matrix && *alg.unit() == linalg::identity(n)
}

/// Real matrix of multiplication by `i` in interleaved coordinates.
fn complex_structure(dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * dim, 2 * dim);
    for k in 0..dim {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

pub fn classify(
    oracle: &IsometryOracle,
    rng_seed: u64,
) -> Result<ClassificationResult, ClassifyError> {
    let dom = oracle.domain();
    let cod = oracle.codomain();
    let n = dom.ambient_dim();
    if !is_full_matrix_algebra(dom) || !is_full_matrix_algebra(cod) || cod.ambient_dim() != n {
        return Err(ClassifyError::at(
            "precondition",
            "domain and codomain must both be the full M_n",
        ));
    }
    let audit = oracle::audit(oracle, AUDIT_PAIRS, rng_seed);
    if !audit.passed {
        return Err(ClassifyError::at(
            "isometry audit",
            format!(
                "max deviation {:.3e}, {} singular images",
                audit.max_deviation, audit.non_invertible_images
            ),
        ));
    }

    // (a) normalize away the left factor
    let left_factor = oracle.apply(dom.unit());
    let left_inv = cod
        .invert(&left_factor)
        .map_err(|e| ClassifyError::at("left factor", e.to_string()))?;
    let inner = oracle.clone();
    let left_inv_c = left_inv.clone();
    let psi = IsometryOracle::new("normalized", dom.clone(), cod.clone(), move |m| {
        &left_inv_c * inner.apply(m)
    });

    // (b) real-linear extension
    let u0 = engine::estimate_u0(&psi)?;
    let l = engine::linear_part(&psi, &u0)?;

    // (c) complex-linear or conjugate-linear
    let j_dom = complex_structure(dom.dim());
    let j_cod = complex_structure(cod.dim());
    let scale = l.amax().max(1.0);
    let commutator = (&l * &j_dom - &j_cod * &l).amax() / scale;
    let anticommutator = (&l * &j_dom + &j_cod * &l).amax() / scale;
    let conjugate = if commutator < LINEARITY_TOL {
        false
    } else if anticommutator < LINEARITY_TOL {
        true
    } else {
        return Err(ClassifyError::at(
            "linearity",
            format!(
                "neither complex- nor conjugate-linear ({commutator:.3e}, {anticommutator:.3e})"
            ),
        ));
    };
    let linear = |m: &CMatrix| from_real_coords(cod, &(&l * real_coords(dom, m)));
    let psi_prime = |m: &CMatrix| {
        if conjugate {
            linear(&linalg::conj(m))
        } else {
            linear(m)
        }
    };

    // (d) multiplicative or antimultiplicative
    let mut rng = sampling::rng_from_seed(rng_seed.wrapping_add(1));
    let mut mult_ok = true;
    let mut anti_ok = true;
    for _ in 0..MULTIPLICATIVITY_PAIRS {
        let m = dom.random_invertible(&mut rng);
        let k = dom.random_invertible(&mut rng);
        let image = psi_prime(&(&m * &k));
        let (pm, pk) = (psi_prime(&m), psi_prime(&k));
        mult_ok &= cod.norm(&(&image - &pm * &pk)) < MULTIPLICATIVITY_TOL;
        anti_ok &= cod.norm(&(&image - &pk * &pm)) < MULTIPLICATIVITY_TOL;
    }
    let transpose = match (mult_ok, anti_ok) {
        (true, _) => false,
        (false, true) => true,
        (false, false) => {
            return Err(ClassifyError::at(
                "multiplicativity",
                "neither multiplicative nor antimultiplicative",
            ))
        }
    };
    let automorphism = |m: &CMatrix| {
        if transpose {
            psi_prime(&m.transpose())
        } else {
            psi_prime(m)
        }
    };

    // (e) Ψ″(B)·U − U·B = 0 over the matrix units, via vec(AXB) = (Bᵗ ⊗ A) vec X
    let eye = linalg::identity(n);
    let mut system = CMatrix::zeros(n.pow(4), n * n);
    for (k, b) in dom.basis().iter().enumerate() {
        let block = linalg::kron(&eye, &automorphism(b)) - linalg::kron(&b.transpose(), &eye);
        system
            .view_mut((k * n * n, 0), (n * n, n * n))
            .copy_from(&block);
    }
    let null = linalg::null_space(&system, NULL_SPACE_TOL);
    if null.ncols() != 1 {
        return Err(ClassifyError::at(
            "conjugator",
            format!("solution space has dimension {}, expected 1", null.ncols()),
        ));
    }
    let u = normalize_conjugator(&linalg::unvec(&null.column(0).into_owned(), n, n));
    let smin = linalg::singular_values(&u).last().copied().unwrap_or(0.0);
    if smin <= 1e-8 {
        return Err(ClassifyError::at(
            "conjugator",
            format!("recovered U is singular ({smin:.3e})"),
        ));
    }

    // (f) residual on fresh samples
    let mut result = ClassificationResult {
        tag: FormTag::from_flags(conjugate, transpose),
        u,
        left_factor,
        residual: 0.0,
    };
    let mut rng = sampling::rng_from_seed(rng_seed.wrapping_add(2));
    for _ in 0..RESIDUAL_SAMPLES {
        let m = dom.random_invertible(&mut rng);
        let r = cod.norm(&(oracle.apply(&m) - result.reconstruct(&m)));
        result.residual = result.residual.max(r);
    }
    if result.residual >= FORM_TOL {
        return Err(ClassifyError::at(
            "residual",
            format!("reconstruction residual {:.3e}", result.residual),
        ));
    }
    Ok(result)
}

/// A pair on which `T` fails one of the two product laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductWitness {
    #[serde(with = "crate::json::matrix")]
    pub m: CMatrix,
    #[serde(with = "crate::json::matrix")]
    pub n: CMatrix,
    /// `T(M·N)` minus `T(M)·T(N)` (multiplicative side) or `T(N)·T(M)`.
    #[serde(with = "crate::json::matrix")]
    pub defect: CMatrix,
    pub defect_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProductRefutation {
    /// Refutes `T(MN) = T(M)T(N)`.
    pub multiplicative: Option<ProductWitness>,
    /// Refutes `T(MN) = T(N)T(M)`.
    pub antimultiplicative: Option<ProductWitness>,
}

impl ProductRefutation {
    /// Both laws refuted.
    pub fn refutes_both(&self) -> bool {
        self.multiplicative.is_some() && self.antimultiplicative.is_some()
    }
}

/// Searches for pairs refuting multiplicativity and antimultiplicativity.
///
/// Structured pairs `(e + b_j, e + b_k)` over the domain basis are tried
/// first, then `trials` random invertible pairs. Products are taken in the
/// respective algebras and defects measured in the codomain norm.
pub fn search_product_defects(
    oracle: &IsometryOracle,
    trials: usize,
    rng_seed: u64,
) -> ProductRefutation {
    let dom = oracle.domain();
    let cod = oracle.codomain();
    let e = dom.unit();
    let mut candidates: Vec<(CMatrix, CMatrix)> = Vec::new();
    for bj in dom.basis() {
        for bk in dom.basis() {
            candidates.push((e + bj, e + bk));
        }
    }
    let mut rng = sampling::rng_from_seed(rng_seed);
    let randoms = (0..trials).map(move |_| {
        let m = dom.random_invertible(&mut rng);
        let k = dom.random_invertible(&mut rng);
        (m, k)
    });

    let mut out = ProductRefutation::default();
    for (m, k) in candidates.into_iter().chain(randoms) {
        if out.refutes_both() {
            break;
        }
        if !oracle.in_domain(&m) || !oracle.in_domain(&k) {
            continue;
        }
        let Ok(product) = dom.mul(&m, &k) else {
            continue;
        };
        let image = oracle.apply(&product);
        let (tm, tk) = (oracle.apply(&m), oracle.apply(&k));
        if out.multiplicative.is_none() {
            if let Ok(p) = cod.mul(&tm, &tk) {
                let defect = &image - p;
                let defect_norm = cod.norm(&defect);
                if defect_norm > MULTIPLICATIVITY_TOL {
                    out.multiplicative = Some(ProductWitness {
                        m: m.clone(),
                        n: k.clone(),
                        defect,
                        defect_norm,
                    });
                }
            }
        }
        if out.antimultiplicative.is_none() {
            if let Ok(p) = cod.mul(&tk, &tm) {
                let defect = &image - p;
                let defect_norm = cod.norm(&defect);
                if defect_norm > MULTIPLICATIVITY_TOL {
                    out.antimultiplicative = Some(ProductWitness {
                        m,
                        n: k,
                        defect,
                        defect_norm,
                    });
                }
            }
        }
    }
    out
}

/// Witnesses that `T` is neither multiplicative nor antimultiplicative,
/// or `None` when either law survives the search.
pub fn refute_multiplicativity(
    oracle: &IsometryOracle,
    trials: usize,
    rng_seed: u64,
) -> Option<ProductRefutation> {
    let found = search_product_defects(oracle, trials, rng_seed);
    found.refutes_both().then_some(found)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::NormKind;
    use crate::linalg::matrix_unit;

    #[test]
    fn identity_classifies_as_similarity() {
        for n in 1..=3 {
            let alg = Arc::new(AlgebraSpec::full_matrix(n, NormKind::Spectral));
            let r = classify(&IsometryOracle::identity(alg), 1).unwrap();
            assert_eq!(r.tag, FormTag::Similarity);
            let want = linalg::identity(n) / Complex64::new((n as f64).sqrt(), 0.0);
            assert!((&r.u - want).norm() < 1e-10);
            assert_eq!(r.left_factor, linalg::identity(n));
            assert!(r.residual < 1e-12);
        }
    }

    #[test]
    fn plain_transpose_is_transpose_similarity() {
        let alg = Arc::new(AlgebraSpec::full_matrix(3, NormKind::Spectral));
        let t = IsometryOracle::new("transpose", alg.clone(), alg, |m| m.transpose());
        let r = classify(&t, 2).unwrap();
        assert_eq!(r.tag, FormTag::TransposeSimilarity);
        assert!(
            phase_distance(
                &r.u,
                &(linalg::identity(3) / Complex64::new(3f64.sqrt(), 0.0))
            ) < 1e-8
        );
    }

    #[test]
    fn n1_collapses_transpose_but_not_conjugation() {
        let mut rng = sampling::rng_from_seed(8);
        for (tag, want) in [
            (FormTag::Similarity, FormTag::Similarity),
            (FormTag::TransposeSimilarity, FormTag::Similarity),
            (FormTag::ConjugateSimilarity, FormTag::ConjugateSimilarity),
            (
                FormTag::ConjugateTransposeSimilarity,
                FormTag::ConjugateSimilarity,
            ),
        ] {
            let (oracle, _) = oracle::random_gln_oracle(tag, 1, NormKind::Spectral, &mut rng);
            assert_eq!(classify(&oracle, 3).unwrap().tag, want);
        }
    }

    #[test]
    fn non_isometric_maps_are_rejected() {
        let alg = Arc::new(AlgebraSpec::full_matrix(2, NormKind::Spectral));
        let double = IsometryOracle::new("double", alg.clone(), alg.clone(), |m| {
            m * Complex64::new(2.0, 0.0)
        });
        let err = classify(&double, 0).unwrap_err();
        assert_eq!(err.stage(), "isometry audit");
    }

    #[test]
    fn normalization_is_phase_invariant() {
        let u = linalg::from_rows(&[&[(0.0, 2.0), (1.0, 0.0)], &[(0.0, 0.0), (0.5, 0.5)]]);
        let a = normalize_conjugator(&u);
        let b = normalize_conjugator(&(&u * Complex64::from_polar(3.0, 1.1)));
        assert!((&a - &b).norm() < 1e-14);
        assert!((linalg::frobenius(&a) - 1.0).abs() < 1e-14);
        assert!(a[(0, 0)].im.abs() < 1e-15 && a[(0, 0)].re > 0.0);
    }

    #[test]
    fn transpose_survives_refutation() {
        let alg = Arc::new(AlgebraSpec::full_matrix(2, NormKind::Spectral));
        let t = IsometryOracle::new("transpose", alg.clone(), alg, |m| m.transpose());
        let found = search_product_defects(&t, 50, 0);
        assert!(found.multiplicative.is_some());
        assert!(found.antimultiplicative.is_none());
        assert!(refute_multiplicativity(&t, 50, 0).is_none());
    }

    #[test]
    fn dame_set_identity_is_refuted_on_e12_e23() {
        let a = Arc::new(AlgebraSpec::dame_a(NormKind::Spectral));
        let b = Arc::new(AlgebraSpec::dame_b(NormKind::Spectral));
        let t = IsometryOracle::new("set-identity", a, b, |m| m.clone());
        let found = refute_multiplicativity(&t, 10, 0).expect("both laws fail");
        let i3 = linalg::identity(3);
        let e12 = &i3 + matrix_unit(3, 0, 1);
        let e23 = &i3 + matrix_unit(3, 1, 2);
        let mult = found.multiplicative.unwrap();
        let anti = found.antimultiplicative.unwrap();
        assert_eq!((mult.m, mult.n), (e12.clone(), e23.clone()));
        assert_eq!((anti.m, anti.n), (e23, e12));
        assert_eq!(mult.defect, -matrix_unit(3, 0, 2));
        assert_eq!(anti.defect, -matrix_unit(3, 0, 2));
        assert!((mult.defect_norm - 1.0).abs() < 1e-14);
    }
}
