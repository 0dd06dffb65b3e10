//! Black-box isometries between invertible groups.
//!
//! An [`IsometryOracle`] is an opaque map on matrices plus its domain and
//! codomain algebras. The built-in families are the canonical forms
//! `M ↦ C·U·φ(M)·U⁻¹` (φ one of identity, transpose, entrywise conjugate,
//! conjugate transpose), optionally followed by a translation by a radical
//! element, and a deliberately broken variant used as a negative control.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, AlgebraSpec, NormKind};
use crate::linalg::{self, CMatrix};
use crate::report::Check;
use crate::sampling::{self, LabRng};

pub const AUDIT_TOL: f64 = 1e-9;
pub const AUDIT_PAIRS: usize = 200;

pub type MapFn = Arc<dyn Fn(&CMatrix) -> CMatrix + Send + Sync>;
pub type MembershipFn = Arc<dyn Fn(&CMatrix) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct IsometryOracle {
    label: String,
    domain: Arc<AlgebraSpec>,
    codomain: Arc<AlgebraSpec>,
    map: MapFn,
    // None means "the invertible group of the domain"
    membership: Option<MembershipFn>,
}

impl fmt::Debug for IsometryOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IsometryOracle")
            .field("label", &self.label)
            .field("domain", &self.domain.name())
            .field("codomain", &self.codomain.name())
            .finish()
    }
}

impl IsometryOracle {
    pub fn new<F>(
        label: impl Into<String>,
        domain: Arc<AlgebraSpec>,
        codomain: Arc<AlgebraSpec>,
        map: F,
    ) -> Self
    where
        F: Fn(&CMatrix) -> CMatrix + Send + Sync + 'static,
    {
        IsometryOracle {
            label: label.into(),
            domain,
            codomain,
            map: Arc::new(map),
            membership: None,
        }
    }

    /// Replaces the default domain (invertibles) with an arbitrary open set.
    pub fn with_membership<F>(mut self, membership: F) -> Self
    where
        F: Fn(&CMatrix) -> bool + Send + Sync + 'static,
    {
        self.membership = Some(Arc::new(membership));
        self
    }

    pub fn identity(alg: Arc<AlgebraSpec>) -> Self {
        Self::new("identity", alg.clone(), alg, |m| m.clone())
    }

    pub fn canonical(
        domain: Arc<AlgebraSpec>,
        codomain: Arc<AlgebraSpec>,
        form: CanonicalForm,
    ) -> Result<Self, AlgebraError> {
        let n = domain.ambient_dim();
        for m in [&form.left_factor, &form.u] {
            if m.shape() != (n, n) || codomain.ambient_dim() != n {
                return Err(AlgebraError::Shape {
                    expected: n,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
        let compiled = form.compile()?;
        let label = form.tag().as_str().to_string();
        Ok(Self::new(label, domain, codomain, move |m| {
            compiled.apply(m)
        }))
    }

    /// `a ↦ T(a) + shift`.
    pub fn translated(self, shift: CMatrix) -> Self {
        let inner = self.map.clone();
        IsometryOracle {
            label: format!("{}+shift", self.label),
            map: Arc::new(move |m| inner(m) + &shift),
            ..self
        }
    }

    /// `a ↦ T(a) + magnitude·‖a‖·e/‖e‖`, which breaks the isometry by up
    /// to `magnitude·|‖a‖ − ‖b‖|` on each pair.
    pub fn corrupted(self, magnitude: f64) -> Self {
        let inner = self.map.clone();
        let dom = self.domain.clone();
        let e = self.codomain.unit().clone();
        let direction = &e * Complex64::new(1.0 / self.codomain.norm(&e), 0.0);
        IsometryOracle {
            label: format!("{}+corruption", self.label),
            map: Arc::new(move |m| {
                inner(m) + &direction * Complex64::new(magnitude * dom.norm(m), 0.0)
            }),
            ..self
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &Arc<AlgebraSpec> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<AlgebraSpec> {
        &self.codomain
    }

    pub fn apply(&self, a: &CMatrix) -> CMatrix {
        (self.map)(a)
    }

    pub fn in_domain(&self, a: &CMatrix) -> bool {
        match &self.membership {
            Some(f) => f(a),
            None => self.domain.is_invertible(a),
        }
    }

    /// Distance in the codomain norm.
    pub fn image_distance(&self, x: &CMatrix, y: &CMatrix) -> f64 {
        self.codomain.norm(&(x - y))
    }

    /// Random point of the domain, rejection-sampled through `in_domain`.
    pub fn sample_domain(&self, rng: &mut LabRng) -> CMatrix {
        loop {
            let a = self.domain.random_invertible(rng);
            if self.in_domain(&a) {
                return a;
            }
        }
    }
}

/// The four canonical forms of an isometry of `GL_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormTag {
    Similarity,
    TransposeSimilarity,
    ConjugateSimilarity,
    ConjugateTransposeSimilarity,
}

impl FormTag {
    pub const ALL: [FormTag; 4] = [
        FormTag::Similarity,
        FormTag::TransposeSimilarity,
        FormTag::ConjugateSimilarity,
        FormTag::ConjugateTransposeSimilarity,
    ];

    pub fn from_flags(conjugate: bool, transpose: bool) -> Self {
        match (conjugate, transpose) {
            (false, false) => FormTag::Similarity,
            (false, true) => FormTag::TransposeSimilarity,
            (true, false) => FormTag::ConjugateSimilarity,
            (true, true) => FormTag::ConjugateTransposeSimilarity,
        }
    }

    pub fn conjugate(self) -> bool {
        matches!(
            self,
            FormTag::ConjugateSimilarity | FormTag::ConjugateTransposeSimilarity
        )
    }

    pub fn transpose(self) -> bool {
        matches!(
            self,
            FormTag::TransposeSimilarity | FormTag::ConjugateTransposeSimilarity
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FormTag::Similarity => "similarity",
            FormTag::TransposeSimilarity => "transpose_similarity",
            FormTag::ConjugateSimilarity => "conjugate_similarity",
            FormTag::ConjugateTransposeSimilarity => "conjugate_transpose_similarity",
        }
    }

    /// `φ(M)`: conjugate and/or transpose as the tag says.
    pub fn twist(self, m: &CMatrix) -> CMatrix {
        let m = if self.conjugate() {
            linalg::conj(m)
        } else {
            m.clone()
        };
        if self.transpose() {
            m.transpose()
        } else {
            m
        }
    }
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `M ↦ left_factor · U · φ(M) · U⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub left_factor: CMatrix,
    pub u: CMatrix,
    pub conjugate: bool,
    pub transpose: bool,
}

struct CompiledForm {
    left: CMatrix,
    u_inv: CMatrix,
    tag: FormTag,
}

impl CompiledForm {
    fn apply(&self, m: &CMatrix) -> CMatrix {
        &self.left * self.tag.twist(m) * &self.u_inv
    }
}

impl CanonicalForm {
    pub fn new(tag: FormTag, u: CMatrix, left_factor: CMatrix) -> Self {
        CanonicalForm {
            left_factor,
            u,
            conjugate: tag.conjugate(),
            transpose: tag.transpose(),
        }
    }

    pub fn tag(&self) -> FormTag {
        FormTag::from_flags(self.conjugate, self.transpose)
    }

    fn compile(&self) -> Result<CompiledForm, AlgebraError> {
        let u_inv = self
            .u
            .clone()
            .try_inverse()
            .ok_or(AlgebraError::NotInvertible(0.0))?;
        Ok(CompiledForm {
            left: &self.left_factor * &self.u,
            u_inv,
            tag: self.tag(),
        })
    }

    pub fn apply(&self, m: &CMatrix) -> Result<CMatrix, AlgebraError> {
        Ok(self.compile()?.apply(m))
    }

    /// Random instance that is a genuine isometry for `norm` on the domain.
    ///
    /// `U` and the left factor are Haar unitaries for the spectral and
    /// Frobenius norms, and phased permutations for the induced ℓ1/ℓ∞ norms.
    pub fn random(tag: FormTag, n: usize, norm: NormKind, rng: &mut LabRng) -> Self {
        let draw = |rng: &mut LabRng| match norm {
            NormKind::Spectral | NormKind::Frobenius => sampling::unitary(rng, n),
            NormKind::InducedL1 | NormKind::InducedLinf => sampling::monomial_unitary(rng, n),
        };
        let u = draw(rng);
        let left = draw(rng);
        CanonicalForm::new(tag, u, left)
    }
}

/// Codomain norm that makes a canonical form with the given tag isometric
/// from `domain_norm`: transposition swaps the induced ℓ1 and ℓ∞ norms.
pub fn codomain_norm_for(tag: FormTag, domain_norm: NormKind) -> NormKind {
    if tag.transpose() {
        domain_norm.transposed()
    } else {
        domain_norm
    }
}

/// Random canonical isometry of `GL_n` for the given norm, together with
/// the form that generated it.
pub fn random_gln_oracle(
    tag: FormTag,
    n: usize,
    norm: NormKind,
    rng: &mut LabRng,
) -> (IsometryOracle, CanonicalForm) {
    let form = CanonicalForm::random(tag, n, norm, rng);
    let domain = Arc::new(AlgebraSpec::full_matrix(n, norm));
    let codomain = Arc::new(AlgebraSpec::full_matrix(n, codomain_norm_for(tag, norm)));
    let oracle = IsometryOracle::canonical(domain, codomain, form.clone())
        .expect("unitary factors are invertible");
    (oracle, form)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub pairs: usize,
    pub max_deviation: f64,
    pub non_invertible_images: usize,
    pub passed: bool,
}

impl AuditReport {
    pub fn as_checks(&self) -> Vec<Check> {
        vec![
            Check::below("isometry audit", self.max_deviation, AUDIT_TOL),
            Check::claim("image invertibility", self.non_invertible_images == 0).with_detail(
                format!(
                    "{} of {} images singular",
                    self.non_invertible_images,
                    2 * self.pairs
                ),
            ),
        ]
    }
}

/// Compares `‖T(a) − T(b)‖′` with `‖a − b‖` over `pairs` random pairs of
/// domain points and checks every image is invertible in the codomain.
pub fn audit(oracle: &IsometryOracle, pairs: usize, rng_seed: u64) -> AuditReport {
    let mut rng = sampling::rng_from_seed(rng_seed);
    let mut max_deviation: f64 = 0.0;
    let mut non_invertible_images = 0;
    for _ in 0..pairs {
        let a = oracle.sample_domain(&mut rng);
        let b = oracle.sample_domain(&mut rng);
        let ta = oracle.apply(&a);
        let tb = oracle.apply(&b);
        let dev = (oracle.image_distance(&ta, &tb) - oracle.domain().norm(&(&a - &b))).abs();
        max_deviation = max_deviation.max(dev);
        non_invertible_images += [&ta, &tb]
            .iter()
            .filter(|t| !oracle.codomain().is_invertible(t))
            .count();
    }
    AuditReport {
        pairs,
        max_deviation,
        non_invertible_images,
        passed: max_deviation < AUDIT_TOL && non_invertible_images == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_passes_audit() {
        let m2 = Arc::new(AlgebraSpec::full_matrix(2, NormKind::Spectral));
        let report = audit(&IsometryOracle::identity(m2), AUDIT_PAIRS, 3);
        assert!(report.passed);
        assert_eq!(report.max_deviation, 0.0);
    }

    #[test]
    fn random_forms_are_isometric_for_every_norm() {
        let mut rng = sampling::rng_from_seed(11);
        for norm in NormKind::ALL {
            for tag in FormTag::ALL {
                let (oracle, _) = random_gln_oracle(tag, 3, norm, &mut rng);
                let report = audit(&oracle, 50, 5);
                assert!(report.passed, "{tag} {norm}: {report:?}");
            }
        }
    }

    #[test]
    fn plain_transpose_is_not_l1_isometric() {
        let m3 = Arc::new(AlgebraSpec::full_matrix(3, NormKind::InducedL1));
        let t = IsometryOracle::new("transpose", m3.clone(), m3, |m| m.transpose());
        assert!(!audit(&t, 50, 1).passed);
    }

    #[test]
    fn corruption_is_caught() {
        let mut rng = sampling::rng_from_seed(4);
        let (oracle, _) = random_gln_oracle(FormTag::Similarity, 2, NormKind::Spectral, &mut rng);
        let report = audit(&oracle.corrupted(1e-3), AUDIT_PAIRS, 9);
        assert!(!report.passed);
        assert!(report.max_deviation > 1e-5);
    }

    #[test]
    fn twist_matches_tag() {
        let m = linalg::from_rows(&[&[(1.0, 1.0), (2.0, 0.0)], &[(0.0, 3.0), (4.0, -1.0)]]);
        assert_eq!(FormTag::ConjugateTransposeSimilarity.twist(&m), m.adjoint());
        assert_eq!(FormTag::TransposeSimilarity.twist(&m), m.transpose());
        assert_eq!(FormTag::ConjugateSimilarity.twist(&m), linalg::conj(&m));
    }
}
