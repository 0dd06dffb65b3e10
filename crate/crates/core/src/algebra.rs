//! Finite-dimensional unital Banach algebras realized as subalgebras of
//! n x n complex matrices.
//!
//! An [`AlgebraSpec`] fixes a basis of its span, a unit, a multiplication
//! rule and a norm. All element-level operations take plain matrices and
//! treat them as members of the span; [`Element`] pairs a matrix with its
//! algebra for callers that want mismatches caught.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMatrix, CVector, LinalgError};
use crate::sampling::{self, LabRng};

/// Smallest singular value below which a basis counts as dependent.
pub const INDEPENDENCE_TOL: f64 = 1e-10;
/// Projection residual allowed for span membership.
pub const SPAN_TOL: f64 = 1e-10;
/// Projection residual allowed when re-projecting a computed inverse.
pub const INVERSE_SPAN_TOL: f64 = 1e-8;
/// An element is singular when some eigenvalue has modulus at most this.
pub const INVERTIBILITY_TOL: f64 = 1e-9;
/// Relative singular-value threshold for the trace-form radical.
pub const RADICAL_TOL: f64 = 1e-9;
/// Spectral radius below which `f·a` counts as quasinilpotent.
pub const QUASINILPOTENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("elements belong to different algebras ({0} vs {1})")]
    DomainMismatch(String, String),
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("element is not invertible (min |eigenvalue| = {0:.3e})")]
    NotInvertible(f64),
    #[error("matrix is not in the algebra span (residual {0:.3e})")]
    NotInSpan(f64),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The four stock matrix norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    /// Maximum absolute column sum.
    #[serde(rename = "induced-l1")]
    InducedL1,
    /// Maximum absolute row sum.
    #[serde(rename = "induced-linf")]
    InducedLinf,
    /// Largest singular value.
    #[serde(rename = "spectral")]
    Spectral,
    #[serde(rename = "frobenius")]
    Frobenius,
}

impl NormKind {
    pub const ALL: [NormKind; 4] = [
        NormKind::InducedL1,
        NormKind::InducedLinf,
        NormKind::Spectral,
        NormKind::Frobenius,
    ];

    pub fn is_induced(self) -> bool {
        !matches!(self, NormKind::Frobenius)
    }

    /// Norm whose value on `Mᵗ` equals this norm's value on `M`.
    pub fn transposed(self) -> NormKind {
        match self {
            NormKind::InducedL1 => NormKind::InducedLinf,
            NormKind::InducedLinf => NormKind::InducedL1,
            other => other,
        }
    }

    pub fn eval(self, m: &CMatrix) -> f64 {
        match self {
            NormKind::InducedL1 => m
                .column_iter()
                .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::InducedLinf => m
                .row_iter()
                .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::Spectral => linalg::largest_singular_value(m),
            NormKind::Frobenius => linalg::frobenius(m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormKind::InducedL1 => "induced-l1",
            NormKind::InducedLinf => "induced-linf",
            NormKind::Spectral => "spectral",
            NormKind::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Multiplication rule on the span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultRule {
    /// Ordinary matrix product.
    #[serde(rename = "matrix")]
    Matrix,
    /// Unitization of a zero-product algebra: `(αe + a₀)(βe + b₀) = αβe + αb₀ + βa₀`
    /// where `a₀, b₀` are strictly upper triangular.
    #[serde(rename = "unitized-zero")]
    UnitizedZero,
}

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    name: String,
    n: usize,
    basis: Vec<CMatrix>,
    unit: CMatrix,
    mult: MultRule,
    norm: NormKind,
    // n² x d, columns are the vectorized basis
    basis_matrix: CMatrix,
    // d x n² pseudo-inverse of basis_matrix
    coordinate_map: CMatrix,
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.mult == other.mult
            && self.norm == other.norm
            && self.unit == other.unit
            && self.basis == other.basis
    }
}

impl AlgebraSpec {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        basis: Vec<CMatrix>,
        unit: CMatrix,
        mult: MultRule,
        norm: NormKind,
    ) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidAlgebra(
                "ambient dimension must be positive".into(),
            ));
        }
        if basis.is_empty() {
            return Err(AlgebraError::InvalidAlgebra("basis is empty".into()));
        }
        for b in basis.iter().chain(std::iter::once(&unit)) {
            check_shape(n, b)?;
        }
        let d = basis.len();
        let mut basis_matrix = CMatrix::zeros(n * n, d);
        for (k, b) in basis.iter().enumerate() {
            basis_matrix.set_column(k, &linalg::vec_of(b));
        }
        let smin = linalg::smallest_singular_value(&basis_matrix);
        if smin <= INDEPENDENCE_TOL {
            return Err(AlgebraError::InvalidAlgebra(format!(
                "basis is linearly dependent (smallest singular value {smin:.3e})"
            )));
        }
        let coordinate_map = basis_matrix
            .clone()
            .pseudo_inverse(1e-14)
            .map_err(|e| AlgebraError::InvalidAlgebra(e.to_string()))?;

        let alg = AlgebraSpec {
            name: name.into(),
            n,
            basis,
            unit,
            mult,
            norm,
            basis_matrix,
            coordinate_map,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let (_, r) = self.project(&self.unit);
        if r > SPAN_TOL {
            return Err(AlgebraError::InvalidAlgebra(format!(
                "unit is outside the span (residual {r:.3e})"
            )));
        }
        if self.mult == MultRule::UnitizedZero {
            if self.unit != linalg::identity(self.n) {
                return Err(AlgebraError::InvalidAlgebra(
                    "unitized-zero rule needs the identity as unit".into(),
                ));
            }
            for b in &self.basis {
                let (_, nil) = self.split_scalar(b);
                let lower = (0..self.n)
                    .flat_map(|i| (0..=i).map(move |j| (i, j)))
                    .map(|ij| nil[ij].norm())
                    .fold(0.0, f64::max);
                if lower > SPAN_TOL {
                    return Err(AlgebraError::InvalidAlgebra(
                        "unitized-zero basis must be scalar plus strictly upper triangular".into(),
                    ));
                }
            }
        }
        for b in &self.basis {
            let left = self.mul(&self.unit, b)?;
            let right = self.mul(b, &self.unit)?;
            if (left - b).norm() > SPAN_TOL || (right - b).norm() > SPAN_TOL {
                return Err(AlgebraError::InvalidAlgebra(
                    "declared unit does not act as identity".into(),
                ));
            }
        }
        for a in &self.basis {
            for b in &self.basis {
                let (_, r) = self.project(&self.mul(a, b)?);
                if r > SPAN_TOL {
                    return Err(AlgebraError::InvalidAlgebra(format!(
                        "span is not closed under multiplication (residual {r:.3e})"
                    )));
                }
            }
        }
        if self.norm.is_induced() {
            let e = self.norm(&self.unit);
            if (e - 1.0).abs() > 1e-12 {
                return Err(AlgebraError::InvalidAlgebra(format!(
                    "unit has norm {e}, expected 1"
                )));
            }
        }
        Ok(())
    }

    /// The full matrix algebra `M_n` with matrix units as basis.
    pub fn full_matrix(n: usize, norm: NormKind) -> Self {
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                basis.push(linalg::matrix_unit(n, i, j));
            }
        }
        Self::new(
            format!("M_{n}"),
            n,
            basis,
            linalg::identity(n),
            MultRule::Matrix,
            norm,
        )
        .expect("M_n is a valid algebra")
    }

    /// Upper triangular n x n matrices.
    pub fn upper_triangular(n: usize, norm: NormKind) -> Self {
        let mut basis = Vec::new();
        for i in 0..n {
            for j in i..n {
                basis.push(linalg::matrix_unit(n, i, j));
            }
        }
        Self::new(
            format!("T_{n}"),
            n,
            basis,
            linalg::identity(n),
            MultRule::Matrix,
            norm,
        )
        .expect("upper triangular matrices form a valid algebra")
    }

    /// Diagonal n x n matrices, i.e. `C(X)` for an n-point space.
    pub fn diagonal(n: usize, norm: NormKind) -> Self {
        let basis = (0..n).map(|i| linalg::matrix_unit(n, i, i)).collect();
        Self::new(
            format!("D_{n}"),
            n,
            basis,
            linalg::identity(n),
            MultRule::Matrix,
            norm,
        )
        .expect("diagonal matrices form a valid algebra")
    }

    fn dame_basis() -> Vec<CMatrix> {
        vec![
            linalg::identity(3),
            linalg::matrix_unit(3, 0, 1),
            linalg::matrix_unit(3, 0, 2),
            linalg::matrix_unit(3, 1, 2),
        ]
    }

    /// `{αI + strictly upper triangular} ⊂ M_3` where the nilpotent parts
    /// annihilate each other.
    pub fn dame_a(norm: NormKind) -> Self {
        Self::new(
            "DAME_A",
            3,
            Self::dame_basis(),
            linalg::identity(3),
            MultRule::UnitizedZero,
            norm,
        )
        .expect("DAME_A is a valid algebra")
    }

    /// Same set as [`AlgebraSpec::dame_a`] with the ordinary matrix product.
    pub fn dame_b(norm: NormKind) -> Self {
        Self::new(
            "DAME_B",
            3,
            Self::dame_basis(),
            linalg::identity(3),
            MultRule::Matrix,
            norm,
        )
        .expect("DAME_B is a valid algebra")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Complex dimension `d` of the algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn unit(&self) -> &CMatrix {
        &self.unit
    }

    pub fn mult_rule(&self) -> MultRule {
        self.mult
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    /// Same algebra under a different norm.
    pub fn with_norm(&self, norm: NormKind) -> Result<Self, AlgebraError> {
        Self::new(
            self.name.clone(),
            self.n,
            self.basis.clone(),
            self.unit.clone(),
            self.mult,
            norm,
        )
    }

    /// Coordinates of the orthogonal projection of `m` onto the span, and
    /// the Frobenius residual of that projection.
    pub fn project(&self, m: &CMatrix) -> (CVector, f64) {
        let v = linalg::vec_of(m);
        let c = &self.coordinate_map * &v;
        let r = (&self.basis_matrix * &c - v).norm();
        (c, r)
    }

    /// Coordinates of `m`, failing when `m` is not in the span.
    pub fn coords(&self, m: &CMatrix) -> Result<CVector, AlgebraError> {
        check_shape(self.n, m)?;
        let (c, r) = self.project(m);
        if r > SPAN_TOL * (1.0 + linalg::frobenius(m)) {
            return Err(AlgebraError::NotInSpan(r));
        }
        Ok(c)
    }

    pub fn from_coords(&self, c: &CVector) -> CMatrix {
        linalg::unvec(&(&self.basis_matrix * c), self.n, self.n)
    }

    pub fn contains(&self, m: &CMatrix) -> bool {
        m.shape() == (self.n, self.n) && {
            let (_, r) = self.project(m);
            r <= SPAN_TOL * (1.0 + linalg::frobenius(m))
        }
    }

    /// `m` snapped onto the span.
    pub fn snap(&self, m: &CMatrix) -> CMatrix {
        self.from_coords(&self.project(m).0)
    }

    /// `(α, a − αe)` with `α = tr(a)/n`.
    fn split_scalar(&self, a: &CMatrix) -> (Complex64, CMatrix) {
        let alpha = a.trace() / self.n as f64;
        (alpha, a - &self.unit * alpha)
    }

    pub fn mul(&self, a: &CMatrix, b: &CMatrix) -> Result<CMatrix, AlgebraError> {
        check_shape(self.n, a)?;
        check_shape(self.n, b)?;
        Ok(match self.mult {
            MultRule::Matrix => a * b,
            MultRule::UnitizedZero => {
                let (alpha, a0) = self.split_scalar(a);
                let (beta, b0) = self.split_scalar(b);
                &self.unit * (alpha * beta) + b0 * alpha + a0 * beta
            }
        })
    }

    pub fn norm(&self, a: &CMatrix) -> f64 {
        self.norm.eval(a)
    }

    /// Eigenvalues of the matrix. For a unital subalgebra these coincide
    /// with the algebra spectrum since inverses are polynomials in the element.
    pub fn spectrum(&self, a: &CMatrix) -> Result<Vec<Complex64>, AlgebraError> {
        check_shape(self.n, a)?;
        Ok(linalg::eigenvalues(a)?)
    }

    pub fn spectral_radius(&self, a: &CMatrix) -> Result<f64, AlgebraError> {
        Ok(self
            .spectrum(a)?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    pub fn min_abs_eigenvalue(&self, a: &CMatrix) -> Result<f64, AlgebraError> {
        Ok(self
            .spectrum(a)?
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min))
    }

    pub fn is_invertible(&self, a: &CMatrix) -> bool {
        self.min_abs_eigenvalue(a)
            .map(|m| m > INVERTIBILITY_TOL)
            .unwrap_or(false)
    }

    pub fn invert(&self, a: &CMatrix) -> Result<CMatrix, AlgebraError> {
        let smallest = self.min_abs_eigenvalue(a)?;
        if smallest <= INVERTIBILITY_TOL {
            return Err(AlgebraError::NotInvertible(smallest));
        }
        let inv = match self.mult {
            MultRule::Matrix => a
                .clone()
                .try_inverse()
                .ok_or(AlgebraError::NotInvertible(smallest))?,
            MultRule::UnitizedZero => {
                let (alpha, a0) = self.split_scalar(a);
                &self.unit * alpha.inv() - a0 * (alpha * alpha).inv()
            }
        };
        let (c, r) = self.project(&inv);
        if r > INVERSE_SPAN_TOL * (1.0 + linalg::frobenius(&inv)) {
            return Err(AlgebraError::NotInSpan(r));
        }
        Ok(self.from_coords(&c))
    }

    /// d x d matrix of `y ↦ x·y` in basis coordinates.
    pub fn left_multiplication(&self, x: &CMatrix) -> Result<CMatrix, AlgebraError> {
        let d = self.dim();
        let mut l = CMatrix::zeros(d, d);
        for (k, b) in self.basis.iter().enumerate() {
            let (c, _) = self.project(&self.mul(x, b)?);
            l.set_column(k, &c);
        }
        Ok(l)
    }

    /// Basis of the Jacobson radical via the trace form: the null space of
    /// `G_jk = tr(L_{b_j b_k})`.
    pub fn radical(&self) -> Result<Vec<CMatrix>, AlgebraError> {
        let d = self.dim();
        let mut gram = CMatrix::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                let prod = self.mul(&self.basis[j], &self.basis[k])?;
                gram[(j, k)] = self.left_multiplication(&prod)?.trace();
            }
        }
        let ns = linalg::null_space(&gram, RADICAL_TOL);
        Ok(ns
            .column_iter()
            .map(|c| self.from_coords(&c.into_owned()))
            .collect())
    }

    pub fn is_semisimple(&self) -> Result<bool, AlgebraError> {
        Ok(self.radical()?.is_empty())
    }

    /// Whether `a` lies in the span of `radical()` (relative tolerance `tol`).
    pub fn in_radical(&self, a: &CMatrix, tol: f64) -> Result<bool, AlgebraError> {
        let rad = self.radical()?;
        let c = self.coords(a)?;
        if rad.is_empty() {
            return Ok(c.norm() <= tol);
        }
        let mut r = CMatrix::zeros(self.dim(), rad.len());
        for (k, m) in rad.iter().enumerate() {
            r.set_column(k, &self.coords(m)?);
        }
        let (_, res) = linalg::least_squares(&r, &c);
        Ok(res <= tol * (1.0 + c.norm()))
    }

    /// Random element with i.i.d. standard complex normal coordinates.
    pub fn random_element(&self, rng: &mut LabRng) -> CMatrix {
        let c = CVector::from_fn(self.dim(), |_, _| sampling::complex_normal(rng));
        self.from_coords(&c)
    }

    /// Random element whose smallest eigenvalue modulus exceeds `1e-6·‖a‖`.
    pub fn random_invertible(&self, rng: &mut LabRng) -> CMatrix {
        loop {
            let a = self.random_element(rng);
            let scale = self.norm(&a);
            if let Ok(m) = self.min_abs_eigenvalue(&a) {
                if m > 1e-6 * scale && m > INVERTIBILITY_TOL {
                    return a;
                }
            }
        }
    }

    /// Radical test by sampling: `r(f·a) < 1e-8` for `trials` random
    /// invertible `f` drawn from a generator seeded with `rng_seed`.
    pub fn radical_member_sampling(
        &self,
        a: &CMatrix,
        trials: usize,
        rng_seed: u64,
    ) -> Result<bool, AlgebraError> {
        check_shape(self.n, a)?;
        let mut rng = sampling::rng_from_seed(rng_seed);
        for _ in 0..trials.max(1) {
            let f = loop {
                let f = self.random_element(&mut rng);
                if self.is_invertible(&f) {
                    break f;
                }
            };
            if self.spectral_radius(&self.mul(&f, a)?)? >= QUASINILPOTENT_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in `Ω = {a : ‖a − re‖ < r for some r > 0}`, probing the
    /// witnesses `r = ‖a‖·{2, 1, 4, 8}`.
    pub fn in_omega(&self, a: &CMatrix) -> bool {
        let size = self.norm(a);
        if size == 0.0 {
            return false;
        }
        [2.0, 1.0, 4.0, 8.0].iter().any(|k| {
            let r = k * size;
            self.norm(&(a - &self.unit * Complex64::new(r, 0.0))) < r
        })
    }

    /// `a + 2‖a‖e`, the canonical shift of `a` into Ω.
    pub fn omega_shift(&self, a: &CMatrix) -> CMatrix {
        a + &self.unit * Complex64::new(2.0 * self.norm(a), 0.0)
    }

    pub fn zero(&self) -> CMatrix {
        CMatrix::zeros(self.n, self.n)
    }

    pub fn scaled_unit(&self, s: Complex64) -> CMatrix {
        &self.unit * s
    }
}

fn check_shape(n: usize, m: &CMatrix) -> Result<(), AlgebraError> {
    if m.shape() != (n, n) {
        return Err(AlgebraError::Shape {
            expected: n,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// A matrix tied to the algebra it lives in.
#[derive(Debug, Clone)]
pub struct Element {
    matrix: CMatrix,
    algebra: Arc<AlgebraSpec>,
}

impl Element {
    pub fn new(algebra: Arc<AlgebraSpec>, matrix: CMatrix) -> Result<Self, AlgebraError> {
        algebra.coords(&matrix)?;
        Ok(Element { matrix, algebra })
    }

    pub fn unit(algebra: Arc<AlgebraSpec>) -> Self {
        let matrix = algebra.unit().clone();
        Element { matrix, algebra }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    fn same_algebra(&self, other: &Element) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra {
            Ok(())
        } else {
            Err(AlgebraError::DomainMismatch(
                self.algebra.name().into(),
                other.algebra.name().into(),
            ))
        }
    }

    pub fn mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_algebra(other)?;
        let matrix = self.algebra.mul(&self.matrix, &other.matrix)?;
        Ok(Element {
            matrix,
            algebra: self.algebra.clone(),
        })
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_algebra(other)?;
        Ok(Element {
            matrix: &self.matrix + &other.matrix,
            algebra: self.algebra.clone(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Element {
        Element {
            matrix: &self.matrix * s,
            algebra: self.algebra.clone(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.algebra.norm(&self.matrix)
    }

    pub fn spectrum(&self) -> Result<Vec<Complex64>, AlgebraError> {
        self.algebra.spectrum(&self.matrix)
    }

    pub fn spectral_radius(&self) -> Result<f64, AlgebraError> {
        self.algebra.spectral_radius(&self.matrix)
    }

    pub fn invert(&self) -> Result<Element, AlgebraError> {
        let matrix = self.algebra.invert(&self.matrix)?;
        Ok(Element {
            matrix,
            algebra: self.algebra.clone(),
        })
    }

    pub fn in_omega(&self) -> bool {
        self.algebra.in_omega(&self.matrix)
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n={}, d={}, {:?}, {})",
            self.name,
            self.n,
            self.dim(),
            self.mult,
            self.norm
        )
    }
}
