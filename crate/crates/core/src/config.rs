//! JSON configuration files.
//!
//! ```json
//! {
//!   "schema": "banalg-lab/1",
//!   "algebra": { "kind": "dame_B", "norm": "spectral" },
//!   "oracle": {
//!     "family": "similarity",
//!     "U": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
//!     "conjugate": true,
//!     "transpose": true,
//!     "domain": { "kind": "full_matrix", "n": 2, "norm": "spectral" }
//!   }
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices row-major arrays of rows.
//! A missing `codomain` defaults to the domain, with the induced ℓ1 and ℓ∞
//! norms swapped for transpose forms.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, MultRule, NormKind};
use crate::json::{self, MatrixLiteral};
use crate::linalg::{self, CMatrix};
use crate::oracle::{self, CanonicalForm, FormTag, IsometryOracle};
use crate::report::SCHEMA;

pub const DEFAULT_PERTURBATION: f64 = 1e-3;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {found:?} (expected {SCHEMA:?})")]
    Schema { found: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl ConfigError {
    fn invalid(msg: impl Into<String>) -> Self {
        ConfigError::Invalid(msg.into())
    }
}

fn default_norm() -> NormKind {
    NormKind::Spectral
}

fn default_mult() -> MultRule {
    MultRule::Matrix
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitLiteral {
    /// Index into `basis`.
    Index(usize),
    Matrix(MatrixLiteral),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum AlgebraLiteral {
    #[serde(rename = "full_matrix")]
    FullMatrix {
        n: usize,
        #[serde(default = "default_norm")]
        norm: NormKind,
    },
    #[serde(rename = "upper_triangular")]
    UpperTriangular {
        n: usize,
        #[serde(default = "default_norm")]
        norm: NormKind,
    },
    #[serde(rename = "diagonal")]
    Diagonal {
        n: usize,
        #[serde(default = "default_norm")]
        norm: NormKind,
    },
    #[serde(rename = "dame_A")]
    DameA {
        #[serde(default = "default_norm")]
        norm: NormKind,
    },
    #[serde(rename = "dame_B")]
    DameB {
        #[serde(default = "default_norm")]
        norm: NormKind,
    },
    #[serde(rename = "custom_basis")]
    CustomBasis {
        #[serde(default)]
        name: Option<String>,
        n: usize,
        basis: Vec<MatrixLiteral>,
        unit: UnitLiteral,
        #[serde(default = "default_mult")]
        mult: MultRule,
        #[serde(default = "default_norm")]
        norm: NormKind,
    },
}

impl AlgebraLiteral {
    pub fn build(&self) -> Result<AlgebraSpec, ConfigError> {
        let positive = |n: usize| {
            if n == 0 {
                Err(ConfigError::invalid("n must be positive"))
            } else {
                Ok(n)
            }
        };
        Ok(match self {
            AlgebraLiteral::FullMatrix { n, norm } => {
                AlgebraSpec::full_matrix(positive(*n)?, *norm)
            }
            AlgebraLiteral::UpperTriangular { n, norm } => {
                AlgebraSpec::upper_triangular(positive(*n)?, *norm)
            }
            AlgebraLiteral::Diagonal { n, norm } => AlgebraSpec::diagonal(positive(*n)?, *norm),
            AlgebraLiteral::DameA { norm } => AlgebraSpec::dame_a(*norm),
            AlgebraLiteral::DameB { norm } => AlgebraSpec::dame_b(*norm),
            AlgebraLiteral::CustomBasis {
                name,
                n,
                basis,
                unit,
                mult,
                norm,
            } => {
                let basis = basis
                    .iter()
                    .map(|b| square(b, *n, "basis element"))
                    .collect::<Result<Vec<_>, _>>()?;
                let unit = match unit {
                    UnitLiteral::Index(k) => basis.get(*k).cloned().ok_or_else(|| {
                        ConfigError::invalid(format!("unit index {k} out of range"))
                    })?,
                    UnitLiteral::Matrix(m) => square(m, *n, "unit")?,
                };
                let name = name.clone().unwrap_or_else(|| "custom".into());
                AlgebraSpec::new(name, *n, basis, unit, *mult, *norm)
                    .map_err(|e| ConfigError::invalid(e.to_string()))?
            }
        })
    }

    pub fn norm(&self) -> NormKind {
        match self {
            AlgebraLiteral::FullMatrix { norm, .. }
            | AlgebraLiteral::UpperTriangular { norm, .. }
            | AlgebraLiteral::Diagonal { norm, .. }
            | AlgebraLiteral::DameA { norm }
            | AlgebraLiteral::DameB { norm }
            | AlgebraLiteral::CustomBasis { norm, .. } => *norm,
        }
    }
}

fn square(m: &MatrixLiteral, n: usize, what: &str) -> Result<CMatrix, ConfigError> {
    let m = json::from_literal(m).map_err(|e| ConfigError::invalid(format!("{what}: {e}")))?;
    if m.shape() != (n, n) {
        return Err(ConfigError::invalid(format!(
            "{what} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Identity,
    Similarity,
    Corrupted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub family: Family,
    #[serde(
        rename = "U",
        default,
        with = "json::opt_matrix",
        skip_serializing_if = "Option::is_none"
    )]
    pub u: Option<CMatrix>,
    #[serde(
        default,
        with = "json::opt_matrix",
        skip_serializing_if = "Option::is_none"
    )]
    pub left_factor: Option<CMatrix>,
    #[serde(default)]
    pub conjugate: bool,
    #[serde(default)]
    pub transpose: bool,
    #[serde(
        default,
        with = "json::opt_matrix",
        skip_serializing_if = "Option::is_none"
    )]
    pub radical_shift: Option<CMatrix>,
    pub domain: AlgebraLiteral,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<AlgebraLiteral>,
    /// Corruption magnitude, `corrupted` family only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<f64>,
}

impl OracleSpec {
    pub fn tag(&self) -> FormTag {
        FormTag::from_flags(self.conjugate, self.transpose)
    }

    pub fn build(&self) -> Result<IsometryOracle, ConfigError> {
        let domain = Arc::new(self.domain.build()?);
        let tag = self.tag();
        let codomain = Arc::new(match &self.codomain {
            Some(lit) => lit.build()?,
            None => domain
                .with_norm(oracle::codomain_norm_for(tag, domain.norm_kind()))
                .map_err(|e| ConfigError::invalid(e.to_string()))?,
        });
        let n = domain.ambient_dim();
        if codomain.ambient_dim() != n {
            return Err(ConfigError::invalid(
                "domain and codomain live in different matrix sizes",
            ));
        }
        if self.family == Family::Identity
            && (self.u.is_some() || self.left_factor.is_some() || self.conjugate || self.transpose)
        {
            return Err(ConfigError::invalid(
                "the identity family takes no U, left_factor or flags",
            ));
        }
        if self.family != Family::Corrupted && self.perturbation.is_some() {
            return Err(ConfigError::invalid(
                "perturbation applies to the corrupted family only",
            ));
        }

        let u = self.u.clone().unwrap_or_else(|| linalg::identity(n));
        let left = self
            .left_factor
            .clone()
            .unwrap_or_else(|| linalg::identity(n));
        let form = CanonicalForm::new(tag, u, left);
        for b in domain.basis() {
            let image = form
                .apply(b)
                .map_err(|_| ConfigError::invalid("U must be invertible"))?;
            if !codomain.contains(&image) {
                return Err(ConfigError::invalid(
                    "the form does not map the domain into the codomain",
                ));
            }
        }
        let mut oracle = IsometryOracle::canonical(domain, codomain.clone(), form)
            .map_err(|e| ConfigError::invalid(e.to_string()))?;
        if self.family == Family::Identity {
            oracle = IsometryOracle::identity(oracle.domain().clone());
        }
        if let Some(shift) = &self.radical_shift {
            if shift.shape() != (n, n) || !codomain.contains(shift) {
                return Err(ConfigError::invalid(
                    "radical_shift must lie in the codomain",
                ));
            }
            oracle = oracle.translated(shift.clone());
        }
        if self.family == Family::Corrupted {
            let magnitude = self.perturbation.unwrap_or(DEFAULT_PERTURBATION);
            if !(magnitude.is_finite() && magnitude > 0.0) {
                return Err(ConfigError::invalid("perturbation must be positive"));
            }
            oracle = oracle.corrupted(magnitude);
        }
        Ok(oracle)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: ConfigFile = serde_json::from_str(text)?;
        if config.schema != SCHEMA {
            return Err(ConfigError::Schema {
                found: config.schema,
            });
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn algebra(&self) -> Result<AlgebraSpec, ConfigError> {
        self.algebra
            .as_ref()
            .ok_or_else(|| ConfigError::invalid("missing \"algebra\" section"))?
            .build()
    }

    pub fn oracle(&self) -> Result<IsometryOracle, ConfigError> {
        self.oracle
            .as_ref()
            .ok_or_else(|| ConfigError::invalid("missing \"oracle\" section"))?
            .build()
    }
}
