//! Computational laboratory for isometries between the invertible groups of
//! finite-dimensional unital Banach algebras.
//!
//! Algebras are unital subalgebras of `M_n(ℂ)` with one of four stock
//! matrix norms. Given a black-box isometry `T` between invertible groups,
//! the crate estimates the radical shift `u₀ = lim_{a→0} T(a)`, builds the
//! real-linear map `T̃₀` with `T = T̃₀ + u₀`, classifies isometries of
//! `GL_n` into their four canonical forms, and replays the two standard
//! counterexamples.

pub mod algebra;
pub mod classifier;
pub mod cli;
pub mod config;
pub mod engine;
pub mod gallery;
pub mod json;
pub mod linalg;
pub mod numrange;
pub mod oracle;
pub mod report;
pub mod sampling;

pub use algebra::{AlgebraError, AlgebraSpec, Element, MultRule, NormKind};
pub use classifier::{classify, refute_multiplicativity, ClassificationResult, ClassifyError};
pub use engine::{
    build_extension, check_midpoint, estimate_u0, verify_extension, EngineError, ExtensionResult,
};
pub use linalg::CMatrix;
pub use oracle::{CanonicalForm, FormTag, IsometryOracle};
pub use report::{Check, Diagnostics};
