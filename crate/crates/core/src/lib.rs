//! Finite-dimensional certification toolkit for almost-invariant density
//! operators and approximately multiplicative matrix models.
//!
//! The crate provides:
//! - [`matcore`]: dense complex matrices, Schatten norms, Hermitian
//!   eigendecomposition, seeded random ensembles;
//! - [`inequalities`]: checkable trace-norm estimates with a fuzz driver;
//! - [`compression`]: rational-spectrum compression maps φ(T) = P(T⊗1)P
//!   with their trace, second-moment and defect-bound checks;
//! - [`invariance`]: a conditional-gradient solver for almost-invariant
//!   density operators with prescribed trace values;
//! - [`microstates`]: u.c.p. matrix models evaluated on words, their
//!   multiplicativity defects, direct sums, and certificates;
//! - [`groups`]: free-group words, permutation representations and the
//!   canonical trace.

pub mod error;
pub mod json;
pub mod tol;

pub mod matcore;

pub mod inequalities;

pub mod compression;

pub mod invariance;

pub mod microstates;

pub mod groups;

pub use error::{Error, Result};
