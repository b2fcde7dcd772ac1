//! Exact-arithmetic toolkit for determinantal and pfaffian representations
//! of hypersurfaces over prime fields.
//!
//! The layers build on each other bottom-up:
//!
//! - [`exactlin`]: the prime field context and dense linear algebra over it.
//! - [`mpoly`]: homogeneous forms, monomial bases and black-box interpolation.
//! - [`polymat`]: graded polynomial matrices with determinants, pfaffians and
//!   submaximal pfaffians.
//! - [`constructions`]: explicit and random matrices of prescribed shape.
//! - [`graded`]: Hilbert functions, smoothness certificates, point sets.
//! - [`dominance`]: dominance certificates for the linear pfaffian map and
//!   the closed-form counts that go with them.

pub mod constructions;
pub mod dominance;
pub mod error;
pub mod exactlin;
pub mod graded;
pub mod mpoly;
pub mod polymat;
pub mod seeds;

pub use error::{Error, Result};
pub use exactlin::{Field, ScalarMatrix};
pub use mpoly::{HomogeneousForm, Monomial, MonomialBasis};
pub use polymat::{GradedMatrix, LinearSkewMatrix, Symmetry};

/// Version string embedded in emitted certificates.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
