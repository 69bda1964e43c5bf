//! Finite-dimensional quantum phase-space toolkit.
//!
//! Schwinger kinematics on cyclic spaces, the discrete Weyl-Wigner map,
//! a truncated harmonic oscillator, weak measurement, projective geometry,
//! modular variables, and the reference experiments built from them.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod linalg;
pub mod measurement;
pub mod modular;
pub mod oscillator;
pub mod quadrature;
pub mod qspace;
pub mod weyl_wigner;

pub use error::{Error, Result};
pub use linalg::{OperatorMatrix, StateVector, C64};
