//! Jet-space construction and verification of nonlinear Yang-Mills /
//! antisymmetric tensor gauge theories with Chern-Simons type masses.

pub mod deform_coeffs;
pub mod dynamics;
pub mod error;
pub mod jet_forms;
pub mod lie_core;
pub mod observables;
pub mod par;
pub mod strengths;

pub use error::{Error, Result};
