//! Spherical analysis for Gelfand pairs on the Heisenberg group: exact
//! eigenvalue tables for invariant operators, the embedded spectrum, bounded
//! spherical functions, forward/inverse spherical transforms with spectral
//! multipliers, and a constructive Schwartz extension pipeline.

pub mod action;
pub mod diffop;
pub mod error;
pub mod heisenberg;
pub mod invariant;
pub mod jet;
pub mod quad;
pub mod quotient;
pub mod spectrum;
pub mod spherical;
pub mod transform;
pub mod verify;
pub mod extension;
pub mod special;

pub use action::{ActionDescriptor, ActionKind};
pub use error::{Error, Result};
