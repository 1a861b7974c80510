//! The Schwartz-extension pipeline: polynomial change of generators, the
//! invariant extension through the Hilbert map, the Taylor jet along the
//! degenerate spectrum, its smooth realization, the curve interpolation
//! operator, and the final assembly.

pub mod change_of_gens;
pub mod cutoffs;
pub mod interpolate;
pub mod invariant_ext;
pub mod jet;
pub mod seeley;

pub use change_of_gens::{GeneratorChangeExtension, PolyMap};
pub use cutoffs::{eta, interpolation_window, psi, smooth_step, Bump, SpectrumNeighborhood};
pub use interpolate::{CurveInterpolant, CurveTable};
pub use invariant_ext::{AnisotropicGauge, ExtensionSpec, InvariantExtension, OrthantChart};
pub use jet::{assemble_schwartz_extension, compute_schwartz_jet, ExtensionResult, JetSpec, SchwartzJet, SmoothJetRealization};
pub use seeley::{orthant_extend, SeeleyCoefficients};
