//! Absolute-PPT analysis of symmetric multiqubit and multiqudit states.
//!
//! - [`combx`]: exact binomials, rationals and square roots of rationals,
//!   threshold probabilities.
//! - [`symstate`]: Dicke bases, symmetric states, bipartite embedding.
//! - [`ptrans`]: partial transposition, numeric and closed-form spectra,
//!   ladder operators, Schmidt spectra.
//! - [`witness`]: diagonal-plus-corner entanglement witnesses, their
//!   validity over product states and their detection thresholds.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, the precision every documented tolerance assumes.

pub mod combx;
pub mod error;
pub mod linalg;
pub mod ptrans;
pub mod scalar;
pub mod search;
pub mod symstate;
pub mod witness;

pub use combx::{ExactRational, SqrtRational};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use symstate::Bipartition;

pub type PureState = symstate::PureSymmetricState<f64>;
pub type DensityMatrix = symstate::SymmetricDensityMatrix<f64>;
pub type BipartiteOp = symstate::BipartiteOperator<f64>;
pub type Ladder = ptrans::LadderOperators<f64>;
pub type Schmidt = ptrans::SchmidtSpectrum<f64>;
pub type NumericSpectrum = ptrans::Spectrum<f64>;
pub type ExactSpectrum = ptrans::Spectrum<ExactRational>;
pub type Witness = witness::Witness<f64>;

pub type PureState32 = symstate::PureSymmetricState<f32>;
pub type BipartiteOp32 = symstate::BipartiteOperator<f32>;
pub type Witness32 = witness::Witness<f32>;
