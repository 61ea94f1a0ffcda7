//! Numerical workbench for holomorphic loop algebras, loop groups and affine
//! Kac-Moody extensions.
//!
//! Loops are matrix-valued Laurent polynomials on the punctured plane. The
//! algebraic layers (loop bracket, central cocycle, Kac-Moody bracket, loop
//! group products and logarithmic derivatives) are exact on coefficients; the
//! analytic layers (graded sup norms on annuli, monodromy, gauge
//! normalization) carry explicit error estimates.
//!
//! Module map:
//!
//! - [`laurent`]: coefficient arithmetic, evaluation, graded norms, refits.
//! - [`liealg`]: `sl(n)`/`su(n)` backend, matrix exp/log, torus conjugation,
//!   alcove reduction.
//! - [`loopalg`]: the loop algebra with twist and reality projectors.
//! - [`kacmoody`]: the central extension by `c` and `d`.
//! - [`loopgroup`]: det-1 loops, pointwise exponential, monodromy.
//! - [`polar`]: gauge action, normalization to the constant section, the
//!   extended Adjoint action.
//! - [`oracles`]: slow, independent reference implementations for tests.
//! - [`fixtures`]: deterministic random generators.

pub mod error;
pub mod fixtures;
pub mod json;
pub mod kacmoody;
pub mod laurent;
pub mod liealg;
pub mod loopalg;
pub mod loopgroup;
pub mod matrix;
pub mod oracles;
pub mod polar;

pub use error::{Error, Result};
pub use kacmoody::{CocycleSign, KacMoody, KacMoodyVector};
pub use laurent::{CircleSamples, Convention, GradingConfig, LaurentMatrix};
pub use liealg::{DiagramAutomorphism, LieBackend, SectionElement};
pub use loopalg::LoopAlgebraElement;
pub use loopgroup::{LoopGroupElement, MonodromyResult};
pub use matrix::{c64, CMat, C64};
pub use polar::{GaugeResult, KacMoodyGroupElement};
