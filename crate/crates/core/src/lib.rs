//! Euclidean Jordan algebras `H_n(𝔻)` over the Hurwitz algebras, cross-positive
//! maps on their symmetric cones, and the exotic generator `B` that is
//! cross-positive but not a sum of a positive map and a Lie algebra element.
//!
//! Modules:
//! - [`hurwitz`]: ℝ, ℂ, ℍ, 𝕆 arithmetic and octonion derivations.
//! - [`jordan`]: hermitian matrices, Jordan product, rank-one idempotents, cone membership.
//! - [`linmap`]: linear maps on `H_n(𝔻)`, exponentials, condition samplers, derivation dimensions.
//! - [`exotic`]: the generator `B` and its cross-positivity checks.
//! - [`decompose`]: forced relations on the Lie part, the exact certificate, and the LP falsifier.

pub mod decompose;
pub mod exotic;
pub mod hurwitz;
pub mod jordan;
pub mod linalg;
pub mod linmap;
pub mod lp;
pub mod sampling;
pub mod scalar;

pub use hurwitz::{Algebra, Hurwitz, OctonionDerivation};
pub use jordan::{ConeVector, HermitianMatrix, Mat};
pub use linmap::{ConeMap, JordanMap};
pub use scalar::{Rational, Scalar};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Absolute slack for float comparisons on normalized inputs.
pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(Algebra, Algebra),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}
