pub mod bethe;
pub mod casoratian;
pub mod contode;
pub mod corpus;
pub mod error;
pub mod fdeq;
pub mod gammah;
pub mod linalg;
pub mod norlund;
pub mod ratpoly;
pub mod scalar;
pub mod solver;
pub mod uniqueness;

pub use error::{Error, Result};
pub use fdeq::{DifferenceEquation, HypergeometricData};
pub use scalar::{BigFloat, Precision, Rational, Real, Scalar};
pub use solver::{polynomial_kernel, KernelBasis};

/// Polynomial with exact rational coefficients.
pub type RatPoly = ratpoly::Poly<Rational>;
