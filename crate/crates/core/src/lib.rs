//! Exact creative telescoping.
//!
//! Discovers and certifies linear recurrences with polynomial coefficients for
//! parametrized hypergeometric sums (discrete creative telescoping) and for
//! integrals of `c(x) f(x)^n` (continuous creative telescoping), then checks
//! them against brute-force ground truth.
//!
//! The arithmetic is generic over [`exact::Field`]; the aliases below name the
//! coefficient tower `Q ⊂ Q(n) ⊂ Q(n)(k)` used throughout.

pub mod azint;
pub mod exact;
pub mod gosper;
pub mod oracle;
pub mod ore;
pub mod reader;
pub mod telescope;
pub mod termlib;

pub use exact::{Field, RatFunc, Ring, UniPoly};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
/// Polynomial over `Q`.
pub type QPoly = UniPoly<Rational>;
/// The field `Q(n)` of rational functions in the parameter `n`.
pub type Qn = RatFunc<Rational>;
/// Polynomial in `k` (or `x`) with coefficients in `Q(n)`.
pub type QnPoly = UniPoly<Qn>;
/// Bivariate rational function, `Q(n)(k)`.
pub type Qnk = RatFunc<Qn>;
