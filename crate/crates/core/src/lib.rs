//! Sizes and creation events of excess components in the random graph process.
//!
//! The crate is split into layers:
//!
//! * [`series`]: exact truncated power series, the tree function `T(z)`
//!   and tree polynomials `t_{a,n}(y)`.
//! * [`enumerate`]: exact counts `c(k, k+l)` of connected labelled graphs by
//!   excess, bridge-distinguished counts and a brute-force oracle.
//! * [`wright`]: Wright constants, the inverse-power basis decomposition of
//!   `W_l`, the saddle-point tree-polynomial estimate and related asymptotics.
//! * [`expect`]: closed-form transition expectations summed over component
//!   orders.
//! * [`process`]: a union-find simulator of the random graph process that
//!   counts creation events and vertices ever belonging to an `l`-component.
//! * [`verify`]: named cross-checks shared by the CLI and the acceptance tests.
//!
//! Numeric code is generic over the scalar: exact code over [`series::Coeff`]
//! (instantiated with [`Rational`]), floating-point code over
//! [`scalar::Real`] (instantiated with `f64`). The aliases below name the
//! instantiations the rest of the crate uses.

pub mod enumerate;
pub mod error;
pub mod expect;
pub mod logreal;
pub mod process;
pub mod scalar;
pub mod series;
pub mod verify;
pub mod wright;

pub use error::{Error, Result};

/// Exact rational number in lowest terms.
pub type Rational = num_rational::BigRational;

/// Truncated power series with exact rational coefficients.
pub type RationalSeries = series::PowerSeries<Rational>;

/// Signed log-magnitude real over `f64`.
pub type LogF64 = logreal::LogReal<f64>;

/// Saddle-point evaluation over `f64`.
pub type SaddleF64 = wright::saddle::SaddleEvaluation<f64>;
