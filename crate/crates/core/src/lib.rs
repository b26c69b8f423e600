//! Arbitrary-precision evaluation of Gaussian-weighted Mathieu-type series
//!
//! ```text
//! S(a; λ) = Σ_{n≥1} n^γ e^{-λ n²/a²} / (n² + a²)^μ
//! ```
//!
//! together with their large-`a` expansions: the algebraic part, the
//! exponentially small corrections, and the truncation machinery around them.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command-line
//! front end and parallel sweeps live in the companion `mathieu-cli` crate.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod expansion;
pub mod oracle;
pub mod quadrature;
pub mod rational;
pub mod specfun;

pub use arith::{Complex, Context, Real, Scalar, MIN_DIGITS};
pub use error::{Error, Result};
