//! Gaussian-integer arithmetic, factorization and descent machinery for
//! the quartics `aX^4 + bX^2Y^2 + cY^4 = dZ^2` over Z[i].

// Errors carry the offending Gaussian integers by value.
#![allow(clippy::result_large_err)]

pub mod error;
pub mod conic;
pub mod descent;
pub mod factor;
pub mod gaussian;
pub mod resolvent;
pub mod search;
pub mod selftest;
pub mod small;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::{gcd, GaussianInt, UnitExp};
