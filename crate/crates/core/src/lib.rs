//! Exact computations for 2-nondegenerate CR model geometries.
//!
//! Everything here runs over Gaussian rationals ([`scalar::Scalar`]); there is no floating
//! point anywhere in the library.

pub mod bch;
pub mod classify;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod models;
pub mod prolong;
pub mod rootsys;
pub mod scalar;

pub use error::Error;
pub use scalar::{Rational, Scalar};

pub type Result<T> = std::result::Result<T, Error>;
