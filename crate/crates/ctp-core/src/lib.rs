//! Exact polynomial arithmetic, lattice-path triangles, production matrices,
//! continued fractions and exponential Riordan arrays, with coefficientwise
//! total-positivity checks.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod cfrac;
pub mod error;
pub mod families;
pub mod matrix;
pub mod paths;
pub mod poly;
pub mod production;
pub mod riordan;
pub mod series;
pub mod tp;

pub use error::{Error, Result};
pub use matrix::PolyMatrix;
pub use poly::{Monomial, MultiPoly, Rational, Registry, VarId};
pub use series::PowerSeries;
