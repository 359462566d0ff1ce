//! Finite machinery for sofic and strongly sofic monoids.
//!
//! * [`monoid`]: concrete monoids (finite tables, bicyclic, integer polynomials
//!   under composition, free, additive, products) and finite fragments.
//! * [`transformation`]: the symmetric monoid `Map(D)` with the Hamming metric.
//! * [`chart`]: finite approximation charts `(D, σ|_K)`, quality reports and
//!   the standard chart constructors.
//! * [`shift`]: subshifts of finite type and cellular automata over monoids.
//! * [`entropy`]: per-chart sofic topological entropy of subshifts.
//! * [`cli`]: the `soficlab` command line.

pub mod chart;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod monoid;
pub mod rational;
pub mod shift;
pub mod transformation;

pub use error::{Error, Result};
