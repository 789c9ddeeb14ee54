//! Exact arithmetic for Lah-Bell polynomials weighted by a random variable.
//!
//! Classical Lah numbers `L(n, k)` count partitions of an n-set into k
//! nonempty ordered blocks, and the Lah-Bell polynomial is their row
//! generating polynomial. This crate generalizes both: given a random
//! variable `Y` described by its rising-factorial moments `E[<Y>_n]`, it
//! computes the Y-weighted Lah numbers `L_Y(n, k)` and the corresponding
//! polynomials `B_n(x) = sum_k L_Y(n, k) x^k`, entirely over arbitrary
//! precision rationals. Taking `Y = 1` recovers the classical objects.
//!
//! The crate is organized bottom-up:
//!
//! - [`rational`]: exact scalars, factorials, binomial coefficients
//! - [`poly`]: dense univariate polynomials over [`rational::Rational`]
//! - [`series`]: truncated power series, used for generating-function checks
//! - [`classical`]: Lah / Stirling / Bell triangles and partial Bell
//!   polynomials in the unweighted setting
//! - [`dist`]: distribution descriptions and their moment profiles
//! - [`problah`]: the weighted triangle, polynomials, and alternate
//!   computation routes
//! - [`identity`]: machine checks of the identities relating all routes
//! - [`montecarlo`]: sampling cross-checks of the exact values
//!
//! Every identity check compares two independently computed exact values, so
//! a pass is an equality of rationals, not a float comparison within
//! tolerance. The single exception is the Dobinski-style series evaluation,
//! which is a float limit by nature and carries an explicit error bound.

pub mod classical;
pub mod dist;
mod error;
pub mod identity;
pub mod montecarlo;
pub mod poly;
pub mod problah;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use rational::Rational;
