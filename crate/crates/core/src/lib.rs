//! Index calculus for Ohno-type relations among multiple zeta-star values
//! and their finite (mod p) counterparts.
//!
//! The crate is organised bottom-up:
//!
//! * [`index`]: indices, the two dualities, `R`, `P` and componentwise sums.
//! * [`combinatorics`]: binomial convention, Ohno coefficients, compositions.
//! * [`algebra`]: rational linear combinations with shuffle and harmonic products.
//! * [`relations`]: every relation family as a pair of symbolic sides.
//! * [`numeric`]: real evaluation of ζ and ζ* by nested truncated series.
//! * [`modp`]: exact evaluation of ζ_A, ζ_A* and Bernoulli numbers mod p.
//! * [`report`] and [`cli`]: verification sweeps and JSON reports.

pub mod algebra;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod index;
pub mod modp;
pub mod numeric;
pub mod relations;
pub mod report;

pub use algebra::{LinComb, LinearMap, Term};
pub use error::{Error, Result};
pub use index::Index;
