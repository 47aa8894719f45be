//! Exact Baker-Campbell-Hausdorff expansion on two generators, Hall-Lyndon
//! basis projection, explicit quasi-Banach convergence constants, and a
//! desk-scale numeric validation harness.
//!
//! Layout:
//! - [`words`]: Lyndon words, standard factorization, bracketing trees, Witt
//!   dimensions;
//! - [`series`]: truncated formal series over Q<X,Y> with exact coefficients;
//! - [`bch`]: the expansion log(e^X e^Y), coefficient sums, Lie projection,
//!   Catalan majorants;
//! - [`bounds`]: closed-form constants (Aoki-Rolewicz exponent, convergence
//!   radii, Lipschitz and resolvent bounds);
//! - [`numeric`]: dense-matrix validation with quasi-norms, group-law and
//!   inverse-solver checks, inequality samplers;
//! - [`analysis`]: geometric-decay fits with bootstrap confidence intervals;
//! - [`decimal`]: deterministic exact-rational rendering for tables.

pub mod analysis;
pub mod bch;
pub mod bounds;
pub mod decimal;
pub mod error;
pub mod numeric;
pub mod verify;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use series::{FreeSeries, Rational};
pub use words::{BracketTree, Letter, Word};
