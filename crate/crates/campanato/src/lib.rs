//! Numerical toolkit for analytic Campanato spaces on the unit disk.
//!
//! The crate computes the classical seminorm family (Campanato oscillation,
//! Mobius-invariant integrals, Littlewood-Paley square functions, Bloch
//! norms), Carleson-measure quantities including a level-set distance
//! estimate to the Bloch scale, and composition-operator diagnostics built on
//! the Nevanlinna counting function. Everything is driven by closed-form
//! function specifications so that derivatives are exact and quadrature error
//! is the only approximation in play.

pub mod carleson;
pub mod composition;
pub mod config;
pub mod counting;
pub mod error;
pub mod fourier;
pub mod function;
pub mod grid;
pub mod mobius;
pub mod roots;
pub mod selfmap;
pub mod seminorm;
pub mod tolerances;

pub(crate) mod serde_complex;

pub use config::GridConfig;
pub use error::{Error, Result};
pub use function::FunctionSpec;
pub use mobius::MobiusMap;
pub use selfmap::SelfMapSpec;
