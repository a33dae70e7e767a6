//! Ladder-operator algebra of the three-dimensional isotropic oscillator at
//! fixed orbital momentum: su(1,1) and su(2) generators acting on sparse
//! state vectors, Barut-Girardello and Perelomov coherent states, quadrature
//! squeezing, and time evolution.
//!
//! Units are dimensionless with λ = 1 except where a time axis is involved.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod coherent;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod observables;
pub mod operators;
pub mod par;
pub mod quad;
pub mod specfun;
pub mod statespace;

pub use error::{Error, Result};
pub use grid::GridResult;
pub use operators::OpKind;
pub use par::Exec;
pub use specfun::SeriesControl;
pub use statespace::{QNums, StateVector};

/// Version string stamped into output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
