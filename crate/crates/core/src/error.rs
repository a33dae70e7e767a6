use thiserror::Error;

use crate::operators::OpKind;
use crate::statespace::QNums;

/// Errors raised anywhere in the library.
///
/// The CLI maps these onto exit codes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("series for {what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("{op:?} applied to |s={}, l={}> leaves the physical lattice", ket.s, ket.ell)]
    Unphysical { op: OpKind, ket: QNums },

    #[error("state mixes orbital numbers {first} and {second}; a single-l state is required")]
    MixedEll { first: u32, second: u32 },

    #[error("vertical hierarchy needs an explicit truncation")]
    MissingTruncation,

    #[error("unknown or unsupported Dicke-like case {0}")]
    UnknownCase(String),

    #[error("amplitudes not normalized: squared norm {0}")]
    Normalization(f64),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// 3 for non-convergence, 2 for every other numerical or domain failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
