//! Hochschild and negative cyclic homology of Sullivan models through the
//! small models 𝓛 = ∧(V ⊕ V̄) and 𝓔 = 𝓛[u], BV exactness, the word-length
//! spectral sequences, and string brackets.
//!
//! Grading is cohomological throughout: u has degree 2 and a bar generator
//! v̄ has degree |v| − 1. All arithmetic is over exact rationals.

pub mod algebra;
pub mod appendix;
pub mod bv_exact;
pub mod emss;
pub mod homology;
pub mod linalg;
pub mod loop_models;
pub mod model_io;
pub mod models;
pub mod string_ops;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("d^2 != 0 on generator {generator}: d(d {generator}) = {value}")]
    NotSquareZero { generator: String, value: String },
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("base generator {0} has degree < 2; the model is not simply connected")]
    NotSimplyConnected(String),
    #[error("not a chain map on the window: {0}")]
    NotChainMap(String),
    #[error("{0}")]
    Domain(String),
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

impl Error {
    /// Exit status for the command line: 2 flags a failed theorem check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Consistency(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
