//! Symbolic dynamics of MSS-sequences (U-sequences) of unimodal maps.

pub mod composition;
pub mod counting;
pub mod error;
pub mod generators;
pub mod locator;
pub mod structure;
pub mod symbolic;

pub use error::{Error, Result};
pub use structure::{block_decompose, is_mss_structured, BlockForm, FailingRule, StructuredVerdict};
pub use symbolic::{
    beta, is_shift_maximal, is_shift_maximal_lambda, lambda_of, parity_lex_cmp, shift, Lambda,
    Sequence, Symbol, Word,
};
