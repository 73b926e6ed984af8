//! Building blocks for entity recognition over wet-lab protocol corpora.
//!
//! * [`corpus`]: protocol documents, CoNLL and BRAT standoff I/O, tokenization,
//!   mention/tag alignment, statistics and seeded train/validation splits.
//! * [`tagscheme`]: the BIO tag algebra shared by every other module.
//! * [`tagger`]: an averaged structured perceptron with Viterbi decoding.
//! * [`ensemble`]: majority voting and structured learning ensembling (SLE)
//!   over position-specific transition counts, plus an exhaustive oracle.
//! * [`eval`]: exact/partial span matching, micro/macro F1 and token confusions.
//!
//! Every operation is a pure function of its inputs; the filesystem lives in
//! the CLI crate.

pub mod corpus;
pub mod ensemble;
mod error;
pub mod eval;
pub mod tagger;
pub mod tagscheme;

pub use error::{Error, Result};
