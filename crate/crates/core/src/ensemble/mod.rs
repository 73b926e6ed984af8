//! Merging aligned predictions from several taggers.

mod corpus;
mod counts;
mod merge;

pub use corpus::{merge_corpus, MergeRecord, MergedCorpus};
pub use counts::{build_counts, is_supported, log_score, PredictionSet, TransitionCounts};
pub use merge::{
    brute_force_merge, majority_vote, merge, sle_merge, MergeMethod, MergedPrediction,
    BRUTE_FORCE_LIMIT,
};
