//! Averaged structured perceptron over hand-crafted features, decoded with
//! first-order Viterbi.

mod features;
mod model;
mod train;

pub use features::{word_shape, FeatureExtractor};
pub use model::{TaggerModel, MODEL_FORMAT, MODEL_VERSION};
pub use train::{train, EpochReport, TrainConfig, TrainReport};

use crate::corpus::TaggedSentence;
use crate::tagscheme::TagSequence;

/// Decodes every sentence, preserving order.
pub fn predict(model: &TaggerModel, sentences: &[TaggedSentence]) -> Vec<TagSequence> {
    sentences
        .iter()
        .map(|s| model.decode(&s.surfaces()))
        .collect()
}
