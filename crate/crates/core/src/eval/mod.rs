//! Span-level scoring under exact and partial matching, and token-level
//! confusion tables.

mod confusion;
mod matching;
mod score;

pub use confusion::{render_confusions, token_confusions, ConfusionRow, ConfusionTable};
pub use matching::{match_entities, MatchCriterion, MatchStrategy};
pub use score::{f1, score, score_pairs, LabelScore, MacroScore, ScoreReport};

use crate::corpus::{EntityMention, TaggedSentence};
use crate::tagscheme::{repair_bio, spans_from_tags, TagSequence};
use crate::{Error, Result};

/// Scores predicted tag sequences against tagged sentences, each sentence
/// treated as its own document. Predictions are BIO-repaired first.
pub fn score_sentences(
    predicted: &[TagSequence],
    gold: &[TaggedSentence],
    criterion: MatchCriterion,
) -> Result<ScoreReport> {
    if predicted.len() != gold.len() {
        return Err(Error::LengthMismatch {
            expected: gold.len(),
            found: predicted.len(),
        });
    }
    let mut pairs: Vec<(Vec<EntityMention>, Vec<EntityMention>)> = Vec::with_capacity(gold.len());
    for (p, g) in predicted.iter().zip(gold) {
        pairs.push((
            spans_from_tags(&repair_bio(p), &g.tokens)?,
            spans_from_tags(&repair_bio(&g.tags), &g.tokens)?,
        ));
    }
    score_pairs(
        pairs.iter().map(|(p, g)| (p.as_slice(), g.as_slice())),
        criterion,
        MatchStrategy::Greedy,
    )
}
