use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::document::TaggedDocument;
use crate::tagscheme::Tag;

/// Dataset statistics. Serializes with a fixed key order:
///
/// ```json
/// {"protocols": 3, "sentences": 12, "tokens": 80,
///  "tag_counts": {"B-Action": 5, ..., "O": 40},
///  "entity_counts": {"Action": 5, ...},
///  "vocabulary": 51,
///  "oov": {"types": 4, "tokens": 6}}   // null without a reference
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub protocols: usize,
    pub sentences: usize,
    pub tokens: usize,
    /// Token count per tag, including `O`.
    pub tag_counts: BTreeMap<String, usize>,
    /// Mention count per entity type (one per `B-` tag).
    pub entity_counts: BTreeMap<String, usize>,
    /// Distinct token surfaces (case-sensitive).
    pub vocabulary: usize,
    pub oov: Option<OovCounts>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OovCounts {
    /// Distinct surfaces absent from the reference vocabulary.
    pub types: usize,
    /// Token occurrences of those surfaces.
    pub tokens: usize,
}

fn vocabulary(corpus: &[TaggedDocument]) -> BTreeSet<&str> {
    corpus
        .iter()
        .flat_map(|d| &d.sentences)
        .flat_map(|s| &s.tokens)
        .map(|t| t.surface.as_str())
        .collect()
}

pub fn corpus_stats(
    corpus: &[TaggedDocument],
    reference: Option<&[TaggedDocument]>,
) -> StatsReport {
    let mut tag_counts = BTreeMap::new();
    let mut entity_counts = BTreeMap::new();
    let mut sentences = 0;
    let mut tokens = 0;
    for sentence in corpus.iter().flat_map(|d| &d.sentences) {
        sentences += 1;
        tokens += sentence.tokens.len();
        for tag in &sentence.tags {
            *tag_counts.entry(tag.to_string()).or_insert(0) += 1;
            if let Tag::B(label) = tag {
                *entity_counts.entry(label.clone()).or_insert(0) += 1;
            }
        }
    }
    let vocab = vocabulary(corpus);
    let oov = reference.map(|r| {
        let known = vocabulary(r);
        let missing: BTreeSet<&str> = vocab.difference(&known).copied().collect();
        let tokens = corpus
            .iter()
            .flat_map(|d| &d.sentences)
            .flat_map(|s| &s.tokens)
            .filter(|t| missing.contains(t.surface.as_str()))
            .count();
        OovCounts {
            types: missing.len(),
            tokens,
        }
    });
    StatsReport {
        protocols: corpus.len(),
        sentences,
        tokens,
        tag_counts,
        entity_counts,
        vocabulary: vocab.len(),
        oov,
    }
}
