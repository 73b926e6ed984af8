use serde::{Deserialize, Serialize};

use crate::corpus::{check_no_overlap, EntityMention};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchCriterion {
    /// Same label, identical boundaries.
    Exact,
    /// Same label, overlapping character ranges.
    Partial,
}

impl MatchCriterion {
    pub fn accepts(self, predicted: &EntityMention, gold: &EntityMention) -> bool {
        predicted.label == gold.label
            && match self {
                MatchCriterion::Exact => predicted.start == gold.start && predicted.end == gold.end,
                MatchCriterion::Partial => predicted.overlaps(gold),
            }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchStrategy {
    /// Predictions in canonical order each take the first free gold mention.
    #[default]
    Greedy,
    /// A maximum-cardinality one-to-one matching.
    Maximum,
}

fn canonical_order(mentions: &[EntityMention]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..mentions.len()).collect();
    idx.sort_by(|&a, &b| {
        let (x, y) = (&mentions[a], &mentions[b]);
        (x.start, x.end, &x.label).cmp(&(y.start, y.end, &y.label))
    });
    idx
}

/// One-to-one matching of predicted to gold mentions of one document.
/// Returns `(predicted index, gold index)` pairs sorted by predicted index.
pub fn match_entities(
    predicted: &[EntityMention],
    gold: &[EntityMention],
    criterion: MatchCriterion,
    strategy: MatchStrategy,
) -> Result<Vec<(usize, usize)>> {
    check_no_overlap(predicted)?;
    check_no_overlap(gold)?;
    let p_order = canonical_order(predicted);
    let g_order = canonical_order(gold);

    let mut pairs = match strategy {
        MatchStrategy::Greedy => {
            let mut used = vec![false; gold.len()];
            let mut pairs = Vec::new();
            for &p in &p_order {
                if let Some(&g) = g_order
                    .iter()
                    .find(|&&g| !used[g] && criterion.accepts(&predicted[p], &gold[g]))
                {
                    used[g] = true;
                    pairs.push((p, g));
                }
            }
            pairs
        }
        MatchStrategy::Maximum => maximum_matching(predicted, gold, &p_order, &g_order, criterion),
    };
    pairs.sort_unstable();
    Ok(pairs)
}

/// Augmenting-path bipartite matching, visiting candidates in canonical order.
fn maximum_matching(
    predicted: &[EntityMention],
    gold: &[EntityMention],
    p_order: &[usize],
    g_order: &[usize],
    criterion: MatchCriterion,
) -> Vec<(usize, usize)> {
    let adjacency: Vec<Vec<usize>> = (0..predicted.len())
        .map(|p| {
            g_order
                .iter()
                .copied()
                .filter(|&g| criterion.accepts(&predicted[p], &gold[g]))
                .collect()
        })
        .collect();
    let mut gold_owner: Vec<Option<usize>> = vec![None; gold.len()];

    fn augment(
        p: usize,
        adj: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &g in &adj[p] {
            if seen[g] {
                continue;
            }
            seen[g] = true;
            if owner[g].is_none_or(|q| augment(q, adj, owner, seen)) {
                owner[g] = Some(p);
                return true;
            }
        }
        false
    }

    for &p in p_order {
        let mut seen = vec![false; gold.len()];
        augment(p, &adjacency, &mut gold_owner, &mut seen);
    }
    gold_owner
        .iter()
        .enumerate()
        .filter_map(|(g, p)| p.map(|p| (p, g)))
        .collect()
}
