use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matching::{match_entities, MatchCriterion, MatchStrategy};
use crate::corpus::EntityMention;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelScore {
    pub tp: usize,
    pub predicted: usize,
    pub gold: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

impl LabelScore {
    pub fn from_counts(tp: usize, predicted: usize, gold: usize) -> Self {
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, gold);
        LabelScore {
            tp,
            predicted,
            gold,
            precision,
            recall,
            f1: f1(precision, recall),
        }
    }
}

/// Unweighted means over the labels present in gold or predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroScore {
    pub labels: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub criterion: MatchCriterion,
    pub strategy: MatchStrategy,
    pub micro: LabelScore,
    #[serde(rename = "macro")]
    pub macro_avg: MacroScore,
    pub per_label: BTreeMap<String, LabelScore>,
}

#[derive(Default)]
struct Tally {
    tp: usize,
    predicted: usize,
    gold: usize,
}

/// Scores aligned `(predicted, gold)` mention lists, one pair per document
/// (or sentence). Counts are pooled over all pairs.
pub fn score_pairs<'a, I>(
    pairs: I,
    criterion: MatchCriterion,
    strategy: MatchStrategy,
) -> Result<ScoreReport>
where
    I: IntoIterator<Item = (&'a [EntityMention], &'a [EntityMention])>,
{
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    for (predicted, gold) in pairs {
        for p in predicted {
            tallies.entry(p.label.clone()).or_default().predicted += 1;
        }
        for g in gold {
            tallies.entry(g.label.clone()).or_default().gold += 1;
        }
        for (p, _) in match_entities(predicted, gold, criterion, strategy)? {
            tallies.entry(predicted[p].label.clone()).or_default().tp += 1;
        }
    }

    let per_label: BTreeMap<String, LabelScore> = tallies
        .into_iter()
        .map(|(label, t)| (label, LabelScore::from_counts(t.tp, t.predicted, t.gold)))
        .collect();
    let (tp, predicted, gold) = per_label.values().fold((0, 0, 0), |(a, b, c), s| {
        (a + s.tp, b + s.predicted, c + s.gold)
    });
    let n = per_label.len();
    let mean = |f: fn(&LabelScore) -> f64| {
        if n == 0 {
            0.0
        } else {
            per_label.values().map(f).sum::<f64>() / n as f64
        }
    };
    Ok(ScoreReport {
        criterion,
        strategy,
        micro: LabelScore::from_counts(tp, predicted, gold),
        macro_avg: MacroScore {
            labels: n,
            precision: mean(|s| s.precision),
            recall: mean(|s| s.recall),
            f1: mean(|s| s.f1),
        },
        per_label,
    })
}

/// Scores predicted against gold mentions, documents matched by id.
pub fn score(
    predicted: &BTreeMap<String, Vec<EntityMention>>,
    gold: &BTreeMap<String, Vec<EntityMention>>,
    criterion: MatchCriterion,
    strategy: MatchStrategy,
) -> Result<ScoreReport> {
    if let Some(id) = predicted
        .keys()
        .find(|k| !gold.contains_key(*k))
        .or_else(|| gold.keys().find(|k| !predicted.contains_key(*k)))
    {
        return Err(Error::UnmatchedDocument(id.clone()));
    }
    score_pairs(
        predicted
            .iter()
            .map(|(id, p)| (p.as_slice(), gold[id].as_slice())),
        criterion,
        strategy,
    )
}
