use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::counts::{build_counts, log_score, PredictionSet, TransitionCounts};
use crate::tagscheme::{count_repairs, repair_bio, TagSequence};
use crate::{Error, Result};

/// Largest search space `brute_force_merge` will enumerate.
pub const BRUTE_FORCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MergeMethod {
    #[serde(rename = "majv")]
    MajorityVote,
    #[serde(rename = "sle")]
    Sle,
}

impl MergeMethod {
    pub fn name(self) -> &'static str {
        match self {
            MergeMethod::MajorityVote => "MajV",
            MergeMethod::Sle => "SLE",
        }
    }
}

impl std::str::FromStr for MergeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "majv" | "majority" | "majority_vote" => Ok(MergeMethod::MajorityVote),
            "sle" => Ok(MergeMethod::Sle),
            other => Err(Error::Config(format!(
                "unknown merge method {other:?} (expected majv or sle)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergedPrediction {
    pub method: MergeMethod,
    /// Output after BIO repair.
    pub tags: TagSequence,
    pub raw_tags: TagSequence,
    /// Product objective of `raw_tags` in log domain; `-inf` if unsupported.
    pub log_score: f64,
    pub repairs: usize,
}

impl MergedPrediction {
    fn new(
        pred: &PredictionSet,
        counts: &TransitionCounts,
        method: MergeMethod,
        raw: &[usize],
    ) -> Self {
        let raw_tags = pred.alphabet().decode(raw);
        MergedPrediction {
            method,
            tags: repair_bio(&raw_tags),
            repairs: count_repairs(&raw_tags),
            log_score: log_score(counts, raw),
            raw_tags,
        }
    }
}

fn argmax_lowest(values: &[u32]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Per-position mode, ties to the alphabet-first tag.
pub fn majority_vote(pred: &PredictionSet) -> MergedPrediction {
    let counts = build_counts(pred);
    let raw: Vec<usize> = (0..counts.len())
        .map(|k| argmax_lowest(counts.state_vector(k)))
        .collect();
    MergedPrediction::new(pred, &counts, MergeMethod::MajorityVote, &raw)
}

/// Argmax of the product of position-specific state and transition counts.
///
/// The DP runs on exact integer products over the labels each position
/// actually received, so ties are genuine ties and resolve to the lowest
/// alphabet index at every backpointer and at the last position.
pub fn sle_merge(pred: &PredictionSet) -> Result<MergedPrediction> {
    let counts = build_counts(pred);
    let len = counts.len();
    if len == 0 {
        return Ok(MergedPrediction::new(pred, &counts, MergeMethod::Sle, &[]));
    }
    let n = counts.n_labels();
    let support: Vec<Vec<usize>> = (0..len)
        .map(|k| (0..n).filter(|&t| counts.state(k, t) > 0).collect())
        .collect();

    let mut best: Vec<Option<BigUint>> = vec![None; n];
    for &t in &support[0] {
        best[t] = Some(BigUint::from(counts.state(0, t)));
    }
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(len);
    for k in 1..len {
        let mut next: Vec<Option<BigUint>> = vec![None; n];
        let mut ptr = vec![0; n];
        for &j in &support[k] {
            let mut cell: Option<(BigUint, usize)> = None;
            for &i in &support[k - 1] {
                let (Some(prev), t) = (&best[i], counts.transition(k - 1, i, j)) else {
                    continue;
                };
                if t == 0 {
                    continue;
                }
                let v = prev * t;
                if cell.as_ref().is_none_or(|(b, _)| v > *b) {
                    cell = Some((v, i));
                }
            }
            if let Some((v, i)) = cell {
                next[j] = Some(v * counts.state(k, j));
                ptr[j] = i;
            }
        }
        best = next;
        back.push(ptr);
    }

    let mut last: Option<(&BigUint, usize)> = None;
    for (j, v) in best.iter().enumerate() {
        if let Some(v) = v {
            if last.is_none_or(|(b, _)| v > b) {
                last = Some((v, j));
            }
        }
    }
    let (_, mut cur) = last.ok_or_else(|| {
        Error::Invariant("no supported sequence in a non-empty prediction set".into())
    })?;
    let mut path = vec![0; len];
    path[len - 1] = cur;
    for k in (1..len).rev() {
        cur = back[k - 1][cur];
        path[k - 1] = cur;
    }
    Ok(MergedPrediction::new(
        pred,
        &counts,
        MergeMethod::Sle,
        &path,
    ))
}

fn product(counts: &TransitionCounts, tags: &[usize]) -> BigUint {
    let mut p = BigUint::from(1u32);
    for (k, &t) in tags.iter().enumerate() {
        p *= counts.state(k, t);
        if k > 0 {
            p *= counts.transition(k - 1, tags[k - 1], t);
        }
    }
    p
}

/// Exhaustive argmax over all `|alphabet|^L` sequences with the same
/// tie-break as `sle_merge`: among maximal products, the sequence that is
/// smallest when compared from the last position backwards.
pub fn brute_force_merge(pred: &PredictionSet) -> Result<MergedPrediction> {
    let n = pred.alphabet().len();
    let len = pred.len();
    let size = (n as f64).powi(len as i32);
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::GuardExceeded {
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let counts = build_counts(pred);
    // odometer with the last position most significant: enumeration order
    // is then exactly the tie-break order, so the first maximum wins
    let mut cur = vec![0usize; len];
    let mut best = (product(&counts, &cur), cur.clone());
    loop {
        let mut k = 0;
        while k < len && cur[k] + 1 == n {
            cur[k] = 0;
            k += 1;
        }
        if k == len {
            break;
        }
        cur[k] += 1;
        let p = product(&counts, &cur);
        if p > best.0 {
            best = (p, cur.clone());
        }
    }
    Ok(MergedPrediction::new(
        pred,
        &counts,
        MergeMethod::Sle,
        &best.1,
    ))
}

pub fn merge(pred: &PredictionSet, method: MergeMethod) -> Result<MergedPrediction> {
    match method {
        MergeMethod::MajorityVote => Ok(majority_vote(pred)),
        MergeMethod::Sle => sle_merge(pred),
    }
}
