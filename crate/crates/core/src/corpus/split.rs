use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Train,
    Validation,
}

/// A seeded train/validation partition of document ids.
///
/// JSON: `{"seed": 7, "train_fraction": 0.8, "assignment": {"<id>": "train" | "validation", ...}}`
/// with ids in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub seed: u64,
    pub train_fraction: f64,
    pub assignment: BTreeMap<String, Side>,
}

impl SplitSpec {
    pub fn ids(&self, side: Side) -> Vec<&str> {
        self.assignment
            .iter()
            .filter(|(_, s)| **s == side)
            .map(|(id, _)| id.as_str())
            .collect()
    }

    pub fn train_ids(&self) -> Vec<&str> {
        self.ids(Side::Train)
    }

    pub fn validation_ids(&self) -> Vec<&str> {
        self.ids(Side::Validation)
    }
}

/// Shuffles the sorted, de-duplicated ids with ChaCha8 seeded by `seed` and
/// puts the first `round(train_fraction * n)` into train.
pub fn generate_split<S: AsRef<str>>(
    doc_ids: &[S],
    seed: u64,
    train_fraction: f64,
) -> Result<SplitSpec> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Split(format!(
            "train fraction {train_fraction} is not in (0, 1)"
        )));
    }
    let mut ids: Vec<&str> = doc_ids.iter().map(AsRef::as_ref).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() {
        return Err(Error::Split("no documents to split".to_string()));
    }
    let n_train = (train_fraction * ids.len() as f64).round() as usize;
    if n_train == 0 || n_train == ids.len() {
        return Err(Error::Split(format!(
            "fraction {train_fraction} of {} documents leaves one side empty",
            ids.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    let assignment = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            (
                id.to_string(),
                if i < n_train {
                    Side::Train
                } else {
                    Side::Validation
                },
            )
        })
        .collect();
    Ok(SplitSpec {
        seed,
        train_fraction,
        assignment,
    })
}

/// Index pairs of splits with identical assignments.
pub fn split_collisions(splits: &[SplitSpec]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..splits.len() {
        for j in i + 1..splits.len() {
            if splits[i].assignment == splits[j].assignment {
                out.push((i, j));
            }
        }
    }
    out
}
