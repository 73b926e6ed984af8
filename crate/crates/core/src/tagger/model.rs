use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::features::FeatureExtractor;
use crate::tagscheme::{is_legal_transition, LabelAlphabet, TagSequence};
use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "wetlab-ner/perceptron";
pub const MODEL_VERSION: u32 = 1;

/// Linear-chain tagger: per-(feature, tag) emission weights and per-(tag, tag)
/// transition weights. A sequence scores
/// `sum_k emission(x_k, y_k) + sum_k transition(y_k, y_k+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggerModel {
    alphabet: LabelAlphabet,
    extractor: FeatureExtractor,
    features: Vec<String>,
    feature_ids: HashMap<String, usize>,
    // features.len() x alphabet.len(), row-major
    emission: Vec<f64>,
    // alphabet.len() x alphabet.len(), [prev][next]
    transition: Vec<f64>,
    averaged: bool,
    enforce_bio: bool,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    window: usize,
    averaged: bool,
    enforce_bio: bool,
    alphabet: LabelAlphabet,
    features: Vec<String>,
    emission: Vec<Vec<f64>>,
    transition: Vec<Vec<f64>>,
}

impl TaggerModel {
    pub fn from_parts(
        alphabet: LabelAlphabet,
        extractor: FeatureExtractor,
        features: Vec<String>,
        emission: Vec<f64>,
        transition: Vec<f64>,
        averaged: bool,
        enforce_bio: bool,
    ) -> Result<Self> {
        let s = alphabet.len();
        if s == 0 {
            return Err(Error::Model("empty label alphabet".into()));
        }
        if emission.len() != features.len() * s || transition.len() != s * s {
            return Err(Error::Model(format!(
                "weight arrays have {} / {} entries, expected {} / {}",
                emission.len(),
                transition.len(),
                features.len() * s,
                s * s
            )));
        }
        if emission.iter().chain(&transition).any(|w| !w.is_finite()) {
            return Err(Error::Model("non-finite weight".into()));
        }
        let feature_ids: HashMap<String, usize> = features
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        if feature_ids.len() != features.len() {
            return Err(Error::Model("duplicate feature names".into()));
        }
        Ok(TaggerModel {
            alphabet,
            extractor,
            features,
            feature_ids,
            emission,
            transition,
            averaged,
            enforce_bio,
        })
    }

    pub fn alphabet(&self) -> &LabelAlphabet {
        &self.alphabet
    }

    pub fn extractor(&self) -> FeatureExtractor {
        self.extractor
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn is_averaged(&self) -> bool {
        self.averaged
    }

    pub fn enforces_bio(&self) -> bool {
        self.enforce_bio
    }

    pub fn transition(&self, prev: usize, next: usize) -> f64 {
        self.transition[prev * self.alphabet.len() + next]
    }

    /// Known feature ids per token; unknown features are dropped.
    pub fn feature_ids(&self, surfaces: &[&str]) -> Vec<Vec<usize>> {
        (0..surfaces.len())
            .map(|i| {
                self.extractor
                    .extract(surfaces, i)
                    .iter()
                    .filter_map(|f| self.feature_ids.get(f).copied())
                    .collect()
            })
            .collect()
    }

    /// `L x |alphabet|` matrix of emission scores.
    pub fn emission_scores(&self, surfaces: &[&str]) -> Vec<Vec<f64>> {
        emission_matrix(
            &self.feature_ids(surfaces),
            &self.emission,
            self.alphabet.len(),
        )
    }

    /// Score of a tag sequence (by alphabet index).
    pub fn sequence_score(&self, surfaces: &[&str], tags: &[usize]) -> f64 {
        self.path_score(&self.emission_scores(surfaces), tags)
    }

    /// Score of a path over precomputed emission scores, summed left to
    /// right in the same order the decoder uses.
    pub fn path_score(&self, emission: &[Vec<f64>], tags: &[usize]) -> f64 {
        let mut score = 0.0;
        for (k, &t) in tags.iter().enumerate() {
            score = if k == 0 {
                emission[0][t]
            } else {
                score + self.transition(tags[k - 1], t) + emission[k][t]
            };
        }
        score
    }

    pub fn decode_indices(&self, surfaces: &[&str]) -> Vec<usize> {
        let emission = self.emission_scores(surfaces);
        let constraints = self
            .enforce_bio
            .then(|| BioConstraints::new(&self.alphabet));
        viterbi(&emission, &self.transition, constraints.as_ref()).0
    }

    /// Viterbi decode of one sentence.
    pub fn decode(&self, surfaces: &[&str]) -> TagSequence {
        self.alphabet.decode(&self.decode_indices(surfaces))
    }

    pub fn to_json(&self) -> Result<String> {
        let s = self.alphabet.len();
        let file = ModelFile {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            window: self.extractor.window,
            averaged: self.averaged,
            enforce_bio: self.enforce_bio,
            alphabet: self.alphabet.clone(),
            features: self.features.clone(),
            emission: self.emission.chunks(s).map(<[f64]>::to_vec).collect(),
            transition: self.transition.chunks(s).map(<[f64]>::to_vec).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(json)?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(Error::Model(format!(
                "unsupported model format {} v{}",
                file.format, file.version
            )));
        }
        let s = file.alphabet.len();
        if file
            .emission
            .iter()
            .chain(&file.transition)
            .any(|row| row.len() != s)
        {
            return Err(Error::Model(
                "weight row length does not match the alphabet".into(),
            ));
        }
        Self::from_parts(
            file.alphabet,
            FeatureExtractor {
                window: file.window,
            },
            file.features,
            file.emission.concat(),
            file.transition.concat(),
            file.averaged,
            file.enforce_bio,
        )
    }
}

pub(super) fn emission_matrix(ids: &[Vec<usize>], weights: &[f64], n_tags: usize) -> Vec<Vec<f64>> {
    ids.iter()
        .map(|token| {
            let mut row = vec![0.0; n_tags];
            for &f in token {
                for (t, w) in row.iter_mut().zip(&weights[f * n_tags..(f + 1) * n_tags]) {
                    *t += *w;
                }
            }
            row
        })
        .collect()
}

/// Which starts and transitions are legal BIO.
pub(super) struct BioConstraints {
    start: Vec<bool>,
    // [prev * n + next]
    transition: Vec<bool>,
}

impl BioConstraints {
    pub(super) fn new(alphabet: &LabelAlphabet) -> Self {
        let tags = alphabet.tags();
        BioConstraints {
            start: tags.iter().map(|t| is_legal_transition(None, t)).collect(),
            transition: tags
                .iter()
                .flat_map(|p| tags.iter().map(move |n| is_legal_transition(Some(p), n)))
                .collect(),
        }
    }
}

/// Max-scoring path over `emission` (`L x n`) and `transition` (`n x n`).
/// Ties go to the lowest state index, both at every backpointer and at the
/// final position. Returns the path and its score; empty input gives `([], 0)`.
pub(super) fn viterbi(
    emission: &[Vec<f64>],
    transition: &[f64],
    constraints: Option<&BioConstraints>,
) -> (Vec<usize>, f64) {
    let Some(first) = emission.first() else {
        return (Vec::new(), 0.0);
    };
    let n = first.len();
    let mut best: Vec<f64> = (0..n)
        .map(|j| match constraints {
            Some(c) if !c.start[j] => f64::NEG_INFINITY,
            _ => first[j],
        })
        .collect();
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(emission.len());

    for row in &emission[1..] {
        let mut next = vec![f64::NEG_INFINITY; n];
        let mut ptr = vec![0usize; n];
        for j in 0..n {
            let mut chosen: Option<(usize, f64)> = None;
            for i in 0..n {
                if best[i] == f64::NEG_INFINITY
                    || constraints.is_some_and(|c| !c.transition[i * n + j])
                {
                    continue;
                }
                let v = best[i] + transition[i * n + j] + row[j];
                if chosen.is_none_or(|(_, b)| v > b) {
                    chosen = Some((i, v));
                }
            }
            if let Some((i, v)) = chosen {
                next[j] = v;
                ptr[j] = i;
            }
        }
        back.push(ptr);
        best = next;
    }

    let mut last = 0;
    for j in 1..n {
        if best[j] > best[last] {
            last = j;
        }
    }
    let score = best[last];
    let mut path = vec![last; emission.len()];
    for k in (0..back.len()).rev() {
        path[k] = back[k][path[k + 1]];
    }
    (path, score)
}
