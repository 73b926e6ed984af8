use crate::tagscheme::{LabelAlphabet, Tag, TagSequence};
use crate::{Error, Result};

/// N aligned predictions for one sentence, encoded against an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionSet {
    alphabet: LabelAlphabet,
    sequences: Vec<Vec<usize>>,
}

impl PredictionSet {
    /// `alphabet = None` uses the union of the observed tags (plus `O`).
    pub fn new(sequences: &[TagSequence], alphabet: Option<LabelAlphabet>) -> Result<Self> {
        let Some(first) = sequences.first() else {
            return Err(Error::PredictionSet(
                "at least one model is required".into(),
            ));
        };
        if let Some((m, s)) = sequences
            .iter()
            .enumerate()
            .find(|(_, s)| s.len() != first.len())
        {
            return Err(Error::PredictionSet(format!(
                "model {m} has {} tags, model 0 has {}",
                s.len(),
                first.len()
            )));
        }
        let alphabet =
            alphabet.unwrap_or_else(|| LabelAlphabet::new(sequences.iter().flatten().cloned()));
        let sequences = sequences
            .iter()
            .map(|s| alphabet.encode(s))
            .collect::<Result<_>>()?;
        Ok(PredictionSet {
            alphabet,
            sequences,
        })
    }

    pub fn alphabet(&self) -> &LabelAlphabet {
        &self.alphabet
    }

    pub fn n_models(&self) -> usize {
        self.sequences.len()
    }

    /// Sentence length L.
    pub fn len(&self) -> usize {
        self.sequences[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encoded(&self) -> &[Vec<usize>] {
        &self.sequences
    }

    pub fn sequence(&self, model: usize) -> TagSequence {
        self.alphabet.decode(&self.sequences[model])
    }

    pub fn tag(&self, index: usize) -> &Tag {
        self.alphabet.tag(index)
    }
}

/// Position-specific label counts over the N predictions: a state vector
/// `U^k` for every position and a transition matrix `T^k` between positions
/// `k` and `k+1`. Positions are 0-based here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCounts {
    n_models: usize,
    n_labels: usize,
    state: Vec<Vec<u32>>,
    // L - 1 matrices, [prev * n_labels + next]
    transition: Vec<Vec<u32>>,
}

impl TransitionCounts {
    pub fn n_models(&self) -> usize {
        self.n_models
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn len(&self) -> usize {
        self.state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.is_empty()
    }

    /// `U^k(t)`
    pub fn state(&self, k: usize, t: usize) -> u32 {
        self.state[k][t]
    }

    /// `T^k(prev, next)`: models with `prev` at `k` and `next` at `k + 1`.
    pub fn transition(&self, k: usize, prev: usize, next: usize) -> u32 {
        self.transition[k][prev * self.n_labels + next]
    }

    pub fn state_vector(&self, k: usize) -> &[u32] {
        &self.state[k]
    }

    pub fn transition_matrix(&self, k: usize) -> &[u32] {
        &self.transition[k]
    }
}

pub fn build_counts(pred: &PredictionSet) -> TransitionCounts {
    let n = pred.alphabet().len();
    let len = pred.len();
    let mut state = vec![vec![0u32; n]; len];
    let mut transition = vec![vec![0u32; n * n]; len.saturating_sub(1)];
    for seq in pred.encoded() {
        for (k, &t) in seq.iter().enumerate() {
            state[k][t] += 1;
            if k + 1 < len {
                transition[k][t * n + seq[k + 1]] += 1;
            }
        }
    }
    TransitionCounts {
        n_models: pred.n_models(),
        n_labels: n,
        state,
        transition,
    }
}

fn ln(count: u32) -> f64 {
    if count == 0 {
        f64::NEG_INFINITY
    } else {
        f64::from(count).ln()
    }
}

/// `sum_k ln U^k(y_k) + sum_k ln T^k(y_k, y_k+1)` for an encoded sequence,
/// accumulated left to right (`-inf` when any factor is zero).
pub fn log_score(counts: &TransitionCounts, tags: &[usize]) -> f64 {
    let mut score = 0.0;
    for (k, &t) in tags.iter().enumerate() {
        score = if k == 0 {
            ln(counts.state(0, t))
        } else {
            score + ln(counts.transition(k - 1, tags[k - 1], t)) + ln(counts.state(k, t))
        };
    }
    score
}

/// Whether every label and transition of `tags` was produced by some model.
pub fn is_supported(counts: &TransitionCounts, tags: &[usize]) -> bool {
    tags.iter().enumerate().all(|(k, &t)| {
        counts.state(k, t) >= 1 && (k == 0 || counts.transition(k - 1, tags[k - 1], t) >= 1)
    })
}
