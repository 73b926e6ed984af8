use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::FeatureExtractor;
use super::model::{emission_matrix, viterbi, BioConstraints, TaggerModel};
use crate::corpus::TaggedSentence;
use crate::eval::{score_sentences, MatchCriterion};
use crate::tagscheme::LabelAlphabet;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub max_epochs: usize,
    /// Epochs without a validation improvement before stopping.
    pub patience: usize,
    pub seed: u64,
    pub enforce_bio: bool,
    pub window: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 30,
            patience: 3,
            seed: 0,
            enforce_bio: true,
            window: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochReport {
    pub epoch: usize,
    /// Sentences whose decode differed from gold (each triggered one update).
    pub updates: usize,
    pub validation_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub epochs: Vec<EpochReport>,
    pub best_epoch: usize,
    pub best_validation_f1: f64,
}

/// Weights plus the running sums needed for averaging: the average after `c`
/// steps is `w - u / c`, where `u` accumulates `step * delta`.
struct Averaged {
    w: Vec<f64>,
    u: Vec<f64>,
}

impl Averaged {
    fn new(n: usize) -> Self {
        Averaged {
            w: vec![0.0; n],
            u: vec![0.0; n],
        }
    }

    fn add(&mut self, i: usize, delta: f64, step: f64) {
        self.w[i] += delta;
        self.u[i] += step * delta;
    }

    fn average(&self, step: f64) -> Vec<f64> {
        self.w
            .iter()
            .zip(&self.u)
            .map(|(w, u)| w - u / step)
            .collect()
    }
}

/// Averaged structured perceptron with patience-based early stopping on
/// exact-match micro-F1 over `validation`. Returns the best averaged model.
pub fn train(
    training: &[TaggedSentence],
    validation: &[TaggedSentence],
    config: &TrainConfig,
) -> Result<(TaggerModel, TrainReport)> {
    if config.max_epochs == 0 || config.patience == 0 {
        return Err(Error::Config(
            "max_epochs and patience must be at least 1".into(),
        ));
    }
    let training: Vec<&TaggedSentence> = training.iter().filter(|s| !s.tokens.is_empty()).collect();
    if training.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if validation.is_empty() {
        return Err(Error::EmptyValidationSet);
    }

    let alphabet = LabelAlphabet::new(training.iter().flat_map(|s| s.tags.iter().cloned()));
    let n = alphabet.len();
    let extractor = FeatureExtractor {
        window: config.window,
    };

    // feature dictionary in order of first occurrence
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut cached: Vec<Vec<Vec<usize>>> = Vec::with_capacity(training.len());
    let mut gold: Vec<Vec<usize>> = Vec::with_capacity(training.len());
    for s in &training {
        let surfaces = s.surfaces();
        let per_token = (0..surfaces.len())
            .map(|i| {
                extractor
                    .extract(&surfaces, i)
                    .into_iter()
                    .map(|f| {
                        *ids.entry(f).or_insert_with_key(|f| {
                            names.push(f.clone());
                            names.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        cached.push(per_token);
        gold.push(alphabet.encode(&s.tags)?);
    }

    let constraints = config.enforce_bio.then(|| BioConstraints::new(&alphabet));
    let mut emission = Averaged::new(names.len() * n);
    let mut transition = Averaged::new(n * n);
    let mut step = 1.0;
    let mut order: Vec<usize> = (0..training.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut epochs = Vec::new();
    let mut best: Option<(TaggerModel, usize, f64)> = None;
    let mut stale = 0;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        let mut updates = 0;
        for &idx in &order {
            let scores = emission_matrix(&cached[idx], &emission.w, n);
            let (predicted, _) = viterbi(&scores, &transition.w, constraints.as_ref());
            let gold = &gold[idx];
            if predicted != *gold {
                updates += 1;
                for k in 0..gold.len() {
                    if predicted[k] != gold[k] {
                        for &f in &cached[idx][k] {
                            emission.add(f * n + gold[k], 1.0, step);
                            emission.add(f * n + predicted[k], -1.0, step);
                        }
                    }
                    if k > 0 && (predicted[k - 1], predicted[k]) != (gold[k - 1], gold[k]) {
                        transition.add(gold[k - 1] * n + gold[k], 1.0, step);
                        transition.add(predicted[k - 1] * n + predicted[k], -1.0, step);
                    }
                }
            }
            step += 1.0;
        }

        let model = TaggerModel::from_parts(
            alphabet.clone(),
            extractor,
            names.clone(),
            emission.average(step),
            transition.average(step),
            true,
            config.enforce_bio,
        )?;
        let predictions: Vec<_> = validation
            .iter()
            .map(|s| model.decode(&s.surfaces()))
            .collect();
        let f1 = score_sentences(&predictions, validation, MatchCriterion::Exact)?
            .micro
            .f1;
        log::debug!("epoch {epoch}: {updates} updates, validation F1 {f1:.4}");
        epochs.push(EpochReport {
            epoch,
            updates,
            validation_f1: f1,
        });

        if best.as_ref().is_none_or(|(_, _, b)| f1 > *b) {
            best = Some((model, epoch, f1));
            stale = 0;
        } else {
            stale += 1;
        }
        if stale >= config.patience {
            break;
        }
    }

    let (model, best_epoch, best_validation_f1) =
        best.ok_or_else(|| Error::Invariant("no epoch ran".into()))?;
    Ok((
        model,
        TrainReport {
            epochs,
            best_epoch,
            best_validation_f1,
        },
    ))
}
