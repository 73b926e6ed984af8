use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use wetlab_ner::corpus::{generate_split, split_collisions, SplitSpec, TaggedDocument};
use wetlab_ner::ensemble::{build_counts, is_supported, merge_corpus, MergeMethod, PredictionSet};
use wetlab_ner::eval::{MatchCriterion, MatchStrategy};
use wetlab_ner::tagscheme::{is_valid_bio, LabelAlphabet};

use crate::commands::{evaluate, tag_documents, to_json, train_on_split, TrainArgs, SIDECAR_FILE};
use crate::error::{CliError, CliResult, Context};
use crate::io::{write_corpus, write_file, CorpusFormat};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub n_models: usize,
    /// Model `i` (1-based) uses seed `seed_base + i` for its split and training.
    pub seed_base: u64,
    pub train_fraction: f64,
    pub methods: Vec<MergeMethod>,
    pub train: TrainArgs,
    /// Artifacts are written here when set.
    pub out: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            n_models: 11,
            seed_base: 0,
            train_fraction: 0.8,
            methods: vec![MergeMethod::MajorityVote, MergeMethod::Sle],
            train: TrainArgs::default(),
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    fn of(values: &[f64]) -> Spread {
        Spread {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionSpread {
    pub exact: Spread,
    pub partial: Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRecord {
    pub model: usize,
    pub seed: u64,
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub validation_f1: f64,
    pub exact_f1: f64,
    pub partial_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedScore {
    pub exact_f1: f64,
    pub partial_f1: f64,
    pub repairs: usize,
    /// Every pre-repair sequence uses only labels and transitions some model produced.
    pub supported: bool,
    pub bio_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineRow {
    pub n: usize,
    pub individual: CriterionSpread,
    /// Keyed by method name (`MajV`, `SLE`).
    pub merged: BTreeMap<String, MergedScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineChecks {
    pub bio_valid: bool,
    pub sle_supported: bool,
    /// 1-based model pairs that drew identical splits.
    pub split_collisions: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub n_models: usize,
    pub seed_base: u64,
    pub train_fraction: f64,
    pub pool_documents: usize,
    pub test_documents: usize,
    pub models: Vec<ModelRecord>,
    pub individual: CriterionSpread,
    pub rows: Vec<PipelineRow>,
    pub checks: PipelineChecks,
}

/// `{3, 5, ..., n}`, always ending at `n`.
pub fn ensemble_sizes(n: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = (3..=n).step_by(2).collect();
    if sizes.last() != Some(&n) {
        sizes.push(n);
    }
    sizes
}

fn stage<T>(name: &str, result: CliResult<T>) -> CliResult<T> {
    result.context(|| format!("pipeline stage {name}"))
}

struct Member {
    split: SplitSpec,
    record: ModelRecord,
    predictions: Vec<TaggedDocument>,
}

fn f1_pair(predicted: &[TaggedDocument], gold: &[TaggedDocument]) -> CliResult<(f64, f64)> {
    let r = evaluate(
        predicted,
        gold,
        &[MatchCriterion::Exact, MatchCriterion::Partial],
        MatchStrategy::Greedy,
        None,
    )?;
    let f = |s: Option<wetlab_ner::eval::ScoreReport>| s.map(|s| s.micro.f1).unwrap_or(0.0);
    Ok((f(r.exact), f(r.partial)))
}

fn run_member(
    i: usize,
    pool: &[TaggedDocument],
    test: &[TaggedDocument],
    config: &PipelineConfig,
) -> CliResult<Member> {
    let seed = config.seed_base + i as u64;
    let ids: Vec<&str> = pool.iter().map(|d| d.id()).collect();
    let split = stage(
        "split",
        generate_split(&ids, seed, config.train_fraction).context(|| format!("model {i}")),
    )?;
    let (model, report) = stage(
        "train",
        train_on_split(pool, &split, &config.train.config(seed)).context(|| format!("model {i}")),
    )?;
    let predictions = stage("tag", tag_documents(&model, test))?;
    if let Some(out) = &config.out {
        let name = format!("model_{i:02}");
        stage(
            "write",
            write_file(
                &out.join("splits").join(format!("split_{i:02}.json")),
                &to_json(&split)?,
            ),
        )?;
        stage(
            "write",
            write_file(
                &out.join("models").join(format!("{name}.json")),
                &model.to_json().context(|| name.clone())?,
            ),
        )?;
        stage(
            "write",
            write_corpus(
                &predictions,
                &out.join("predictions").join(&name),
                CorpusFormat::Conll,
            ),
        )?;
    }
    let (exact_f1, partial_f1) = stage("eval", f1_pair(&predictions, test))?;
    Ok(Member {
        split,
        record: ModelRecord {
            model: i,
            seed,
            best_epoch: report.best_epoch,
            epochs_run: report.epochs.len(),
            validation_f1: report.best_validation_f1,
            exact_f1,
            partial_f1,
        },
        predictions,
    })
}

fn spread(records: &[ModelRecord]) -> CriterionSpread {
    let exact: Vec<f64> = records.iter().map(|r| r.exact_f1).collect();
    let partial: Vec<f64> = records.iter().map(|r| r.partial_f1).collect();
    CriterionSpread {
        exact: Spread::of(&exact),
        partial: Spread::of(&partial),
    }
}

fn merge_row(
    members: &[Member],
    test: &[TaggedDocument],
    method: MergeMethod,
    out: Option<&Path>,
) -> CliResult<MergedScore> {
    let predictions: Vec<Vec<TaggedDocument>> =
        members.iter().map(|m| m.predictions.clone()).collect();
    let alphabet = LabelAlphabet::new(
        predictions
            .iter()
            .flatten()
            .flat_map(|d| &d.sentences)
            .flat_map(|s| s.tags.iter().cloned()),
    );
    let merged = stage(
        "merge",
        merge_corpus(&predictions, method, Some(&alphabet), Some(test))
            .context(|| method.name().to_string()),
    )?;
    if let Some(out) = out {
        let dir = out.join("merged").join(format!(
            "{}_{:02}",
            method.name().to_lowercase(),
            members.len()
        ));
        stage(
            "write",
            write_corpus(&merged.documents, &dir, CorpusFormat::Conll),
        )?;
        stage(
            "write",
            write_file(&dir.join(SIDECAR_FILE), &to_json(&merged.records)?),
        )?;
    }

    let mut supported = true;
    let mut global = 0;
    for (d, doc) in merged.documents.iter().enumerate() {
        for s in 0..doc.sentences.len() {
            let seqs: Vec<_> = predictions
                .iter()
                .map(|p| p[d].sentences[s].tags.clone())
                .collect();
            let set = PredictionSet::new(&seqs, Some(alphabet.clone()))
                .context(|| "support check".to_string())?;
            let raw = alphabet
                .encode(&merged.records[global].pre_repair)
                .context(|| "support check".to_string())?;
            supported &= is_supported(&build_counts(&set), &raw);
            global += 1;
        }
    }
    let bio_valid = merged
        .documents
        .iter()
        .flat_map(|d| &d.sentences)
        .all(|s| is_valid_bio(&s.tags));
    let (exact_f1, partial_f1) = stage("eval", f1_pair(&merged.documents, test))?;
    Ok(MergedScore {
        exact_f1,
        partial_f1,
        repairs: merged.records.iter().map(|r| r.repairs).sum(),
        supported,
        bio_valid,
    })
}

/// Trains `n_models` taggers on seeded splits of `pool`, tags `test` with
/// each, merges the first `n` prediction sets for every ensemble size and
/// method, and scores everything under both criteria.
pub fn run_pipeline(
    pool: &[TaggedDocument],
    test: &[TaggedDocument],
    config: &PipelineConfig,
) -> CliResult<PipelineReport> {
    if config.n_models == 0 {
        return Err(CliError::Usage("--n-models must be at least 1".into()));
    }
    if config.methods.is_empty() {
        return Err(CliError::Usage(
            "at least one merge method is required".into(),
        ));
    }
    let pool_ids: BTreeSet<&str> = pool.iter().map(|d| d.id()).collect();
    if let Some(shared) = test.iter().find(|d| pool_ids.contains(d.id())) {
        return Err(CliError::Usage(format!(
            "test document {:?} is also in the training pool",
            shared.id()
        )));
    }

    let members = (1..=config.n_models)
        .into_par_iter()
        .map(|i| run_member(i, pool, test, config))
        .collect::<CliResult<Vec<Member>>>()?;
    let records: Vec<ModelRecord> = members.iter().map(|m| m.record.clone()).collect();
    let splits: Vec<SplitSpec> = members.iter().map(|m| m.split.clone()).collect();
    let collisions: Vec<(usize, usize)> = split_collisions(&splits)
        .into_iter()
        .map(|(a, b)| (a + 1, b + 1))
        .collect();
    if !collisions.is_empty() {
        log::warn!("identical splits for models {collisions:?}");
    }

    let mut rows = Vec::new();
    for n in ensemble_sizes(config.n_models) {
        let mut merged = BTreeMap::new();
        for &method in &config.methods {
            let score = merge_row(&members[..n], test, method, config.out.as_deref())?;
            merged.insert(method.name().to_string(), score);
        }
        rows.push(PipelineRow {
            n,
            individual: spread(&records[..n]),
            merged,
        });
    }

    let bio_valid = rows
        .iter()
        .flat_map(|r| r.merged.values())
        .all(|m| m.bio_valid);
    let sle_supported = rows
        .iter()
        .filter_map(|r| r.merged.get(MergeMethod::Sle.name()))
        .all(|m| m.supported);
    let report = PipelineReport {
        n_models: config.n_models,
        seed_base: config.seed_base,
        train_fraction: config.train_fraction,
        pool_documents: pool.len(),
        test_documents: test.len(),
        individual: spread(&records),
        models: records,
        rows,
        checks: PipelineChecks {
            bio_valid,
            sle_supported,
            split_collisions: collisions,
        },
    };
    if let Some(out) = &config.out {
        write_file(&out.join("report.json"), &to_json(&report)?)?;
    }
    if !bio_valid || !sle_supported {
        return Err(CliError::Invariant(format!(
            "merged output check failed (bio_valid={bio_valid}, sle_supported={sle_supported})"
        )));
    }
    Ok(report)
}
