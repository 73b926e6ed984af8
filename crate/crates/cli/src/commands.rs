use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use wetlab_ner::corpus::{
    corpus_stats, generate_split, synthetic::synthetic_corpus, synthetic::SyntheticConfig,
    write_standoff, Side, SplitSpec, StandoffOptions, StatsReport, TaggedDocument, TaggedSentence,
};
use wetlab_ner::ensemble::{merge_corpus, MergeMethod, MergeRecord};
use wetlab_ner::eval::{
    score, token_confusions, ConfusionRow, MatchCriterion, MatchStrategy, ScoreReport,
};
use wetlab_ner::tagger::{predict, train, TaggerModel, TrainConfig, TrainReport};

use crate::error::{CliError, CliResult, Context};
use crate::io::{
    read_corpus, read_to_string, repaired_mentions, write_corpus, write_file, CorpusFormat,
    ReadOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Exact,
    Partial,
    Both,
}

impl CriterionArg {
    pub fn criteria(self) -> Vec<MatchCriterion> {
        match self {
            CriterionArg::Exact => vec![MatchCriterion::Exact],
            CriterionArg::Partial => vec![MatchCriterion::Partial],
            CriterionArg::Both => vec![MatchCriterion::Exact, MatchCriterion::Partial],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatchingArg {
    Greedy,
    Maximum,
}

impl From<MatchingArg> for MatchStrategy {
    fn from(m: MatchingArg) -> Self {
        match m {
            MatchingArg::Greedy => MatchStrategy::Greedy,
            MatchingArg::Maximum => MatchStrategy::Maximum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Majv,
    Sle,
}

impl From<MethodArg> for MergeMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Majv => MergeMethod::MajorityVote,
            MethodArg::Sle => MergeMethod::Sle,
        }
    }
}

/// Options shared by every command that reads a corpus.
#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Input format; detected from the path when omitted.
    #[arg(long = "from", value_enum)]
    pub from: Option<CorpusFormat>,
    /// Move mention boundaries that fall inside tokens to token edges.
    #[arg(long)]
    pub snap: bool,
    /// Accept overlapping standoff mentions (they still fail BIO conversion).
    #[arg(long)]
    pub allow_overlap: bool,
    /// Directory of original `<id>.txt` files to anchor CoNLL tokens on.
    #[arg(long)]
    pub text_dir: Option<PathBuf>,
}

impl InputArgs {
    pub fn options(&self) -> ReadOptions {
        ReadOptions {
            format: self.from,
            snap: self.snap,
            allow_overlap: self.allow_overlap,
            text_dir: self.text_dir.clone(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[arg(long, default_value_t = 30)]
    pub max_epochs: usize,
    #[arg(long, default_value_t = 3)]
    pub patience: usize,
    /// Context window of the word features.
    #[arg(long, default_value_t = 2)]
    pub window: usize,
    /// Decode without the BIO transition constraints.
    #[arg(long)]
    pub no_bio_constraints: bool,
}

impl Default for TrainArgs {
    fn default() -> Self {
        let c = TrainConfig::default();
        TrainArgs {
            max_epochs: c.max_epochs,
            patience: c.patience,
            window: c.window,
            no_bio_constraints: !c.enforce_bio,
        }
    }
}

impl TrainArgs {
    pub fn config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            max_epochs: self.max_epochs,
            patience: self.patience,
            seed,
            enforce_bio: !self.no_bio_constraints,
            window: self.window,
        }
    }
}

fn required<'a>(out: Option<&'a Path>, what: &str) -> CliResult<&'a Path> {
    out.ok_or_else(|| CliError::Usage(format!("--out is required ({what})")))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvertReport {
    pub documents: usize,
    pub sentences: usize,
    pub tokens: usize,
    pub mentions: usize,
    pub snapped: usize,
    pub skipped_annotations: usize,
    pub to: CorpusFormat,
}

pub fn convert(
    input: &Path,
    args: &InputArgs,
    to: CorpusFormat,
    out: Option<&Path>,
) -> CliResult<ConvertReport> {
    let out = required(out, "output directory")?;
    let corpus = read_corpus(input, &args.options())?;
    write_corpus(&corpus.documents, out, to)?;
    let mut mentions = 0;
    for d in &corpus.documents {
        mentions += repaired_mentions(d).context(|| d.id().to_string())?.len();
    }
    Ok(ConvertReport {
        documents: corpus.documents.len(),
        sentences: corpus.documents.iter().map(|d| d.sentences.len()).sum(),
        tokens: corpus
            .documents
            .iter()
            .flat_map(|d| &d.sentences)
            .map(|s| s.tokens.len())
            .sum(),
        mentions,
        snapped: corpus.snapped,
        skipped_annotations: corpus.skipped,
        to,
    })
}

pub fn stats(input: &Path, args: &InputArgs, reference: Option<&Path>) -> CliResult<StatsReport> {
    let corpus = read_corpus(input, &args.options())?;
    let reference = reference
        .map(|r| read_corpus(r, &args.options()))
        .transpose()?;
    Ok(corpus_stats(
        &corpus.documents,
        reference.as_ref().map(|r| r.documents.as_slice()),
    ))
}

pub fn split(
    input: &Path,
    args: &InputArgs,
    seed: u64,
    train_fraction: f64,
) -> CliResult<SplitSpec> {
    let corpus = read_corpus(input, &args.options())?;
    let ids: Vec<&str> = corpus.documents.iter().map(|d| d.id()).collect();
    generate_split(&ids, seed, train_fraction).context(|| input.display().to_string())
}

pub fn read_split(path: &Path) -> CliResult<SplitSpec> {
    serde_json::from_str(&read_to_string(path)?)
        .map_err(wetlab_ner::Error::from)
        .context(|| path.display().to_string())
}

pub fn partition<'a>(
    documents: &'a [TaggedDocument],
    spec: &SplitSpec,
) -> CliResult<(Vec<&'a TaggedDocument>, Vec<&'a TaggedDocument>)> {
    let present: BTreeSet<&str> = documents.iter().map(|d| d.id()).collect();
    if let Some(missing) = spec
        .assignment
        .keys()
        .find(|id| !present.contains(id.as_str()))
    {
        return Err(CliError::Data {
            context: "split".into(),
            source: wetlab_ner::Error::UnmatchedDocument(missing.clone()),
        });
    }
    let mut train = Vec::new();
    let mut validation = Vec::new();
    for d in documents {
        match spec.assignment.get(d.id()) {
            Some(Side::Train) => train.push(d),
            Some(Side::Validation) => validation.push(d),
            None => {
                return Err(CliError::Data {
                    context: "split".into(),
                    source: wetlab_ner::Error::UnmatchedDocument(d.id().to_string()),
                })
            }
        }
    }
    Ok((train, validation))
}

fn sentences(docs: &[&TaggedDocument]) -> Vec<TaggedSentence> {
    docs.iter()
        .flat_map(|d| d.sentences.iter().cloned())
        .collect()
}

/// Trains on the training side of `spec` and validates on the other side.
pub fn train_on_split(
    documents: &[TaggedDocument],
    spec: &SplitSpec,
    config: &TrainConfig,
) -> CliResult<(TaggerModel, TrainReport)> {
    let (train_docs, validation_docs) = partition(documents, spec)?;
    train(
        &sentences(&train_docs),
        &sentences(&validation_docs),
        config,
    )
    .context(|| "training".to_string())
}

#[allow(clippy::too_many_arguments)]
pub fn train_command(
    input: &Path,
    args: &InputArgs,
    validation: Option<&Path>,
    split_file: Option<&Path>,
    train_fraction: f64,
    train_args: &TrainArgs,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<TrainReport> {
    let out = required(out, "model file")?;
    let corpus = read_corpus(input, &args.options())?;
    let config = train_args.config(seed);
    let (model, report) = match (validation, split_file) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--validation and --split are mutually exclusive".into(),
            ))
        }
        (Some(v), None) => {
            let validation = read_corpus(v, &args.options())?;
            let all: Vec<&TaggedDocument> = corpus.documents.iter().collect();
            let held: Vec<&TaggedDocument> = validation.documents.iter().collect();
            train(&sentences(&all), &sentences(&held), &config)
                .context(|| "training".to_string())?
        }
        (None, Some(s)) => train_on_split(&corpus.documents, &read_split(s)?, &config)?,
        (None, None) => {
            let ids: Vec<&str> = corpus.documents.iter().map(|d| d.id()).collect();
            let spec = generate_split(&ids, seed, train_fraction)
                .context(|| input.display().to_string())?;
            train_on_split(&corpus.documents, &spec, &config)?
        }
    };
    write_file(out, &model.to_json().context(|| "model".to_string())?)?;
    Ok(report)
}

pub fn read_model(path: &Path) -> CliResult<TaggerModel> {
    TaggerModel::from_json(&read_to_string(path)?).context(|| path.display().to_string())
}

pub fn tag_documents(
    model: &TaggerModel,
    documents: &[TaggedDocument],
) -> CliResult<Vec<TaggedDocument>> {
    documents
        .iter()
        .map(|d| {
            d.with_tags(predict(model, &d.sentences))
                .context(|| d.id().to_string())
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TagReport {
    pub documents: usize,
    pub sentences: usize,
    pub tokens: usize,
}

pub fn tag(
    model: &Path,
    input: &Path,
    args: &InputArgs,
    to: CorpusFormat,
    out: Option<&Path>,
) -> CliResult<TagReport> {
    let out = required(out, "output directory")?;
    let model = read_model(model)?;
    let corpus = read_corpus(input, &args.options())?;
    let tagged = tag_documents(&model, &corpus.documents)?;
    write_corpus(&tagged, out, to)?;
    Ok(TagReport {
        documents: tagged.len(),
        sentences: tagged.iter().map(|d| d.sentences.len()).sum(),
        tokens: tagged
            .iter()
            .flat_map(|d| &d.sentences)
            .map(|s| s.tokens.len())
            .sum(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MergeReport {
    pub method: MergeMethod,
    pub models: usize,
    pub documents: usize,
    pub sentences: usize,
    pub repaired_sentences: usize,
    pub repairs: usize,
    pub sidecar: PathBuf,
}

pub const SIDECAR_FILE: &str = "sidecar.json";

#[allow(clippy::too_many_arguments)]
pub fn merge(
    inputs: &[PathBuf],
    args: &InputArgs,
    method: MergeMethod,
    reference: Option<&Path>,
    to: CorpusFormat,
    sidecar: Option<&Path>,
    out: Option<&Path>,
) -> CliResult<MergeReport> {
    let out = required(out, "output directory")?;
    if inputs.is_empty() {
        return Err(CliError::Usage(
            "merge needs at least one prediction corpus".into(),
        ));
    }
    let predictions = inputs
        .iter()
        .map(|p| read_corpus(p, &args.options()).map(|c| c.documents))
        .collect::<CliResult<Vec<_>>>()?;
    let reference = reference
        .map(|r| read_corpus(r, &args.options()))
        .transpose()?;
    let merged = merge_corpus(
        &predictions,
        method,
        None,
        reference.as_ref().map(|r| r.documents.as_slice()),
    )
    .context(|| "merge".to_string())?;
    write_corpus(&merged.documents, out, to)?;
    let sidecar = sidecar
        .map(Path::to_path_buf)
        .unwrap_or_else(|| out.join(SIDECAR_FILE));
    write_file(&sidecar, &to_json(&merged.records)?)?;
    Ok(MergeReport {
        method,
        models: predictions.len(),
        documents: merged.documents.len(),
        sentences: merged.records.len(),
        repaired_sentences: merged.records.iter().filter(|r| r.repairs > 0).count(),
        repairs: merged.records.iter().map(|r| r.repairs).sum(),
        sidecar,
    })
}

pub fn read_sidecar(path: &Path) -> CliResult<Vec<MergeRecord>> {
    serde_json::from_str(&read_to_string(path)?)
        .map_err(wetlab_ner::Error::from)
        .context(|| path.display().to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub documents: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ScoreReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial: Option<ScoreReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confusions: Option<Vec<ConfusionRow>>,
}

/// Projects the predicted tags onto the gold tokens; both sides must have
/// identical token surfaces, sentence by sentence.
fn aligned_pairs<'a>(
    predicted: &'a [TaggedDocument],
    gold: &'a [TaggedDocument],
) -> CliResult<Vec<(&'a TaggedDocument, TaggedDocument)>> {
    let by_id: BTreeMap<&str, &TaggedDocument> = predicted.iter().map(|d| (d.id(), d)).collect();
    let gold_ids: BTreeSet<&str> = gold.iter().map(|d| d.id()).collect();
    if let Some(extra) = by_id.keys().find(|id| !gold_ids.contains(*id)) {
        return Err(CliError::Data {
            context: "eval".into(),
            source: wetlab_ner::Error::UnmatchedDocument(extra.to_string()),
        });
    }
    let mut out = Vec::with_capacity(gold.len());
    for g in gold {
        let Some(p) = by_id.get(g.id()) else {
            return Err(CliError::Data {
                context: "eval".into(),
                source: wetlab_ner::Error::UnmatchedDocument(g.id().to_string()),
            });
        };
        let aligned = p.sentences.len() == g.sentences.len()
            && p.sentences
                .iter()
                .zip(&g.sentences)
                .all(|(a, b)| a.surfaces() == b.surfaces());
        if !aligned {
            return Err(CliError::Data {
                context: format!("eval: document {}", g.id()),
                source: wetlab_ner::Error::Alignment {
                    sentence: 0,
                    message: "predicted tokens differ from gold tokens".into(),
                },
            });
        }
        let projected = g
            .with_tags(p.sentences.iter().map(|s| s.tags.clone()).collect())
            .context(|| g.id().to_string())?;
        out.push((g, projected));
    }
    Ok(out)
}

pub fn evaluate(
    predicted: &[TaggedDocument],
    gold: &[TaggedDocument],
    criteria: &[MatchCriterion],
    strategy: MatchStrategy,
    confusions: Option<usize>,
) -> CliResult<EvalReport> {
    let pairs = aligned_pairs(predicted, gold)?;
    let mut pred_mentions = BTreeMap::new();
    let mut gold_mentions = BTreeMap::new();
    for (g, p) in &pairs {
        gold_mentions.insert(
            g.id().to_string(),
            repaired_mentions(g).context(|| g.id().to_string())?,
        );
        pred_mentions.insert(
            g.id().to_string(),
            repaired_mentions(p).context(|| g.id().to_string())?,
        );
    }
    let mut report = EvalReport {
        documents: pairs.len(),
        exact: None,
        partial: None,
        confusions: None,
    };
    for &criterion in criteria {
        let s = score(&pred_mentions, &gold_mentions, criterion, strategy)
            .context(|| "eval".to_string())?;
        match criterion {
            MatchCriterion::Exact => report.exact = Some(s),
            MatchCriterion::Partial => report.partial = Some(s),
        }
    }
    if let Some(k) = confusions {
        let p: Vec<_> = pairs
            .iter()
            .flat_map(|(_, p)| p.sentences.iter().map(|s| s.tags.clone()))
            .collect();
        let g: Vec<_> = pairs
            .iter()
            .flat_map(|(g, _)| g.sentences.iter().map(|s| s.tags.clone()))
            .collect();
        report.confusions = Some(
            token_confusions(&p, &g)
                .context(|| "eval".to_string())?
                .top(k),
        );
    }
    Ok(report)
}

pub fn eval(
    gold: &Path,
    predicted: &Path,
    args: &InputArgs,
    criterion: CriterionArg,
    matching: MatchingArg,
    confusions: Option<usize>,
) -> CliResult<EvalReport> {
    let gold = read_corpus(gold, &args.options())?;
    let predicted = read_corpus(predicted, &args.options())?;
    evaluate(
        &predicted.documents,
        &gold.documents,
        &criterion.criteria(),
        matching.into(),
        confusions,
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub documents: usize,
    pub mentions: usize,
    pub seed: u64,
}

pub fn synth(config: &SyntheticConfig, out: Option<&Path>) -> CliResult<SynthReport> {
    let out = required(out, "output directory")?;
    let docs = synthetic_corpus(config);
    for d in &docs {
        let (txt, ann) = write_standoff(&d.document, &d.mentions, StandoffOptions::default())
            .context(|| d.document.id().to_string())?;
        write_file(&out.join(format!("{}.txt", d.document.id())), &txt)?;
        write_file(&out.join(format!("{}.ann", d.document.id())), &ann)?;
    }
    Ok(SynthReport {
        documents: docs.len(),
        mentions: docs.iter().map(|d| d.mentions.len()).sum(),
        seed: config.seed,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(wetlab_ner::Error::from)
        .context(|| "report".to_string())?;
    s.push('\n');
    Ok(s)
}
