use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wetlab_ner::corpus::synthetic::SyntheticConfig;
use wetlab_ner::ensemble::MergeMethod;

use crate::commands::{self, CriterionArg, InputArgs, MatchingArg, MethodArg, TrainArgs};
use crate::error::{CliError, CliResult};
use crate::io::{read_corpus, write_file, CorpusFormat};
use crate::pipeline::{run_pipeline, PipelineConfig};
use crate::render;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "wetlab-ner",
    version,
    about = "Entity recognition toolkit for wet-lab protocols"
)]
pub struct Cli {
    /// Seed for splits, shuffling and synthetic data.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert between standoff and CoNLL.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: CorpusFormat,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Corpus statistics, with OOV counts against an optional reference.
    Stats {
        input: PathBuf,
        #[arg(long)]
        reference: Option<PathBuf>,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Seeded train/validation split of document ids.
    Split {
        input: PathBuf,
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Train a perceptron tagger (model JSON to --out).
    Train {
        input: PathBuf,
        /// Validation corpus; the whole input is then used for training.
        #[arg(long)]
        validation: Option<PathBuf>,
        /// Split file from `split`; splits the input with --seed if omitted.
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[command(flatten)]
        train_args: TrainArgs,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Tag a corpus with a trained model.
    Tag {
        #[arg(long)]
        model: PathBuf,
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = CorpusFormat::Conll)]
        to: CorpusFormat,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Merge aligned prediction corpora.
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Sle)]
        method: MethodArg,
        /// Gold corpus to check token alignment against.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Per-sentence JSON records; defaults to <out>/sidecar.json.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CorpusFormat::Conll)]
        to: CorpusFormat,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Score predictions against gold mentions.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, value_enum, default_value_t = CriterionArg::Both)]
        criterion: CriterionArg,
        #[arg(long, value_enum, default_value_t = MatchingArg::Greedy)]
        matching: MatchingArg,
        /// Include the K most frequent token confusions.
        #[arg(long, value_name = "K")]
        confusions: Option<usize>,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Train N models on seeded splits, merge their predictions, score all.
    Pipeline {
        /// Documents the splits are drawn from.
        #[arg(long)]
        pool: PathBuf,
        /// Held-out corpus every model tags.
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value_t = 11)]
        n_models: usize,
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![MethodArg::Majv, MethodArg::Sle])]
        methods: Vec<MethodArg>,
        #[command(flatten)]
        train_args: TrainArgs,
        #[command(flatten)]
        input_args: InputArgs,
    },
    /// Write a seeded synthetic standoff corpus.
    Synth {
        #[arg(long, default_value_t = 30)]
        documents: usize,
        #[arg(long, default_value_t = 4)]
        min_steps: usize,
        #[arg(long, default_value_t = 10)]
        max_steps: usize,
        #[arg(long, default_value_t = 0.05)]
        label_noise: f64,
        #[arg(long, default_value = "protocol_")]
        id_prefix: String,
    },
}

/// A command's report as JSON plus its text rendering.
pub struct Output {
    pub json: String,
    pub text: String,
}

fn output<T: Serialize>(value: &T, text: Option<String>) -> CliResult<Output> {
    let json = commands::to_json(value)?;
    let text = match text {
        Some(t) => t,
        None => render::render_value(
            &serde_json::to_value(value).map_err(|e| CliError::Invariant(e.to_string()))?,
        ),
    };
    Ok(Output { json, text })
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Convert {
            input,
            to,
            input_args,
        } => output(&commands::convert(input, input_args, *to, out)?, None),
        Command::Stats {
            input,
            reference,
            input_args,
        } => {
            let report = commands::stats(input, input_args, reference.as_deref())?;
            let o = output(&report, None)?;
            if let Some(path) = out {
                write_file(path, &o.json)?;
            }
            Ok(o)
        }
        Command::Split {
            input,
            train_fraction,
            input_args,
        } => {
            let spec = commands::split(input, input_args, cli.seed, *train_fraction)?;
            let o = output(&spec, None)?;
            if let Some(path) = out {
                write_file(path, &o.json)?;
            }
            Ok(o)
        }
        Command::Train {
            input,
            validation,
            split,
            train_fraction,
            train_args,
            input_args,
        } => output(
            &commands::train_command(
                input,
                input_args,
                validation.as_deref(),
                split.as_deref(),
                *train_fraction,
                train_args,
                cli.seed,
                out,
            )?,
            None,
        ),
        Command::Tag {
            model,
            input,
            to,
            input_args,
        } => output(&commands::tag(model, input, input_args, *to, out)?, None),
        Command::Merge {
            inputs,
            method,
            reference,
            sidecar,
            to,
            input_args,
        } => output(
            &commands::merge(
                inputs,
                input_args,
                (*method).into(),
                reference.as_deref(),
                *to,
                sidecar.as_deref(),
                out,
            )?,
            None,
        ),
        Command::Eval {
            gold,
            pred,
            criterion,
            matching,
            confusions,
            input_args,
        } => {
            let report =
                commands::eval(gold, pred, input_args, *criterion, *matching, *confusions)?;
            let text = render::render_eval(&report);
            let o = output(&report, Some(text))?;
            if let Some(path) = out {
                write_file(path, &o.json)?;
            }
            Ok(o)
        }
        Command::Pipeline {
            pool,
            test,
            n_models,
            train_fraction,
            methods,
            train_args,
            input_args,
        } => {
            let pool = read_corpus(pool, &input_args.options())?;
            let test = read_corpus(test, &input_args.options())?;
            let mut methods: Vec<MergeMethod> = methods.iter().map(|&m| m.into()).collect();
            methods.sort();
            methods.dedup();
            let config = PipelineConfig {
                n_models: *n_models,
                seed_base: cli.seed,
                train_fraction: *train_fraction,
                methods,
                train: train_args.clone(),
                out: out.map(PathBuf::from),
            };
            let report = run_pipeline(&pool.documents, &test.documents, &config)?;
            let text = render::render_pipeline(&report);
            output(&report, Some(text))
        }
        Command::Synth {
            documents,
            min_steps,
            max_steps,
            label_noise,
            id_prefix,
        } => {
            let config = SyntheticConfig {
                documents: *documents,
                min_steps: *min_steps,
                max_steps: *max_steps,
                label_noise: *label_noise,
                seed: cli.seed,
                id_prefix: id_prefix.clone(),
            };
            output(&commands::synth(&config, out)?, None)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 usage, 2 data, 3 internal invariant.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let _ = match cli.format {
                ReportFormat::Json => write!(stdout, "{}", o.json),
                ReportFormat::Text => write!(stdout, "{}", o.text),
            };
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
