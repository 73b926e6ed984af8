//! Reading and writing corpora on disk.
//!
//! A standoff corpus is a directory of `<id>.txt` / `<id>.ann` pairs. A CoNLL
//! corpus is either one `.conll` file or a directory of them; the file stem
//! is the document id.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use wetlab_ner::corpus::EntityMention;
use wetlab_ner::corpus::{
    parse_conll, parse_standoff, write_conll, write_standoff, BoundaryPolicy, StandoffOptions,
    TaggedDocument,
};
use wetlab_ner::tagscheme::repair_bio;

use crate::error::{CliError, CliResult, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Conll,
    Standoff,
}

#[derive(Debug, Clone, Default)]
pub struct ReadOptions {
    pub format: Option<CorpusFormat>,
    pub snap: bool,
    pub allow_overlap: bool,
    /// Original texts for CoNLL input, `<id>.txt`, so offsets survive.
    pub text_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub documents: Vec<TaggedDocument>,
    pub format: CorpusFormat,
    /// Mentions moved onto token boundaries (standoff input with snapping).
    pub snapped: usize,
    /// Standoff lines other than entities that were ignored.
    pub skipped: usize,
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn files_with_extension(dir: &Path, ext: &str) -> CliResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == ext) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn detect_format(path: &Path) -> CliResult<CorpusFormat> {
    if !path.exists() {
        return Err(CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
        ));
    }
    if path.is_file() {
        return match path.extension().and_then(|e| e.to_str()) {
            Some("txt") | Some("ann") => Ok(CorpusFormat::Standoff),
            _ => Ok(CorpusFormat::Conll),
        };
    }
    if !files_with_extension(path, "ann")?.is_empty() {
        Ok(CorpusFormat::Standoff)
    } else if !files_with_extension(path, "conll")?.is_empty() {
        Ok(CorpusFormat::Conll)
    } else {
        Err(CliError::Usage(format!(
            "{}: no .ann or .conll files to read",
            path.display()
        )))
    }
}

fn read_standoff(path: &Path, options: &ReadOptions) -> CliResult<Corpus> {
    let txts = if path.is_file() {
        vec![path.with_extension("txt")]
    } else {
        files_with_extension(path, "txt")?
    };
    let policy = if options.snap {
        BoundaryPolicy::Snap
    } else {
        BoundaryPolicy::Error
    };
    let mut corpus = Corpus {
        documents: Vec::with_capacity(txts.len()),
        format: CorpusFormat::Standoff,
        snapped: 0,
        skipped: 0,
    };
    for txt_path in txts {
        let ann_path = txt_path.with_extension("ann");
        let id = stem(&txt_path);
        let txt = read_to_string(&txt_path)?;
        let ann = read_to_string(&ann_path)?;
        let doc = parse_standoff(
            &txt,
            &ann,
            &id,
            StandoffOptions {
                allow_overlap: options.allow_overlap,
            },
        )
        .context(|| ann_path.display().to_string())?;
        let (tagged, snapped) = TaggedDocument::from_standoff(doc.document, &doc.mentions, policy)
            .context(|| ann_path.display().to_string())?;
        corpus.snapped += snapped;
        corpus.skipped += doc.skipped;
        corpus.documents.push(tagged);
    }
    Ok(corpus)
}

fn read_conll(path: &Path, options: &ReadOptions) -> CliResult<Corpus> {
    let files = if path.is_file() {
        vec![path.to_path_buf()]
    } else {
        files_with_extension(path, "conll")?
    };
    let mut documents = Vec::with_capacity(files.len());
    for file in files {
        let id = stem(&file);
        let sentences =
            parse_conll(&read_to_string(&file)?).context(|| file.display().to_string())?;
        let doc = match &options.text_dir {
            Some(dir) => {
                let text = read_to_string(&dir.join(format!("{id}.txt")))?;
                TaggedDocument::from_conll_anchored(id, &sentences, &text)
            }
            None => TaggedDocument::from_conll(id, &sentences),
        }
        .context(|| file.display().to_string())?;
        documents.push(doc);
    }
    Ok(Corpus {
        documents,
        format: CorpusFormat::Conll,
        snapped: 0,
        skipped: 0,
    })
}

pub fn read_corpus(path: &Path, options: &ReadOptions) -> CliResult<Corpus> {
    let format = match options.format {
        Some(f) => f,
        None => detect_format(path)?,
    };
    match format {
        CorpusFormat::Standoff => read_standoff(path, options),
        CorpusFormat::Conll => read_conll(path, options),
    }
}

/// Mentions of a document after BIO repair of its tags.
pub fn repaired_mentions(doc: &TaggedDocument) -> wetlab_ner::Result<Vec<EntityMention>> {
    let repaired = doc.with_tags(doc.sentences.iter().map(|s| repair_bio(&s.tags)).collect())?;
    repaired.mentions()
}

pub fn write_corpus(
    documents: &[TaggedDocument],
    dir: &Path,
    format: CorpusFormat,
) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for doc in documents {
        match format {
            CorpusFormat::Conll => {
                let text = write_conll(&doc.to_conll()).context(|| doc.id().to_string())?;
                write_file(&dir.join(format!("{}.conll", doc.id())), &text)?;
            }
            CorpusFormat::Standoff => {
                let mentions = repaired_mentions(doc).context(|| doc.id().to_string())?;
                let (txt, ann) =
                    write_standoff(&doc.document, &mentions, StandoffOptions::default())
                        .context(|| doc.id().to_string())?;
                write_file(&dir.join(format!("{}.txt", doc.id())), &txt)?;
                write_file(&dir.join(format!("{}.ann", doc.id())), &ann)?;
            }
        }
    }
    Ok(())
}
