use serde::{Deserialize, Serialize};

use super::counts::PredictionSet;
use super::merge::{merge, MergeMethod};
use crate::corpus::TaggedDocument;
use crate::tagscheme::{LabelAlphabet, TagSequence};
use crate::{Error, Result};

/// Sidecar entry for one merged sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub document: String,
    /// Position of the sentence in the whole corpus, counting from 0.
    pub sentence_index: usize,
    pub method: MergeMethod,
    /// `None` stands for `-inf`.
    pub log_score: Option<f64>,
    pub repairs: usize,
    pub pre_repair: TagSequence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergedCorpus {
    pub documents: Vec<TaggedDocument>,
    pub records: Vec<MergeRecord>,
}

fn misaligned(sentence: usize, message: String) -> Error {
    Error::Alignment { sentence, message }
}

fn check_aligned(base: &[TaggedDocument], other: &[TaggedDocument], what: &str) -> Result<()> {
    let mut global = 0;
    for (d, doc) in base.iter().enumerate() {
        let Some(o) = other.get(d) else {
            return Err(misaligned(
                global,
                format!("{what} has no document {:?}", doc.id()),
            ));
        };
        if o.id() != doc.id() {
            return Err(misaligned(
                global,
                format!(
                    "{what} has document {:?} where {:?} was expected",
                    o.id(),
                    doc.id()
                ),
            ));
        }
        for (s, sentence) in doc.sentences.iter().enumerate() {
            let Some(os) = o.sentences.get(s) else {
                return Err(misaligned(
                    global,
                    format!("{what} is missing sentence {s} of {:?}", doc.id()),
                ));
            };
            if os.tokens.len() != sentence.tokens.len() {
                return Err(misaligned(
                    global,
                    format!(
                        "{what}: {} tokens where {} were expected in {:?}",
                        os.tokens.len(),
                        sentence.tokens.len(),
                        doc.id()
                    ),
                ));
            }
            if let Some(t) = (0..sentence.tokens.len())
                .find(|&t| os.tokens[t].surface != sentence.tokens[t].surface)
            {
                return Err(misaligned(
                    global,
                    format!(
                        "{what}: token {t} is {:?}, expected {:?}",
                        os.tokens[t].surface, sentence.tokens[t].surface
                    ),
                ));
            }
            global += 1;
        }
        if o.sentences.len() > doc.sentences.len() {
            return Err(misaligned(
                global,
                format!("{what} has extra sentences in {:?}", doc.id()),
            ));
        }
    }
    if other.len() > base.len() {
        return Err(misaligned(
            global,
            format!("{what} has extra document {:?}", other[base.len()].id()),
        ));
    }
    Ok(())
}

/// Merges N aligned prediction corpora sentence by sentence. Documents are
/// paired by position and must carry the same ids and token surfaces; an
/// optional `reference` corpus is checked the same way. The alphabet
/// defaults to the union of all predicted tags.
pub fn merge_corpus(
    predictions: &[Vec<TaggedDocument>],
    method: MergeMethod,
    alphabet: Option<&LabelAlphabet>,
    reference: Option<&[TaggedDocument]>,
) -> Result<MergedCorpus> {
    let Some(base) = predictions.first() else {
        return Err(Error::PredictionSet(
            "at least one prediction corpus is required".into(),
        ));
    };
    for (m, other) in predictions.iter().enumerate().skip(1) {
        check_aligned(base, other, &format!("prediction {m}"))?;
    }
    if let Some(reference) = reference {
        check_aligned(reference, base, "prediction 0")?;
    }
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => LabelAlphabet::new(
            predictions
                .iter()
                .flatten()
                .flat_map(|d| &d.sentences)
                .flat_map(|s| s.tags.iter().cloned()),
        ),
    };

    let mut documents = Vec::with_capacity(base.len());
    let mut records = Vec::new();
    let mut global = 0;
    for (d, doc) in base.iter().enumerate() {
        let mut merged_tags = Vec::with_capacity(doc.sentences.len());
        for s in 0..doc.sentences.len() {
            let seqs: Vec<TagSequence> = predictions
                .iter()
                .map(|p| p[d].sentences[s].tags.clone())
                .collect();
            let set = PredictionSet::new(&seqs, Some(alphabet.clone()))
                .map_err(|e| misaligned(global, e.to_string()))?;
            let m = merge(&set, method)?;
            records.push(MergeRecord {
                document: doc.id().to_string(),
                sentence_index: global,
                method,
                log_score: m.log_score.is_finite().then_some(m.log_score),
                repairs: m.repairs,
                pre_repair: m.raw_tags,
            });
            merged_tags.push(m.tags);
            global += 1;
        }
        documents.push(doc.with_tags(merged_tags)?);
    }
    Ok(MergedCorpus { documents, records })
}
