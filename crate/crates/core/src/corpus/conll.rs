//! Two-column CoNLL: `<word>\t<tag>` per line, blank line between sentences.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConllToken {
    pub surface: String,
    pub tag: String,
}

impl ConllToken {
    pub fn new(surface: impl Into<String>, tag: impl Into<String>) -> Self {
        ConllToken {
            surface: surface.into(),
            tag: tag.into(),
        }
    }
}

pub type ConllSentence = Vec<ConllToken>;

/// Splits on blank lines. CRLF endings are accepted; runs of blank lines
/// count as one boundary. Line numbers in errors are 1-based.
pub fn parse_conll(input: &str) -> Result<Vec<ConllSentence>> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (n, raw) in input.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(surface), Some(tag), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::ConllParse {
                line: n + 1,
                message: format!("expected exactly one TAB separator in {line:?}"),
            });
        };
        current.push(ConllToken::new(surface, tag));
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

/// Exact inverse of [`parse_conll`] on any input it accepts.
pub fn write_conll(sentences: &[ConllSentence]) -> Result<String> {
    let mut out = String::new();
    for (i, sentence) in sentences.iter().enumerate() {
        if sentence.is_empty() {
            return Err(Error::ConllWrite(format!("sentence {i} has no tokens")));
        }
        if i > 0 {
            out.push('\n');
        }
        for token in sentence {
            for (what, field) in [("surface", &token.surface), ("tag", &token.tag)] {
                if field.contains(['\t', '\n', '\r']) {
                    return Err(Error::ConllWrite(format!(
                        "{what} {field:?} in sentence {i} contains a TAB or line break"
                    )));
                }
            }
            if token.surface.is_empty() && token.tag.is_empty() {
                // "\t" alone would still parse, but keep the format unambiguous
                return Err(Error::ConllWrite(format!("empty token in sentence {i}")));
            }
            out.push_str(&token.surface);
            out.push('\t');
            out.push_str(&token.tag);
            out.push('\n');
        }
    }
    Ok(out)
}
