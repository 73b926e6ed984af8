use std::fmt;

use serde::{Deserialize, Serialize};

use super::align::{align_mentions_to_tags, BoundaryPolicy};
use super::conll::ConllToken;
use super::tokenize::tokenize;
use crate::tagscheme::{spans_from_tags, Tag, TagSequence};
use crate::{Error, Result};

/// Character range of one protocol step (one line) inside the document text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSpan {
    pub start: usize,
    pub end: usize,
}

/// A protocol: its raw text and the line structure derived from it.
///
/// All offsets count Unicode scalar values, not bytes. Steps are the lines
/// holding at least one non-whitespace character (a trailing `\r` is not part
/// of the step); the title is the text of the first step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolDocument {
    id: String,
    text: String,
    title: String,
    steps: Vec<LineSpan>,
    // byte offset of every char, plus text.len()
    char_bounds: Vec<usize>,
}

impl ProtocolDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let char_bounds: Vec<usize> = text
            .char_indices()
            .map(|(b, _)| b)
            .chain(std::iter::once(text.len()))
            .collect();

        let mut steps = Vec::new();
        let mut line_start = 0;
        let chars: Vec<char> = text.chars().collect();
        for i in 0..=chars.len() {
            if i == chars.len() || chars[i] == '\n' {
                let mut end = i;
                if end > line_start && chars[end - 1] == '\r' {
                    end -= 1;
                }
                if chars[line_start..end].iter().any(|c| !c.is_whitespace()) {
                    steps.push(LineSpan {
                        start: line_start,
                        end,
                    });
                }
                line_start = i + 1;
            }
        }

        let mut doc = ProtocolDocument {
            id: id.into(),
            text,
            title: String::new(),
            steps,
            char_bounds,
        };
        doc.title = doc
            .steps
            .first()
            .and_then(|s| doc.slice(s.start, s.end))
            .unwrap_or_default()
            .to_string();
        doc
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn steps(&self) -> &[LineSpan] {
        &self.steps
    }

    /// Length of the text in characters.
    pub fn char_len(&self) -> usize {
        self.char_bounds.len() - 1
    }

    /// Text between two character offsets, if the range is valid.
    pub fn slice(&self, start: usize, end: usize) -> Option<&str> {
        if start > end || end > self.char_len() {
            return None;
        }
        Some(&self.text[self.char_bounds[start]..self.char_bounds[end]])
    }

    /// Builds a mention after checking `0 <= start < end <= len`; the surface
    /// is taken from the text.
    pub fn mention(
        &self,
        label: impl Into<String>,
        start: usize,
        end: usize,
    ) -> Result<EntityMention> {
        let label = label.into();
        if start >= end || end > self.char_len() {
            return Err(Error::OffsetOutOfRange {
                id: label,
                start,
                end,
                len: self.char_len(),
            });
        }
        let surface = self.slice(start, end).unwrap_or_default().to_string();
        Ok(EntityMention {
            label,
            start,
            end,
            surface,
        })
    }
}

/// A typed character span. `start` is inclusive, `end` exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityMention {
    pub label: String,
    pub start: usize,
    pub end: usize,
    pub surface: String,
}

impl EntityMention {
    pub fn new(
        label: impl Into<String>,
        start: usize,
        end: usize,
        surface: impl Into<String>,
    ) -> Self {
        EntityMention {
            label: label.into(),
            start,
            end,
            surface: surface.into(),
        }
    }

    pub fn overlaps(&self, other: &EntityMention) -> bool {
        self.start.max(other.start) < self.end.min(other.end)
    }
}

impl fmt::Display for EntityMention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}..{}]", self.label, self.start, self.end)
    }
}

/// Fails on the first pair of overlapping mentions (labels are ignored).
pub fn check_no_overlap(mentions: &[EntityMention]) -> Result<()> {
    let mut order: Vec<&EntityMention> = mentions.iter().collect();
    order.sort_by_key(|m| (m.start, m.end));
    let mut furthest: Option<&EntityMention> = None;
    for m in order {
        if let Some(prev) = furthest {
            if m.start < prev.end {
                return Err(Error::OverlappingMentions {
                    first: prev.to_string(),
                    second: m.to_string(),
                });
            }
        }
        if furthest.is_none_or(|p| m.end > p.end) {
            furthest = Some(m);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub start: usize,
    pub end: usize,
    pub sentence_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<Token>,
    pub tags: TagSequence,
}

impl TaggedSentence {
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }
}

/// A document split into sentences (protocol steps) of tagged tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedDocument {
    pub document: ProtocolDocument,
    pub sentences: Vec<TaggedSentence>,
}

impl TaggedDocument {
    /// Tokenizes the document and projects the mentions onto BIO tags.
    /// Returns the document and the number of mentions that had to be snapped.
    pub fn from_standoff(
        document: ProtocolDocument,
        mentions: &[EntityMention],
        policy: BoundaryPolicy,
    ) -> Result<(Self, usize)> {
        let tokens = tokenize(&document);
        let alignment = align_mentions_to_tags(&tokens, mentions, document.steps().len(), policy)?;
        let mut grouped: Vec<Vec<Token>> = vec![Vec::new(); document.steps().len()];
        for t in tokens {
            grouped[t.sentence_index].push(t);
        }
        let sentences = grouped
            .into_iter()
            .zip(alignment.tags)
            .map(|(tokens, tags)| TaggedSentence { tokens, tags })
            .collect();
        Ok((
            TaggedDocument {
                document,
                sentences,
            },
            alignment.snapped,
        ))
    }

    /// Rebuilds a document from CoNLL sentences: one line per sentence,
    /// tokens joined by a single space, final newline.
    pub fn from_conll(id: impl Into<String>, sentences: &[Vec<ConllToken>]) -> Result<Self> {
        let mut text = String::new();
        for sentence in sentences {
            let line: Vec<&str> = sentence.iter().map(|t| t.surface.as_str()).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        Self::from_conll_anchored(id, sentences, &text)
    }

    /// Places CoNLL tokens onto an existing text: each token must appear at
    /// the next non-whitespace position, and only whitespace may remain after
    /// the last one.
    pub fn from_conll_anchored(
        id: impl Into<String>,
        sentences: &[Vec<ConllToken>],
        text: &str,
    ) -> Result<Self> {
        let document = ProtocolDocument::new(id, text);
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let mut out = Vec::with_capacity(sentences.len());
        for (sentence_index, sentence) in sentences.iter().enumerate() {
            let mut tokens = Vec::with_capacity(sentence.len());
            let mut tags = Vec::with_capacity(sentence.len());
            for ct in sentence {
                if ct.surface.chars().any(char::is_whitespace) || ct.surface.is_empty() {
                    return Err(Error::Alignment {
                        sentence: sentence_index,
                        message: format!("token {:?} is empty or contains whitespace", ct.surface),
                    });
                }
                while pos < chars.len() && chars[pos].is_whitespace() {
                    pos += 1;
                }
                let len = ct.surface.chars().count();
                let matches = pos + len <= chars.len()
                    && chars[pos..pos + len].iter().copied().eq(ct.surface.chars());
                if !matches {
                    return Err(Error::AnchorMismatch {
                        offset: pos,
                        found: ct.surface.clone(),
                    });
                }
                tokens.push(Token {
                    surface: ct.surface.clone(),
                    start: pos,
                    end: pos + len,
                    sentence_index,
                });
                tags.push(ct.tag.parse::<Tag>()?);
                pos += len;
            }
            out.push(TaggedSentence { tokens, tags });
        }
        if let Some(extra) = chars[pos..].iter().position(|c| !c.is_whitespace()) {
            return Err(Error::AnchorMismatch {
                offset: pos + extra,
                found: "<end of CoNLL input>".to_string(),
            });
        }
        Ok(TaggedDocument {
            document,
            sentences: out,
        })
    }

    pub fn id(&self) -> &str {
        self.document.id()
    }

    pub fn to_conll(&self) -> Vec<Vec<ConllToken>> {
        self.sentences
            .iter()
            .map(|s| {
                s.tokens
                    .iter()
                    .zip(&s.tags)
                    .map(|(t, tag)| ConllToken::new(t.surface.clone(), tag.to_string()))
                    .collect()
            })
            .collect()
    }

    /// Mentions encoded by the tags, with surfaces sliced from the text.
    /// The tags must be valid BIO.
    pub fn mentions(&self) -> Result<Vec<EntityMention>> {
        let mut out = Vec::new();
        for s in &self.sentences {
            for mut m in spans_from_tags(&s.tags, &s.tokens)? {
                if let Some(surface) = self.document.slice(m.start, m.end) {
                    m.surface = surface.to_string();
                }
                out.push(m);
            }
        }
        Ok(out)
    }

    /// Same tokens, new tags (one sequence per sentence).
    pub fn with_tags(&self, tags: Vec<TagSequence>) -> Result<Self> {
        if tags.len() != self.sentences.len() {
            return Err(Error::LengthMismatch {
                expected: self.sentences.len(),
                found: tags.len(),
            });
        }
        let sentences = self
            .sentences
            .iter()
            .zip(tags)
            .map(|(s, t)| {
                if t.len() != s.tokens.len() {
                    return Err(Error::LengthMismatch {
                        expected: s.tokens.len(),
                        found: t.len(),
                    });
                }
                Ok(TaggedSentence {
                    tokens: s.tokens.clone(),
                    tags: t,
                })
            })
            .collect::<Result<_>>()?;
        Ok(TaggedDocument {
            document: self.document.clone(),
            sentences,
        })
    }
}
