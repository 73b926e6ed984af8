//! BIO tag algebra: parsing, validation, repair and conversion between tag
//! sequences and typed character spans.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corpus::{EntityMention, Token};
use crate::{Error, Result};

/// A single BIO tag.
///
/// Variant order is `B < I < O`, so the derived `Ord` coincides with the
/// lexicographic order of the textual forms (`"B-X" < "I-X" < "O"`, labels
/// compared as strings). [`LabelAlphabet`] relies on this.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    B(String),
    I(String),
    O,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagKind {
    B,
    I,
    O,
}

pub type TagSequence = Vec<Tag>;

impl Tag {
    pub fn begin(label: impl Into<String>) -> Self {
        Tag::B(label.into())
    }

    pub fn inside(label: impl Into<String>) -> Self {
        Tag::I(label.into())
    }

    pub fn kind(&self) -> TagKind {
        match self {
            Tag::B(_) => TagKind::B,
            Tag::I(_) => TagKind::I,
            Tag::O => TagKind::O,
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Tag::B(l) | Tag::I(l) => Some(l),
            Tag::O => None,
        }
    }

    pub fn is_outside(&self) -> bool {
        matches!(self, Tag::O)
    }
}

/// Parses the textual form `O`, `B-<label>` or `I-<label>`.
pub fn parse_tag(s: &str) -> Result<Tag> {
    s.parse()
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && !label.chars().any(char::is_whitespace)
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "O" {
            return Ok(Tag::O);
        }
        let (kind, label) = s
            .split_once('-')
            .ok_or_else(|| Error::InvalidTag(s.to_string()))?;
        if !valid_label(label) {
            return Err(Error::InvalidTag(s.to_string()));
        }
        match kind {
            "B" => Ok(Tag::B(label.to_string())),
            "I" => Ok(Tag::I(label.to_string())),
            _ => Err(Error::InvalidTag(s.to_string())),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::B(l) => write!(f, "B-{l}"),
            Tag::I(l) => write!(f, "I-{l}"),
            Tag::O => f.write_str("O"),
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Whether `next` may follow `prev` (`None` = sentence start) in a legal
/// BIO sequence.
pub fn is_legal_transition(prev: Option<&Tag>, next: &Tag) -> bool {
    match next {
        Tag::I(label) => matches!(prev, Some(Tag::B(p)) | Some(Tag::I(p)) if p == label),
        _ => true,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub position: usize,
    pub description: &'static str,
}

pub const I_WITHOUT_B: &str = "I without B";
pub const LABEL_SWITCH: &str = "label switch inside I";

/// Lists every position holding an `I-X` that does not continue a `B-X` or
/// `I-X` run.
pub fn validate_bio(seq: &[Tag]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (position, tag) in seq.iter().enumerate() {
        let prev = position.checked_sub(1).map(|p| &seq[p]);
        if is_legal_transition(prev, tag) {
            continue;
        }
        let description = match prev {
            Some(Tag::B(_)) | Some(Tag::I(_)) => LABEL_SWITCH,
            _ => I_WITHOUT_B,
        };
        out.push(Violation {
            position,
            description,
        });
    }
    out
}

pub fn is_valid_bio(seq: &[Tag]) -> bool {
    seq.iter()
        .enumerate()
        .all(|(k, t)| is_legal_transition(k.checked_sub(1).map(|p| &seq[p]), t))
}

/// Rewrites every illegal `I-X` as `B-X`. Valid input is returned unchanged.
///
/// Decisions are taken left to right against the already-repaired prefix, so
/// `[B-Amount, I-Size, I-Size]` becomes `[B-Amount, B-Size, I-Size]`.
pub fn repair_bio(seq: &[Tag]) -> TagSequence {
    let mut out: TagSequence = Vec::with_capacity(seq.len());
    for tag in seq {
        let fixed = match tag {
            Tag::I(label) if !is_legal_transition(out.last(), tag) => Tag::B(label.clone()),
            _ => tag.clone(),
        };
        out.push(fixed);
    }
    out
}

/// Number of positions `repair_bio` changes.
pub fn count_repairs(seq: &[Tag]) -> usize {
    repair_bio(seq)
        .iter()
        .zip(seq)
        .filter(|(a, b)| a != b)
        .count()
}

/// Maximal `B-X (I-X)*` runs as mentions. The surface is rebuilt from the
/// token surfaces, with each inter-token gap rendered as spaces; callers that
/// hold the document text should re-slice it.
pub fn spans_from_tags(seq: &[Tag], tokens: &[Token]) -> Result<Vec<EntityMention>> {
    if seq.len() != tokens.len() {
        return Err(Error::LengthMismatch {
            expected: tokens.len(),
            found: seq.len(),
        });
    }
    if let Some(v) = validate_bio(seq).into_iter().next() {
        return Err(Error::InvalidBio {
            position: v.position,
            description: v.description,
        });
    }

    let mut mentions = Vec::new();
    let mut open: Option<(String, usize, usize)> = None; // label, first token, last token
    let close = |open: &mut Option<(String, usize, usize)>, mentions: &mut Vec<EntityMention>| {
        if let Some((label, first, last)) = open.take() {
            let mut surface = String::new();
            for k in first..=last {
                if k > first {
                    let gap = tokens[k].start.saturating_sub(tokens[k - 1].end);
                    surface.extend(std::iter::repeat_n(' ', gap));
                }
                surface.push_str(&tokens[k].surface);
            }
            mentions.push(EntityMention {
                label,
                start: tokens[first].start,
                end: tokens[last].end,
                surface,
            });
        }
    };

    for (k, tag) in seq.iter().enumerate() {
        match tag {
            Tag::B(label) => {
                close(&mut open, &mut mentions);
                open = Some((label.clone(), k, k));
            }
            Tag::I(_) => {
                if let Some(run) = open.as_mut() {
                    run.2 = k;
                }
            }
            Tag::O => close(&mut open, &mut mentions),
        }
    }
    close(&mut open, &mut mentions);
    Ok(mentions)
}

/// Inverse of [`spans_from_tags`] for token-aligned, non-overlapping mentions.
/// Mentions whose boundaries fall inside a token, or that cover no token,
/// are rejected; see `corpus::align_mentions_to_tags` for the snapping policy.
pub fn tags_from_spans(mentions: &[EntityMention], tokens: &[Token]) -> Result<TagSequence> {
    let mut tags = vec![Tag::O; tokens.len()];
    let starts: HashMap<usize, usize> = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| (t.start, i))
        .collect();
    let ends: HashMap<usize, usize> = tokens.iter().enumerate().map(|(i, t)| (t.end, i)).collect();

    for m in mentions {
        let (Some(&first), Some(&last)) = (starts.get(&m.start), ends.get(&m.end)) else {
            return Err(Error::UnalignableMention(m.to_string()));
        };
        if first > last {
            return Err(Error::UnalignableMention(m.to_string()));
        }
        for k in first..=last {
            if !tags[k].is_outside() {
                return Err(Error::OverlappingMentions {
                    first: m.to_string(),
                    second: format!("token {:?}", tokens[k].surface),
                });
            }
            tags[k] = if k == first {
                Tag::B(m.label.clone())
            } else {
                Tag::I(m.label.clone())
            };
        }
    }
    Ok(tags)
}

/// Ordered label set Σ. Always contains `O`; order is the sorted textual form,
/// fixed at construction, and is the only tie-break used by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAlphabet {
    tags: Vec<Tag>,
    index: HashMap<Tag, usize>,
}

impl LabelAlphabet {
    pub fn new<I: IntoIterator<Item = Tag>>(tags: I) -> Self {
        let mut tags: Vec<Tag> = tags.into_iter().chain(std::iter::once(Tag::O)).collect();
        tags.sort();
        tags.dedup();
        let index = tags
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        LabelAlphabet { tags, index }
    }

    /// `O` plus `B-X`/`I-X` for every entity type `X`.
    pub fn from_entity_types<'a, I: IntoIterator<Item = &'a str>>(types: I) -> Self {
        Self::new(
            types
                .into_iter()
                .flat_map(|t| [Tag::begin(t), Tag::inside(t)]),
        )
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn tag(&self, index: usize) -> &Tag {
        &self.tags[index]
    }

    pub fn index_of(&self, tag: &Tag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn contains(&self, tag: &Tag) -> bool {
        self.index.contains_key(tag)
    }

    /// Encodes a sequence as alphabet indices; fails on a tag outside Σ.
    pub fn encode(&self, seq: &[Tag]) -> Result<Vec<usize>> {
        seq.iter()
            .map(|t| {
                self.index_of(t)
                    .ok_or_else(|| Error::InvalidTag(format!("{t} (not in alphabet)")))
            })
            .collect()
    }

    pub fn decode(&self, indices: &[usize]) -> TagSequence {
        indices.iter().map(|&i| self.tags[i].clone()).collect()
    }
}

impl Serialize for LabelAlphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.tags.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabelAlphabet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let tags: Vec<Tag> = Vec::deserialize(deserializer)?;
        Ok(LabelAlphabet::new(tags))
    }
}
