use super::document::{check_no_overlap, EntityMention, Token};
use crate::tagscheme::{Tag, TagSequence};
use crate::{Error, Result};

/// What to do with a mention whose boundaries do not coincide with token
/// boundaries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BoundaryPolicy {
    #[default]
    Error,
    /// Widen (or, across whitespace, narrow) the mention to the tokens it
    /// touches, logging a warning.
    Snap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// One tag sequence per sentence.
    pub tags: Vec<TagSequence>,
    pub snapped: usize,
}

/// Projects mentions onto BIO tags. `tokens` must be ordered by offset (as
/// produced by `tokenize`); `sentences` is the number of sentences, so
/// sentences without tokens still get an (empty) sequence.
pub fn align_mentions_to_tags(
    tokens: &[Token],
    mentions: &[EntityMention],
    sentences: usize,
    policy: BoundaryPolicy,
) -> Result<Alignment> {
    check_no_overlap(mentions)?;

    let sentences = sentences.max(
        tokens
            .iter()
            .map(|t| t.sentence_index + 1)
            .max()
            .unwrap_or(0),
    );
    let mut position = Vec::with_capacity(tokens.len());
    let mut lengths = vec![0usize; sentences];
    for t in tokens {
        position.push(lengths[t.sentence_index]);
        lengths[t.sentence_index] += 1;
    }
    let mut tags: Vec<TagSequence> = lengths.iter().map(|&n| vec![Tag::O; n]).collect();
    let mut snapped = 0;

    for m in mentions {
        let first = tokens.partition_point(|t| t.end <= m.start);
        let last = tokens.partition_point(|t| t.start < m.end);
        if first >= last {
            return Err(Error::UnalignableMention(format!("{m} (covers no token)")));
        }
        let covered = &tokens[first..last];
        let sentence = covered[0].sentence_index;
        if covered.iter().any(|t| t.sentence_index != sentence) {
            return Err(Error::UnalignableMention(format!(
                "{m} (crosses a sentence boundary)"
            )));
        }
        let (head, tail) = (&covered[0], &covered[covered.len() - 1]);
        if head.start != m.start || tail.end != m.end {
            match policy {
                BoundaryPolicy::Error => {
                    let token = if head.start != m.start { head } else { tail };
                    return Err(Error::BoundaryInsideToken {
                        mention: m.to_string(),
                        token: token.surface.clone(),
                    });
                }
                BoundaryPolicy::Snap => {
                    log::warn!(
                        "snapping {m} to token boundaries {}..{}",
                        head.start,
                        tail.end
                    );
                    snapped += 1;
                }
            }
        }
        for (k, idx) in (first..last).enumerate() {
            let slot = &mut tags[sentence][position[idx]];
            if !slot.is_outside() {
                return Err(Error::OverlappingMentions {
                    first: m.to_string(),
                    second: format!(
                        "another mention on token {:?} after snapping",
                        tokens[idx].surface
                    ),
                });
            }
            *slot = if k == 0 {
                Tag::B(m.label.clone())
            } else {
                Tag::I(m.label.clone())
            };
        }
    }
    Ok(Alignment { tags, snapped })
}
