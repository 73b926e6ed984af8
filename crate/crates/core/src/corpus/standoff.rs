//! BRAT standoff: a `.txt` document and an `.ann` file sharing its base name.
//!
//! Only text-bound annotations (`T` lines) are read:
//!
//! ```text
//! T<n>\t<Type> <start> <end>\t<surface>
//! ```
//!
//! Offsets count Unicode scalar values. Relations, events, attributes and
//! notes (`R`, `E`, `A`, `#`, ...) are skipped and counted.

use super::document::{check_no_overlap, EntityMention, ProtocolDocument};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StandoffOptions {
    /// Keep overlapping mentions instead of rejecting them. Such documents
    /// still fail at BIO conversion.
    pub allow_overlap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandoffDocument {
    pub document: ProtocolDocument,
    pub mentions: Vec<EntityMention>,
    /// Non-entity annotation lines that were ignored.
    pub skipped: usize,
}

pub fn parse_standoff(
    txt: &str,
    ann: &str,
    id: &str,
    options: StandoffOptions,
) -> Result<StandoffDocument> {
    let document = ProtocolDocument::new(id, txt);
    let mut mentions = Vec::new();
    let mut skipped = 0;

    for (n, raw) in ann.split('\n').enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        if !line.starts_with('T') {
            skipped += 1;
            continue;
        }
        let malformed = |message: String| Error::MalformedAnnotation {
            line: line_no,
            message,
        };
        let mut fields = line.splitn(3, '\t');
        let (Some(ann_id), Some(body), Some(surface)) =
            (fields.next(), fields.next(), fields.next())
        else {
            return Err(malformed(format!(
                "expected three TAB-separated fields in {line:?}"
            )));
        };
        if ann_id.len() < 2 || !ann_id[1..].chars().all(|c| c.is_ascii_digit()) {
            return Err(malformed(format!("bad annotation id {ann_id:?}")));
        }
        let parts: Vec<&str> = body.split(' ').collect();
        let [label, start, end] = parts[..] else {
            return Err(malformed(format!(
                "expected `<Type> <start> <end>` in {body:?} (discontinuous spans are not supported)"
            )));
        };
        if label.is_empty() {
            return Err(malformed("empty entity type".to_string()));
        }
        let parse_offset = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| malformed(format!("bad offset {s:?}")))
        };
        let (start, end) = (parse_offset(start)?, parse_offset(end)?);

        if start >= end || end > document.char_len() {
            return Err(Error::OffsetOutOfRange {
                id: ann_id.to_string(),
                start,
                end,
                len: document.char_len(),
            });
        }
        let expected = document.slice(start, end).unwrap_or_default();
        if expected != surface {
            return Err(Error::SurfaceMismatch {
                id: ann_id.to_string(),
                expected: expected.to_string(),
                found: surface.to_string(),
            });
        }
        mentions.push(EntityMention::new(label, start, end, surface));
    }

    if skipped > 0 {
        log::warn!("{id}: skipped {skipped} non-entity annotation line(s)");
    }
    if !options.allow_overlap {
        check_no_overlap(&mentions)?;
    }
    Ok(StandoffDocument {
        document,
        mentions,
        skipped,
    })
}

/// Renders `(txt, ann)`. Annotation ids are `T1..Tn` in mention order.
pub fn write_standoff(
    document: &ProtocolDocument,
    mentions: &[EntityMention],
    options: StandoffOptions,
) -> Result<(String, String)> {
    if !options.allow_overlap {
        check_no_overlap(mentions)?;
    }
    let mut ann = String::new();
    for (i, m) in mentions.iter().enumerate() {
        let slice = document.slice(m.start, m.end);
        if m.start >= m.end || slice.is_none() {
            return Err(Error::OffsetOutOfRange {
                id: format!("T{}", i + 1),
                start: m.start,
                end: m.end,
                len: document.char_len(),
            });
        }
        if slice != Some(m.surface.as_str()) {
            return Err(Error::SurfaceMismatch {
                id: format!("T{}", i + 1),
                expected: slice.unwrap_or_default().to_string(),
                found: m.surface.clone(),
            });
        }
        if m.surface.contains(['\n', '\r']) {
            return Err(Error::StandoffWrite(format!(
                "mention {m} spans a line break"
            )));
        }
        if m.label.is_empty() || m.label.contains(char::is_whitespace) {
            return Err(Error::StandoffWrite(format!(
                "entity type {:?} is not writable",
                m.label
            )));
        }
        ann.push_str(&format!(
            "T{}\t{} {} {}\t{}\n",
            i + 1,
            m.label,
            m.start,
            m.end,
            m.surface
        ));
    }
    Ok((document.text().to_string(), ann))
}
