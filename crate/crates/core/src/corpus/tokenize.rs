//! Deterministic rule-based tokenizer.
//!
//! Within each step (line):
//! 1. split on whitespace;
//! 2. every non-ASCII character that is not alphanumeric (`°`, `±`, `×`, ...)
//!    becomes a token of its own wherever it occurs;
//! 3. ASCII punctuation at either edge of what remains is peeled off one
//!    character at a time (`(5` → `(`, `5`; `NaCl.` → `NaCl`, `.`), while
//!    interior punctuation stays (`3.68`, `1:10`, `5-10`).

use super::document::{ProtocolDocument, Token};

fn is_symbol(c: char) -> bool {
    !c.is_ascii() && !c.is_alphanumeric() && !c.is_whitespace()
}

pub fn tokenize(doc: &ProtocolDocument) -> Vec<Token> {
    let chars: Vec<char> = doc.text().chars().collect();
    let mut tokens = Vec::new();
    for (sentence_index, step) in doc.steps().iter().enumerate() {
        let mut push = |start: usize, end: usize| {
            tokens.push(Token {
                surface: chars[start..end].iter().collect(),
                start,
                end,
                sentence_index,
            });
        };
        let mut i = step.start;
        while i < step.end {
            if chars[i].is_whitespace() {
                i += 1;
                continue;
            }
            let chunk_start = i;
            while i < step.end && !chars[i].is_whitespace() {
                i += 1;
            }
            let mut seg_start = chunk_start;
            for j in chunk_start..=i {
                if j == i || is_symbol(chars[j]) {
                    split_edges(&chars, seg_start, j, &mut push);
                    if j < i {
                        push(j, j + 1);
                    }
                    seg_start = j + 1;
                }
            }
        }
    }
    tokens
}

fn split_edges(
    chars: &[char],
    mut start: usize,
    mut end: usize,
    push: &mut impl FnMut(usize, usize),
) {
    let mut trailing = Vec::new();
    while start < end && chars[start].is_ascii_punctuation() {
        push(start, start + 1);
        start += 1;
    }
    while end > start && chars[end - 1].is_ascii_punctuation() {
        trailing.push(end - 1);
        end -= 1;
    }
    if start < end {
        push(start, end);
    }
    for p in trailing.into_iter().rev() {
        push(p, p + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spans(text: &str) -> Vec<(String, usize, usize)> {
        tokenize(&ProtocolDocument::new("t", text))
            .into_iter()
            .map(|t| (t.surface, t.start, t.end))
            .collect()
    }

    fn surfaces(text: &str) -> Vec<String> {
        spans(text).into_iter().map(|s| s.0).collect()
    }

    #[test]
    fn offsets_are_characters() {
        assert_eq!(
            spans("Put 3.68 g"),
            vec![
                ("Put".into(), 0, 3),
                ("3.68".into(), 4, 8),
                ("g".into(), 9, 10)
            ]
        );
        assert!(spans("").is_empty());
    }

    #[test]
    fn punctuation_and_symbols() {
        assert_eq!(surfaces("37°C."), ["37", "°", "C", "."]);
        assert_eq!(surfaces("(5 ml)."), ["(", "5", "ml", ")", "."]);
        assert_eq!(
            surfaces("1:10 dilution, 5-10 min"),
            ["1:10", "dilution", ",", "5-10", "min"]
        );
        assert_eq!(surfaces("±0.5µl"), ["±", "0.5µl"]);
    }

    #[test]
    fn sentences_follow_steps() {
        let toks = tokenize(&ProtocolDocument::new("t", "Title\n\nMix well.\n"));
        let idx: Vec<usize> = toks.iter().map(|t| t.sentence_index).collect();
        assert_eq!(idx, [0, 1, 1, 1]);
    }

    proptest! {
        #[test]
        fn tokens_cover_all_non_whitespace(text in "[a-z0-9 .,()°µ\n\t-]{0,40}") {
            let doc = ProtocolDocument::new("t", text.clone());
            let toks = tokenize(&doc);
            let chars: Vec<char> = text.chars().collect();
            let mut covered = vec![false; chars.len()];
            let mut last_end = 0;
            for t in &toks {
                prop_assert!(t.start < t.end && t.start >= last_end);
                prop_assert_eq!(doc.slice(t.start, t.end).unwrap(), t.surface.as_str());
                let step = doc.steps()[t.sentence_index];
                prop_assert!(step.start <= t.start && t.end <= step.end);
                covered[t.start..t.end].iter_mut().for_each(|c| *c = true);
                last_end = t.end;
            }
            for (c, cov) in chars.iter().zip(covered) {
                prop_assert_eq!(cov, !c.is_whitespace());
            }
        }
    }
}
