use serde::{Deserialize, Serialize};

/// Hand-crafted token features.
///
/// Templates, for the token at position `i`:
/// `bias`, lowercased surface, collapsed word shape (`Xx`, `d.d`, ...),
/// prefixes and suffixes of 1 to 4 characters, `num` for numeric literals,
/// `title` for capitalized words, and the lowercased surfaces at offsets
/// `-window..=window` (sentence edges read as `<s>` / `</s>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureExtractor {
    pub window: usize,
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        FeatureExtractor { window: 2 }
    }
}

pub fn word_shape(word: &str) -> String {
    let mut shape = String::new();
    for c in word.chars() {
        let s = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_numeric() {
            'd'
        } else {
            c
        };
        if !shape.ends_with(s) {
            shape.push(s);
        }
    }
    shape
}

fn is_numeric_literal(word: &str) -> bool {
    word.chars().any(|c| c.is_ascii_digit())
        && word
            .chars()
            .all(|c| c.is_ascii_digit() || c == '.' || c == ',')
}

fn is_title(word: &str) -> bool {
    let mut chars = word.chars();
    chars.next().is_some_and(char::is_uppercase) && chars.all(|c| !c.is_uppercase())
}

impl FeatureExtractor {
    pub fn extract(&self, surfaces: &[&str], i: usize) -> Vec<String> {
        let word = surfaces[i];
        let lower = word.to_lowercase();
        let chars: Vec<char> = lower.chars().collect();
        let mut out = vec![
            "bias".to_string(),
            format!("w={lower}"),
            format!("shape={}", word_shape(word)),
        ];
        for n in 1..=4.min(chars.len()) {
            out.push(format!("p{n}={}", chars[..n].iter().collect::<String>()));
            out.push(format!(
                "s{n}={}",
                chars[chars.len() - n..].iter().collect::<String>()
            ));
        }
        if is_numeric_literal(word) {
            out.push("num".to_string());
        }
        if is_title(word) {
            out.push("title".to_string());
        }
        let window = self.window as isize;
        for d in (-window..=window).filter(|&d| d != 0) {
            let j = i as isize + d;
            let context = if j < 0 {
                "<s>".to_string()
            } else if j as usize >= surfaces.len() {
                "</s>".to_string()
            } else {
                surfaces[j as usize].to_lowercase()
            };
            out.push(format!("w[{d:+}]={context}"));
        }
        out
    }
}
