use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::tagscheme::Tag;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionRow {
    #[serde(rename = "P_Label")]
    pub p_label: String,
    #[serde(rename = "T_Label")]
    pub t_label: String,
    #[serde(rename = "Count")]
    pub count: usize,
}

/// Token-level disagreement counts keyed by (predicted tag, true tag).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfusionTable {
    counts: BTreeMap<(String, String), usize>,
}

impl ConfusionTable {
    pub fn get(&self, predicted: &str, gold: &str) -> usize {
        self.counts
            .get(&(predicted.to_string(), gold.to_string()))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// All rows by descending count; ties in (predicted, true) order.
    pub fn rows(&self) -> Vec<ConfusionRow> {
        let mut rows: Vec<ConfusionRow> = self
            .counts
            .iter()
            .map(|((p, t), &count)| ConfusionRow {
                p_label: p.clone(),
                t_label: t.clone(),
                count,
            })
            .collect();
        rows.sort_by(|a, b| {
            b.count
                .cmp(&a.count)
                .then_with(|| (&a.p_label, &a.t_label).cmp(&(&b.p_label, &b.t_label)))
        });
        rows
    }

    pub fn top(&self, k: usize) -> Vec<ConfusionRow> {
        let mut rows = self.rows();
        rows.truncate(k);
        rows
    }
}

/// Renders rows as a `P_Label | T_Label | Count` text table.
pub fn render_confusions(rows: &[ConfusionRow]) -> String {
    let w1 = rows
        .iter()
        .map(|r| r.p_label.len())
        .chain([7])
        .max()
        .unwrap_or(7);
    let w2 = rows
        .iter()
        .map(|r| r.t_label.len())
        .chain([7])
        .max()
        .unwrap_or(7);
    let mut out = format!("{:<w1$}  {:<w2$}  Count\n", "P_Label", "T_Label");
    for r in rows {
        let _ = writeln!(out, "{:<w1$}  {:<w2$}  {}", r.p_label, r.t_label, r.count);
    }
    out
}

pub fn token_confusions(predicted: &[Vec<Tag>], gold: &[Vec<Tag>]) -> Result<ConfusionTable> {
    if predicted.len() != gold.len() {
        return Err(Error::LengthMismatch {
            expected: gold.len(),
            found: predicted.len(),
        });
    }
    let mut table = ConfusionTable::default();
    for (sentence, (p, g)) in predicted.iter().zip(gold).enumerate() {
        if p.len() != g.len() {
            return Err(Error::Alignment {
                sentence,
                message: format!("{} predicted tags for {} gold tags", p.len(), g.len()),
            });
        }
        for (a, b) in p.iter().zip(g) {
            if a != b {
                *table
                    .counts
                    .entry((a.to_string(), b.to_string()))
                    .or_insert(0) += 1;
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &str) -> Vec<Tag> {
        s.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn examples() {
        let same = vec![tags("B-Action O")];
        assert!(token_confusions(&same, &same).unwrap().is_empty());

        let t =
            token_confusions(&[tags("O B-Modifier")], &[tags("B-Modifier B-Modifier")]).unwrap();
        assert_eq!(
            t.rows(),
            vec![ConfusionRow {
                p_label: "O".into(),
                t_label: "B-Modifier".into(),
                count: 1
            }]
        );
        assert_eq!(t.total(), 1);
    }

    #[test]
    fn row_shape() {
        let t =
            token_confusions(&[tags("O O B-Action")], &[tags("B-Modifier B-Modifier O")]).unwrap();
        let json = serde_json::to_string(&t.top(1)).unwrap();
        assert_eq!(
            json,
            r#"[{"P_Label":"O","T_Label":"B-Modifier","Count":2}]"#
        );
        let text = render_confusions(&t.rows());
        assert_eq!(
            text.lines()
                .next()
                .unwrap()
                .split_whitespace()
                .collect::<Vec<_>>(),
            ["P_Label", "T_Label", "Count"]
        );
        assert_eq!(
            text.lines()
                .nth(2)
                .unwrap()
                .split_whitespace()
                .collect::<Vec<_>>(),
            ["B-Action", "O", "1"]
        );
    }

    #[test]
    fn length_mismatch() {
        assert!(token_confusions(&[tags("O")], &[tags("O O")]).is_err());
        assert!(token_confusions(&[tags("O")], &[]).is_err());
    }
}
