//! Plain-text views of the JSON reports.

use std::fmt::Write as _;

use serde_json::Value;
use wetlab_ner::eval::{render_confusions, ScoreReport};

use crate::commands::EvalReport;
use crate::pipeline::PipelineReport;

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

/// `key: value` lines; nested objects are indented, arrays inlined.
pub fn render_value(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if v.is_object() {
                    let _ = writeln!(out, "{:indent$}{k}:", "");
                    write_value(out, v, indent + 2);
                } else {
                    let _ = writeln!(out, "{:indent$}{k}: {}", "", inline(v));
                }
            }
        }
        other => {
            let _ = writeln!(out, "{:indent$}{}", "", inline(other));
        }
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn score_table(out: &mut String, name: &str, s: &ScoreReport) {
    let width = s
        .per_label
        .keys()
        .map(String::len)
        .chain([5])
        .max()
        .unwrap_or(5);
    let _ = writeln!(out, "{name}");
    let _ = writeln!(
        out,
        "{:<width$}  {:>6}  {:>6}  {:>6}  {:>5}  {:>5}  {:>5}",
        "label", "P", "R", "F1", "tp", "pred", "gold"
    );
    for (label, l) in &s.per_label {
        let _ = writeln!(
            out,
            "{label:<width$}  {:>6}  {:>6}  {:>6}  {:>5}  {:>5}  {:>5}",
            pct(l.precision),
            pct(l.recall),
            pct(l.f1),
            l.tp,
            l.predicted,
            l.gold
        );
    }
    let m = &s.micro;
    let _ = writeln!(
        out,
        "{:<width$}  {:>6}  {:>6}  {:>6}  {:>5}  {:>5}  {:>5}",
        "micro",
        pct(m.precision),
        pct(m.recall),
        pct(m.f1),
        m.tp,
        m.predicted,
        m.gold
    );
    let a = &s.macro_avg;
    let _ = writeln!(
        out,
        "{:<width$}  {:>6}  {:>6}  {:>6}",
        "macro",
        pct(a.precision),
        pct(a.recall),
        pct(a.f1)
    );
}

pub fn render_eval(report: &EvalReport) -> String {
    let mut out = String::new();
    if let Some(s) = &report.exact {
        score_table(&mut out, "exact match", s);
    }
    if let Some(s) = &report.partial {
        if !out.is_empty() {
            out.push('\n');
        }
        score_table(&mut out, "partial match", s);
    }
    if let Some(rows) = &report.confusions {
        out.push('\n');
        out.push_str(&render_confusions(rows));
    }
    out
}

pub fn render_pipeline(report: &PipelineReport) -> String {
    let mut out = String::new();
    let methods: Vec<&String> = report
        .rows
        .first()
        .map(|r| r.merged.keys().collect())
        .unwrap_or_default();
    let _ = write!(out, "{:>3}", "n");
    for m in &methods {
        let _ = write!(
            out,
            "  {:>10}  {:>10}",
            format!("{m} exact"),
            format!("{m} part.")
        );
    }
    let _ = writeln!(out, "  {:>20}", "individual exact");
    for row in &report.rows {
        let _ = write!(out, "{:>3}", row.n);
        for m in &methods {
            let s = &row.merged[*m];
            let _ = write!(out, "  {:>10}  {:>10}", pct(s.exact_f1), pct(s.partial_f1));
        }
        let e = row.individual.exact;
        let _ = writeln!(
            out,
            "  {:>20}",
            format!("{} [{}, {}]", pct(e.mean), pct(e.min), pct(e.max))
        );
    }
    let c = &report.checks;
    let _ = writeln!(
        out,
        "\nbio_valid: {}  sle_supported: {}  split_collisions: {}",
        c.bio_valid,
        c.sle_supported,
        c.split_collisions.len()
    );
    out
}
