use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use wetlab_ner::corpus::synthetic::{synthetic_corpus, SyntheticConfig};
use wetlab_ner::corpus::{BoundaryPolicy, TaggedDocument};
use wetlab_ner_cli::commands::{to_json, TrainArgs};
use wetlab_ner_cli::pipeline::{run_pipeline, PipelineConfig};

const BIN: &str = env!("CARGO_BIN_EXE_wetlab-ner");

fn corpus(documents: usize, seed: u64, prefix: &str) -> Vec<TaggedDocument> {
    let config = SyntheticConfig {
        documents,
        seed,
        id_prefix: prefix.to_string(),
        label_noise: 0.1,
        ..SyntheticConfig::default()
    };
    synthetic_corpus(&config)
        .into_iter()
        .map(|d| {
            TaggedDocument::from_standoff(d.document, &d.mentions, BoundaryPolicy::Error)
                .unwrap()
                .0
        })
        .collect()
}

fn quick(n_models: usize) -> PipelineConfig {
    PipelineConfig {
        n_models,
        seed_base: 40,
        train: TrainArgs {
            max_epochs: 5,
            ..TrainArgs::default()
        },
        ..PipelineConfig::default()
    }
}

#[test]
fn one_model_ensemble_equals_the_model() {
    let pool = corpus(12, 3, "pool_");
    let test = corpus(5, 4, "test_");
    let report = run_pipeline(&pool, &test, &quick(1)).unwrap();
    assert_eq!(report.rows.len(), 1);
    let model = &report.models[0];
    for merged in report.rows[0].merged.values() {
        assert_eq!(merged.exact_f1, model.exact_f1);
        assert_eq!(merged.partial_f1, model.partial_f1);
    }
}

#[test]
fn report_does_not_depend_on_scheduling() {
    let pool = corpus(12, 3, "pool_");
    let test = corpus(5, 4, "test_");
    let parallel = run_pipeline(&pool, &test, &quick(5)).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_pipeline(&pool, &test, &quick(5)).unwrap());
    assert_eq!(to_json(&parallel).unwrap(), to_json(&single).unwrap());
    assert_eq!(
        parallel.rows.iter().map(|r| r.n).collect::<Vec<_>>(),
        vec![3, 5]
    );
    assert!(parallel.checks.bio_valid && parallel.checks.sle_supported);
    for row in &parallel.rows {
        for m in row.merged.values() {
            assert!(m.partial_f1 >= m.exact_f1);
        }
    }
}

#[test]
fn test_documents_must_not_be_in_the_pool() {
    let pool = corpus(6, 3, "p_");
    let err = run_pipeline(&pool, &pool[..2], &quick(1)).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

fn write_standoff_dir(dir: &Path, count: usize, seed: u64, prefix: &str) {
    let status = Command::new(BIN)
        .args([
            "synth",
            "--documents",
            &count.to_string(),
            "--seed",
            &seed.to_string(),
            "--id-prefix",
            prefix,
        ])
        .args(["--label-noise", "0.1", "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(status.status.success());
}

fn bin(args: &[&str]) -> Value {
    let out = Command::new(BIN).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn pipeline_equals_the_manual_chain() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let (pool, test) = (root.join("pool"), root.join("test"));
    write_standoff_dir(&pool, 12, 5, "pool_");
    write_standoff_dir(&test, 5, 6, "test_");
    let s = |p: &Path| p.to_str().unwrap().to_string();

    let run_dir = root.join("run");
    let report = bin(&[
        "pipeline",
        "--pool",
        &s(&pool),
        "--test",
        &s(&test),
        "--n-models",
        "3",
        "--seed",
        "100",
        "--max-epochs",
        "5",
        "--out",
        &s(&run_dir),
    ]);
    let on_disk: Value =
        serde_json::from_slice(&fs::read(run_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report, on_disk);

    let mut preds = Vec::new();
    for i in 1..=3u64 {
        let seed = (100 + i).to_string();
        let split = root.join(format!("split_{i}.json"));
        let model = root.join(format!("model_{i}.json"));
        let pred = root.join(format!("pred_{i}"));
        bin(&["split", &s(&pool), "--seed", &seed, "--out", &s(&split)]);
        bin(&[
            "train",
            &s(&pool),
            "--split",
            &s(&split),
            "--seed",
            &seed,
            "--max-epochs",
            "5",
            "--out",
            &s(&model),
        ]);
        bin(&["tag", "--model", &s(&model), &s(&test), "--out", &s(&pred)]);
        assert_eq!(
            fs::read(&split).unwrap(),
            fs::read(run_dir.join(format!("splits/split_{i:02}.json"))).unwrap()
        );
        assert_eq!(
            fs::read(&model).unwrap(),
            fs::read(run_dir.join(format!("models/model_{i:02}.json"))).unwrap()
        );
        let e = bin(&["eval", "--gold", &s(&test), "--pred", &s(&pred)]);
        let m = &report["models"][(i - 1) as usize];
        assert_eq!(e["exact"]["micro"]["f1"], m["exact_f1"]);
        assert_eq!(e["partial"]["micro"]["f1"], m["partial_f1"]);
        preds.push(s(&pred));
    }
    for (method, key) in [("majv", "MajV"), ("sle", "SLE")] {
        let merged = root.join(format!("merged_{method}"));
        let mut args = vec!["merge".to_string()];
        args.extend(preds.iter().cloned());
        args.extend(["--method".into(), method.into(), "--out".into(), s(&merged)]);
        bin(&args.iter().map(String::as_str).collect::<Vec<_>>());
        let e = bin(&["eval", "--gold", &s(&test), "--pred", &s(&merged)]);
        let row = &report["rows"][0];
        assert_eq!(row["n"], 3);
        assert_eq!(
            e["exact"]["micro"]["f1"], row["merged"][key]["exact_f1"],
            "{method}"
        );
        assert_eq!(
            e["partial"]["micro"]["f1"], row["merged"][key]["partial_f1"],
            "{method}"
        );
        let sidecar_a = fs::read(merged.join("sidecar.json")).unwrap();
        let sidecar_b = fs::read(run_dir.join(format!("merged/{method}_03/sidecar.json"))).unwrap();
        assert_eq!(sidecar_a, sidecar_b);
    }
}
