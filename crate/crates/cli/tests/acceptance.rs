//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wetlab_ner::corpus::synthetic::{synthetic_corpus, SyntheticConfig};
use wetlab_ner::corpus::{
    parse_conll, parse_standoff, write_conll, write_standoff, BoundaryPolicy, ConllToken,
    EntityMention, StandoffOptions, TaggedDocument, TaggedSentence, Token,
};
use wetlab_ner::ensemble::{
    brute_force_merge, build_counts, is_supported, majority_vote, sle_merge, PredictionSet,
};
use wetlab_ner::eval::{
    render_confusions, score_pairs, score_sentences, token_confusions, MatchCriterion,
    MatchStrategy,
};
use wetlab_ner::tagger::{predict, train, FeatureExtractor, TaggerModel, TrainConfig};
use wetlab_ner::tagscheme::{is_valid_bio, LabelAlphabet, Tag, TagSequence};
use wetlab_ner_cli::commands::to_json;
use wetlab_ner_cli::pipeline::{run_pipeline, PipelineConfig};

const SLE_INSTANCES: usize = 500;
const SLE_TIME_LIMIT: Duration = Duration::from_secs(30);
const VOTE_INSTANCES: usize = 500;
const VOTE_PROPERTY_INSTANCES: usize = 100;
const METRIC_PAIRS: usize = 1000;
const HAND_F1: f64 = 2.0 / 3.0;
const HAND_F1_TOLERANCE: f64 = 1e-9;
const CONLL_CORPORA: usize = 100;
const TAGGER_SENTENCES: usize = 200;
const TAGGER_EPOCHS: usize = 30;
const TAGGER_TRAIN_F1: f64 = 0.99;
const TAGGER_HELD_OUT_F1: f64 = 0.90;
const TAGGER_TIME_LIMIT: Duration = Duration::from_secs(120);
const VITERBI_INSTANCES: usize = 200;
const PIPELINE_MODELS: usize = 11;

type Outcome = Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn tag(s: &str) -> Tag {
    s.parse().unwrap()
}

fn tags(s: &str) -> TagSequence {
    s.split_whitespace().map(tag).collect()
}

const POOL: [&str; 4] = ["B-Action", "O", "I-Action", "B-Reagent"];

fn random_set(
    rng: &mut ChaCha8Rng,
    sizes: (usize, usize),
    lens: (usize, usize),
    models: (usize, usize),
) -> PredictionSet {
    let s = rng.random_range(sizes.0..=sizes.1);
    let l = rng.random_range(lens.0..=lens.1);
    let n = rng.random_range(models.0..=models.1);
    let labels: Vec<Tag> = POOL[..s].iter().map(|t| tag(t)).collect();
    let alphabet = LabelAlphabet::new(labels.clone());
    let seqs: Vec<TagSequence> = (0..n)
        .map(|_| {
            (0..l)
                .map(|_| labels[rng.random_range(0..s)].clone())
                .collect()
        })
        .collect();
    PredictionSet::new(&seqs, Some(alphabet)).unwrap()
}

fn sle_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut differing_from_vote = 0;
    for i in 0..SLE_INSTANCES {
        let p = random_set(&mut rng, (2, 4), (1, 6), (1, 7));
        let s = sle_merge(&p).map_err(|e| e.to_string())?;
        let b = brute_force_merge(&p).map_err(|e| e.to_string())?;
        ensure(s.raw_tags == b.raw_tags, || {
            format!("instance {i}: tags {:?} vs {:?}", s.raw_tags, b.raw_tags)
        })?;
        ensure(s.log_score.to_bits() == b.log_score.to_bits(), || {
            format!("instance {i}: score {} vs {}", s.log_score, b.log_score)
        })?;
        ensure(s.log_score.is_finite(), || {
            format!("instance {i}: non-finite score")
        })?;
        let raw = p.alphabet().encode(&s.raw_tags).unwrap();
        ensure(is_supported(&build_counts(&p), &raw), || {
            format!("instance {i}: unsupported output")
        })?;
        ensure(is_valid_bio(&s.tags), || {
            format!("instance {i}: invalid BIO after repair")
        })?;
        if s.raw_tags != majority_vote(&p).raw_tags {
            differing_from_vote += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SLE_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{SLE_INSTANCES} instances agree exactly in tags and log-score, {differing_from_vote} differ from MajV, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn naive_votes(p: &PredictionSet, k: usize) -> HashMap<Tag, usize> {
    let mut votes = HashMap::new();
    for m in 0..p.n_models() {
        *votes.entry(p.sequence(m)[k].clone()).or_insert(0) += 1;
    }
    votes
}

fn majority_vote_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ties = 0;
    for i in 0..VOTE_INSTANCES {
        let p = random_set(&mut rng, (2, 4), (1, 8), (1, 9));
        let m = majority_vote(&p);
        for (k, winner) in m.raw_tags.iter().enumerate() {
            let votes = naive_votes(&p, k);
            let best = votes.values().copied().max().unwrap_or(0);
            let got = votes.get(winner).copied().unwrap_or(0);
            ensure(got == best, || {
                format!("instance {i} position {k}: {winner} has {got} votes, max is {best}")
            })?;
            let mut tied: Vec<&Tag> = votes
                .iter()
                .filter(|(_, &c)| c == best)
                .map(|(t, _)| t)
                .collect();
            tied.sort();
            if tied.len() > 1 {
                ties += 1;
            }
            ensure(tied[0] == winner, || {
                format!("instance {i} position {k}: tie not broken by alphabet order")
            })?;
        }
        ensure(is_valid_bio(&m.tags), || {
            format!("instance {i}: invalid BIO after repair")
        })?;
    }
    ensure(
        majority_vote(&PredictionSet::new(&[tags("O"), tags("B-Action")], None).unwrap()).tags
            == tags("B-Action"),
        || "tie B-Action/O did not go to B-Action".into(),
    )?;

    for i in 0..VOTE_PROPERTY_INSTANCES {
        let p = random_set(&mut rng, (2, 4), (1, 8), (1, 9));
        let one = p.sequence(0);
        let n = p.n_models();
        let unanimous =
            PredictionSet::new(&vec![one.clone(); n], Some(p.alphabet().clone())).unwrap();
        ensure(majority_vote(&unanimous).raw_tags == one, || {
            format!("instance {i}: MajV not unanimous")
        })?;
        ensure(sle_merge(&unanimous).unwrap().raw_tags == one, || {
            format!("instance {i}: SLE not unanimous")
        })?;

        let mut seqs: Vec<TagSequence> = (0..n).map(|m| p.sequence(m)).collect();
        seqs.shuffle(&mut rng);
        let q = PredictionSet::new(&seqs, Some(p.alphabet().clone())).unwrap();
        ensure(majority_vote(&p) == majority_vote(&q), || {
            format!("instance {i}: MajV depends on model order")
        })?;
        ensure(sle_merge(&p).unwrap() == sle_merge(&q).unwrap(), || {
            format!("instance {i}: SLE depends on model order")
        })?;
    }
    Ok(format!(
        "{VOTE_INSTANCES} instances match a naive counter ({ties} tied positions), {VOTE_PROPERTY_INSTANCES} unanimity/permutation instances"
    ))
}

fn random_mentions(rng: &mut ChaCha8Rng, min: usize) -> Vec<EntityMention> {
    let labels = ["Action", "Reagent", "Amount"];
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < 60 {
        pos += rng.random_range(0..4);
        let len = rng.random_range(1..6);
        if rng.random_bool(0.6) {
            let label = labels[rng.random_range(0..labels.len())];
            out.push(EntityMention::new(label, pos, pos + len, "x".repeat(len)));
        }
        pos += len;
    }
    if out.len() < min {
        out.push(EntityMention::new("Action", 100, 102, "xx"));
    }
    out
}

fn metric_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut strictly_greater = 0;
    for i in 0..METRIC_PAIRS {
        let p = random_mentions(&mut rng, 0);
        let t = random_mentions(&mut rng, 1);
        let pair = [(p.as_slice(), t.as_slice())];
        let exact = score_pairs(pair, MatchCriterion::Exact, MatchStrategy::Greedy)
            .map_err(|e| e.to_string())?;
        let partial = score_pairs(pair, MatchCriterion::Partial, MatchStrategy::Greedy)
            .map_err(|e| e.to_string())?;
        ensure(partial.micro.f1 >= exact.micro.f1, || {
            format!(
                "pair {i}: partial {} < exact {}",
                partial.micro.f1, exact.micro.f1
            )
        })?;
        if partial.micro.f1 > exact.micro.f1 {
            strictly_greater += 1;
        }
        let same = [(t.as_slice(), t.as_slice())];
        for criterion in [MatchCriterion::Exact, MatchCriterion::Partial] {
            let s =
                score_pairs(same, criterion, MatchStrategy::Greedy).map_err(|e| e.to_string())?;
            ensure(s.micro.f1 == 1.0, || {
                format!("pair {i}: score(T, T) = {}", s.micro.f1)
            })?;
        }
    }

    // tp = 3, |P| = 4, |T| = 5
    let m = |l: &str, s: usize, e: usize| EntityMention::new(l, s, e, "x".repeat(e - s));
    let gold = vec![
        m("Action", 0, 3),
        m("Reagent", 4, 8),
        m("Amount", 9, 11),
        m("Action", 12, 15),
        m("Reagent", 16, 20),
    ];
    let pred = vec![
        m("Action", 0, 3),
        m("Reagent", 4, 8),
        m("Amount", 9, 11),
        m("Reagent", 12, 15),
    ];
    let s = score_pairs(
        [(pred.as_slice(), gold.as_slice())],
        MatchCriterion::Exact,
        MatchStrategy::Greedy,
    )
    .map_err(|e| e.to_string())?;
    ensure((s.micro.precision, s.micro.recall) == (0.75, 0.6), || {
        format!("P/R {} {}", s.micro.precision, s.micro.recall)
    })?;
    ensure((s.micro.f1 - HAND_F1).abs() <= HAND_F1_TOLERANCE, || {
        format!("F1 {}", s.micro.f1)
    })?;
    ensure(format!("{:.4}", s.micro.f1) == "0.6667", || {
        format!("F1 {}", s.micro.f1)
    })?;
    Ok(format!(
        "{METRIC_PAIRS} pairs: partial >= exact ({strictly_greater} strictly), score(T,T) = 1.0; hand fixture F1 {:.4}",
        s.micro.f1
    ))
}

fn random_conll(rng: &mut ChaCha8Rng) -> Vec<Vec<ConllToken>> {
    let words = [
        "Put", "3.68", "g", "of", "NaCl", "°C", "µl", "tube", "(", ")", "37°C", "-20", "x-y",
    ];
    let labels = [
        "O",
        "B-Action",
        "I-Action",
        "B-Amount",
        "I-Amount",
        "B-Reagent",
    ];
    (0..rng.random_range(1..6))
        .map(|_| {
            (0..rng.random_range(1..9))
                .map(|_| {
                    ConllToken::new(
                        words[rng.random_range(0..words.len())],
                        labels[rng.random_range(0..labels.len())],
                    )
                })
                .collect()
        })
        .collect()
}

fn format_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..CONLL_CORPORA {
        let corpus = random_conll(&mut rng);
        let text = write_conll(&corpus).map_err(|e| e.to_string())?;
        let parsed = parse_conll(&text).map_err(|e| e.to_string())?;
        ensure(parsed == corpus, || {
            format!("corpus {i}: parse(write(c)) != c")
        })?;
        ensure(write_conll(&parsed).unwrap() == text, || {
            format!("corpus {i}: write(parse(t)) != t")
        })?;
    }

    let mut mentions_checked = 0;
    for d in synthetic_corpus(&SyntheticConfig {
        documents: 20,
        seed: 4,
        ..SyntheticConfig::default()
    }) {
        let (txt, ann) = write_standoff(&d.document, &d.mentions, StandoffOptions::default())
            .map_err(|e| e.to_string())?;
        let back = parse_standoff(&txt, &ann, d.document.id(), StandoffOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(back.mentions == d.mentions, || {
            format!("{}: mentions changed", d.document.id())
        })?;
        let (tagged, _) =
            TaggedDocument::from_standoff(back.document, &back.mentions, BoundaryPolicy::Error)
                .map_err(|e| e.to_string())?;
        let conll = write_conll(&tagged.to_conll()).unwrap();
        let anchored = TaggedDocument::from_conll_anchored(
            d.document.id(),
            &parse_conll(&conll).unwrap(),
            &txt,
        )
        .map_err(|e| e.to_string())?;
        ensure(anchored.mentions().unwrap() == d.mentions, || {
            format!("{}: CoNLL round-trip lost mentions", d.document.id())
        })?;
        mentions_checked += d.mentions.len();
    }

    let put = parse_standoff(
        "Put 3.68 g of sodium chloride into a microcentrifuge tube.\n",
        "T1\tAction 0 3\tPut\n",
        "put",
        StandoffOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let m = &put.mentions[..];
    ensure(
        m.len() == 1 && (m[0].label.as_str(), m[0].start, m[0].end) == ("Action", 0, 3),
        || format!("{m:?}"),
    )?;
    Ok(format!(
        "{CONLL_CORPORA} CoNLL corpora identical, {mentions_checked} standoff mentions preserved, Put -> (Action, 0, 3)"
    ))
}

fn separable_corpus(rng: &mut ChaCha8Rng) -> Vec<TaggedSentence> {
    let types = ["Action", "Reagent", "Device", "Time"];
    let begin: Vec<Vec<String>> = types
        .iter()
        .map(|t| (0..8).map(|i| format!("{}{i}", t.to_lowercase())).collect())
        .collect();
    let inside: Vec<Vec<String>> = types
        .iter()
        .map(|t| {
            (0..4)
                .map(|i| format!("{}-part{i}", t.to_lowercase()))
                .collect()
        })
        .collect();
    let outside: Vec<String> = ["the", "a", "of", "to", "with", "and", "then", "into"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    (0..TAGGER_SENTENCES)
        .map(|_| {
            let mut tokens = Vec::new();
            let mut tags = Vec::new();
            let mut pos = 0;
            let mut push = |w: &str, t: Tag, tokens: &mut Vec<Token>, tags: &mut Vec<Tag>| {
                let len = w.chars().count();
                tokens.push(Token {
                    surface: w.to_string(),
                    start: pos,
                    end: pos + len,
                    sentence_index: 0,
                });
                tags.push(t);
                pos += len + 1;
            };
            for _ in 0..rng.random_range(3..8) {
                if rng.random_bool(0.4) {
                    let w = &outside[rng.random_range(0..outside.len())];
                    push(w, Tag::O, &mut tokens, &mut tags);
                } else {
                    let t = rng.random_range(0..types.len());
                    push(
                        &begin[t][rng.random_range(0..8)],
                        Tag::begin(types[t]),
                        &mut tokens,
                        &mut tags,
                    );
                    for _ in 0..rng.random_range(0..3) {
                        push(
                            &inside[t][rng.random_range(0..4)],
                            Tag::inside(types[t]),
                            &mut tokens,
                            &mut tags,
                        );
                    }
                }
            }
            TaggedSentence { tokens, tags }
        })
        .collect()
}

fn all_paths(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| (0..n).map(move |t| [p.clone(), vec![t]].concat()))
            .collect();
    }
    out
}

fn tagger_sanity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let data = separable_corpus(&mut rng);
    let (train_set, rest) = data.split_at(140);
    let (validation, held_out) = rest.split_at(30);
    let config = TrainConfig {
        max_epochs: TAGGER_EPOCHS,
        ..TrainConfig::default()
    };
    let (model, report) = train(train_set, validation, &config).map_err(|e| e.to_string())?;
    let f1 = |set: &[TaggedSentence]| {
        score_sentences(&predict(&model, set), set, MatchCriterion::Exact).map(|r| r.micro.f1)
    };
    let train_f1 = f1(train_set).map_err(|e| e.to_string())?;
    let held_f1 = f1(held_out).map_err(|e| e.to_string())?;
    ensure(report.epochs.len() <= TAGGER_EPOCHS, || {
        "epoch cap exceeded".into()
    })?;
    ensure(train_f1 >= TAGGER_TRAIN_F1, || {
        format!("training F1 {train_f1}")
    })?;
    ensure(held_f1 >= TAGGER_HELD_OUT_F1, || {
        format!("held-out F1 {held_f1}")
    })?;

    for i in 0..VITERBI_INSTANCES {
        let labels: Vec<Tag> = ["B-A", "I-A", "B-B"][..rng.random_range(0..=3)]
            .iter()
            .map(|t| tag(t))
            .collect();
        let alphabet = LabelAlphabet::new(labels);
        let n = alphabet.len();
        let len = rng.random_range(1..=5);
        let enforce = rng.random_bool(0.5);
        let surfaces: Vec<String> = (0..len).map(|k| format!("t{k}")).collect();
        let features: Vec<String> = surfaces.iter().map(|s| format!("w={s}")).collect();
        let emission: Vec<f64> = (0..len * n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let transition: Vec<f64> = (0..n * n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let m = TaggerModel::from_parts(
            alphabet,
            FeatureExtractor { window: 0 },
            features,
            emission,
            transition,
            false,
            enforce,
        )
        .map_err(|e| e.to_string())?;
        let refs: Vec<&str> = surfaces.iter().map(String::as_str).collect();
        let scores = m.emission_scores(&refs);
        let mut best: Option<(f64, Vec<usize>)> = None;
        for path in all_paths(n, len) {
            if enforce && !is_valid_bio(&m.alphabet().decode(&path)) {
                continue;
            }
            let s = m.path_score(&scores, &path);
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                best = Some((s, path));
            }
        }
        let (best_score, best_path) = best.ok_or("no legal path")?;
        let decoded = m.decode_indices(&refs);
        ensure(m.path_score(&scores, &decoded) == best_score, || {
            format!("instance {i}: decode is not optimal")
        })?;
        ensure(decoded == best_path, || {
            format!("instance {i}: {decoded:?} vs {best_path:?}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TAGGER_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "train F1 {train_f1:.4}, held-out F1 {held_f1:.4} after {} epochs (best {}); Viterbi = enumeration on {VITERBI_INSTANCES}; {:.2}s",
        report.epochs.len(),
        report.best_epoch,
        elapsed.as_secs_f64()
    ))
}

fn synthetic_tagged(documents: usize, seed: u64, prefix: &str) -> Vec<TaggedDocument> {
    let config = SyntheticConfig {
        documents,
        seed,
        id_prefix: prefix.into(),
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

fn pipeline_shape() -> Outcome {
    let pool = synthetic_tagged(30, 1, "protocol_");
    let test = synthetic_tagged(10, 2, "test_");
    let config = PipelineConfig {
        n_models: PIPELINE_MODELS,
        ..PipelineConfig::default()
    };
    let first = run_pipeline(&pool, &test, &config).map_err(|e| e.to_string())?;
    let second = run_pipeline(&pool, &test, &config).map_err(|e| e.to_string())?;
    ensure(
        to_json(&first).unwrap() == to_json(&second).unwrap(),
        || "reports differ between runs".into(),
    )?;
    let sizes: Vec<usize> = first.rows.iter().map(|r| r.n).collect();
    ensure(sizes == [3, 5, 7, 9, 11], || format!("rows {sizes:?}"))?;
    for row in &first.rows {
        let methods: Vec<&str> = row.merged.keys().map(String::as_str).collect();
        ensure(methods == ["MajV", "SLE"], || {
            format!("row {}: methods {methods:?}", row.n)
        })?;
        ensure(row.merged.values().all(|m| m.bio_valid), || {
            format!("row {}: invalid BIO", row.n)
        })?;
        ensure(row.merged["SLE"].supported, || {
            format!("row {}: SLE output unsupported", row.n)
        })?;
    }
    ensure(first.checks.bio_valid && first.checks.sle_supported, || {
        "checks failed".into()
    })?;
    let last = &first.rows[first.rows.len() - 1];
    Ok(format!(
        "rows 3..11 x MajV/SLE, reproducible; at 11: MajV {:.2} / SLE {:.2} exact, {:.2} / {:.2} partial; individual mean {:.2}",
        100.0 * last.merged["MajV"].exact_f1,
        100.0 * last.merged["SLE"].exact_f1,
        100.0 * last.merged["MajV"].partial_f1,
        100.0 * last.merged["SLE"].partial_f1,
        100.0 * first.individual.exact.mean
    ))
}

fn confusion_table() -> Outcome {
    let pred = vec![
        tags("B-Action O B-Amount O O B-Reagent B-Reagent O"),
        tags("B-Action O O B-Location I-Location O"),
        tags("B-Device O B-Time I-Time B-Modifier O"),
    ];
    let gold = vec![
        tags("B-Action O B-Amount I-Amount O B-Reagent I-Reagent O"),
        tags("B-Action B-Modifier O B-Location I-Location O"),
        tags("B-Action O B-Time I-Time O B-Modifier"),
    ];
    let tokens: usize = gold.iter().map(Vec::len).sum();
    ensure(tokens == 20, || format!("{tokens} tokens"))?;
    let table = token_confusions(&pred, &gold).map_err(|e| e.to_string())?;
    let expected: BTreeMap<(&str, &str), usize> = [
        (("O", "B-Modifier"), 2),
        (("B-Device", "B-Action"), 1),
        (("B-Modifier", "O"), 1),
        (("B-Reagent", "I-Reagent"), 1),
        (("O", "I-Amount"), 1),
    ]
    .into_iter()
    .collect();
    for ((p, t), c) in &expected {
        ensure(table.get(p, t) == *c, || {
            format!("({p}, {t}) = {}, expected {c}", table.get(p, t))
        })?;
    }
    ensure(table.total() == expected.values().sum::<usize>(), || {
        format!("total {}", table.total())
    })?;

    let rows = table.rows();
    let order: Vec<(&str, &str, usize)> = rows
        .iter()
        .map(|r| (r.p_label.as_str(), r.t_label.as_str(), r.count))
        .collect();
    ensure(order[0] == ("O", "B-Modifier", 2), || {
        format!("first row {:?}", order[0])
    })?;
    let json = serde_json::to_value(&rows[0]).unwrap();
    let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
    ensure(keys == ["Count", "P_Label", "T_Label"], || {
        format!("keys {keys:?}")
    })?;
    let text = render_confusions(&rows);
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    ensure(header == ["P_Label", "T_Label", "Count"], || {
        format!("header {header:?}")
    })?;
    ensure(
        text.lines()
            .skip(1)
            .all(|l| l.split_whitespace().count() == 3),
        || "row shape".into(),
    )?;
    Ok(format!(
        "{} confusions over {tokens} tokens match the hand tally",
        table.total()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("sle oracle equivalence", sle_oracle),
        ("majority vote correctness", majority_vote_correctness),
        ("metric invariants", metric_invariants),
        ("format round-trips", format_round_trips),
        ("tagger sanity", tagger_sanity),
        ("pipeline shape", pipeline_shape),
        ("confusion table", confusion_table),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
