//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured value on success.

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use mtdetect::classifier::{self, smo, Dataset, Hyperparams, Optimizer};
use mtdetect::corpus::{Label, TaggedParagraph, Tagset, Token};
use mtdetect::embeddings::{DistanceMetric, EmbeddingTable};
use mtdetect::evaluator::{self, Statistic};
use mtdetect::features::{
    CoherenceVector, FeatureLayout, FeatureSet, FeatureSetHeader, FEATURE_SCHEMA_VERSION,
};
use mtdetect::matcher::{self, TagPair};

#[test]
fn c01_layout_exactness() {
    let tagset = Tagset::penn_treebank();
    assert_eq!(tagset.len(), 45);
    let layout = FeatureLayout::build(&tagset);
    assert_eq!(layout.group_count(), 1035);
    assert_eq!(layout.total_len(), 2070);
    for i in 0..layout.group_count() {
        assert_eq!(layout.group_index(layout.pair_at(i)), Some(i));
    }
    println!("PASS criterion 1: 45-tag tagset yields 1035 groups, 2070-length vectors");
}

/// Transparent brute force: for every ordered (source index, target tag),
/// scan all other tokens of that tag and keep the minimum distance with the
/// smallest target index. Distances use an inline formula, not the library
/// metric.
fn oracle_match(
    tokens: &[(usize, u16, Vec<f32>)],
    metric: DistanceMetric,
) -> (
    Vec<(usize, u16, usize, f64)>,
    BTreeMap<(u16, u16), Vec<f64>>,
) {
    let oracle_dist = |u: &[f32], v: &[f32]| -> f64 {
        match metric {
            DistanceMetric::Euclidean => {
                let mut acc = 0.0f64;
                for k in 0..u.len() {
                    let d = u[k] as f64 - v[k] as f64;
                    acc += d * d;
                }
                acc.sqrt()
            }
            DistanceMetric::Cosine => {
                let (mut dot, mut nu, mut nv) = (0.0f64, 0.0f64, 0.0f64);
                for k in 0..u.len() {
                    let (a, b) = (u[k] as f64, v[k] as f64);
                    dot += a * b;
                    nu += a * a;
                    nv += b * b;
                }
                1.0 - dot / (nu.sqrt() * nv.sqrt())
            }
        }
    };
    let mut records = Vec::new();
    let mut groups: BTreeMap<(u16, u16), Vec<f64>> = BTreeMap::new();
    for &(i, tag_i, ref vec_i) in tokens {
        let target_tags: std::collections::BTreeSet<u16> = tokens
            .iter()
            .filter(|&&(j, _, _)| j != i)
            .map(|&(_, t, _)| t)
            .collect();
        for t in target_tags {
            let mut best: Option<(f64, usize)> = None;
            for &(j, tag_j, ref vec_j) in tokens {
                if j == i || tag_j != t {
                    continue;
                }
                let d = oracle_dist(vec_i, vec_j);
                let better = match best {
                    None => true,
                    Some((bd, bj)) => d < bd || (d == bd && j < bj),
                };
                if better {
                    best = Some((d, j));
                }
            }
            let (d, j) = best.expect("tag drawn from other tokens");
            records.push((i, t, j, d));
            let key = if tag_i <= t { (tag_i, t) } else { (t, tag_i) };
            groups.entry(key).or_default().push(d);
        }
    }
    (records, groups)
}

#[test]
fn c02_matching_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let tagset = Tagset::penn_treebank();
    // 60-word toy vocabulary in 5 dimensions, plus OOV surfaces.
    let vocab: Vec<(String, Vec<f32>)> = (0..60)
        .map(|i| {
            let v: Vec<f32> = (0..5).map(|_| rng.gen_range(-3.0f32..3.0)).collect();
            (format!("w{i}"), v)
        })
        .collect();
    let table = EmbeddingTable::from_vectors(
        vocab.iter().map(|(w, v)| (w.clone(), v.clone())),
        "oracle-toy",
    )
    .unwrap();

    for case in 0..200 {
        let metric = if case % 2 == 0 {
            DistanceMetric::Euclidean
        } else {
            DistanceMetric::Cosine
        };
        let tag_count = rng.gen_range(3..=10usize);
        let tag_indices: Vec<u16> = (0..tagset.len() as u16)
            .collect::<Vec<_>>()
            .choose_multiple(&mut rng, tag_count)
            .copied()
            .collect();
        let len = rng.gen_range(5..=50usize);
        let tokens: Vec<Token> = (0..len)
            .map(|_| {
                let surface = if rng.gen_bool(0.1) {
                    format!("oov{}", rng.gen_range(0..10u32))
                } else {
                    vocab[rng.gen_range(0..vocab.len())].0.clone()
                };
                Token {
                    surface,
                    tag: *tag_indices.choose(&mut rng).unwrap(),
                }
            })
            .collect();
        let paragraph = TaggedParagraph {
            id: format!("case{case}"),
            label: None,
            tokens: tokens.clone(),
            sentence_count: None,
        };

        let (records, skipped, _) = matcher::match_records(&paragraph, &table, metric).unwrap();
        let grouped = matcher::match_paragraph(&paragraph, &table, metric).unwrap();

        let embedded: Vec<(usize, u16, Vec<f32>)> = tokens
            .iter()
            .enumerate()
            .filter_map(|(i, t)| table.lookup(&t.surface).map(|v| (i, t.tag, v.to_vec())))
            .collect();
        assert_eq!(skipped, tokens.len() - embedded.len());
        let (oracle_records, oracle_groups) = oracle_match(&embedded, metric);

        // Records must agree exactly, tie-breaks included.
        let mut got: Vec<(usize, u16, usize, f64)> = records
            .iter()
            .map(|r| (r.source_index, r.target_tag, r.target_index, r.dist))
            .collect();
        let mut want = oracle_records;
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want, "case {case} records diverge from oracle");

        // Group multisets must be identical bit for bit.
        let mut got_groups: BTreeMap<(u16, u16), Vec<f64>> = BTreeMap::new();
        for (pair, dists) in &grouped.groups {
            let mut sorted = dists.clone();
            sorted.sort_by(f64::total_cmp);
            got_groups.insert((pair.a, pair.b), sorted);
        }
        let mut want_groups = oracle_groups;
        for dists in want_groups.values_mut() {
            dists.sort_by(f64::total_cmp);
        }
        assert_eq!(
            got_groups, want_groups,
            "case {case} group multisets diverge"
        );
    }
    println!(
        "PASS criterion 2: 200 random paragraphs match the brute-force oracle exactly ({:?})",
        start.elapsed()
    );
}

#[test]
fn c03_statistics_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let tagset = Tagset::new(["A", "B"].map(String::from)).unwrap();
    let layout = FeatureLayout::build(&tagset);

    for case in 0..1000 {
        let len = if case % 50 == 0 {
            rng.gen_range(1000..=10_000)
        } else {
            rng.gen_range(1..=200)
        };
        let values: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..30.0)).collect();

        // Welford's online algorithm as the independent route.
        let mut mean = 0.0f64;
        let mut m2 = 0.0f64;
        for (i, &x) in values.iter().enumerate() {
            let delta = x - mean;
            mean += delta / (i + 1) as f64;
            m2 += delta * (x - mean);
        }
        let variance = m2 / len as f64;

        let mut grouped = mtdetect::matcher::GroupedSimilarities::default();
        grouped.groups.insert(TagPair::new(0, 0), values);
        let v = mtdetect::features::featurize(&grouped, &layout, "p", None).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        assert!(
            rel(v.values[0], mean) < 1e-9,
            "mean diverges on case {case}"
        );
        assert!(
            rel(v.values[layout.group_count()], variance) < 1e-9,
            "variance diverges on case {case}: {} vs {variance}",
            v.values[layout.group_count()]
        );
    }

    // Singleton and empty groups.
    let mut grouped = mtdetect::matcher::GroupedSimilarities::default();
    grouped.groups.insert(TagPair::new(0, 1), vec![7.25]);
    let v = mtdetect::features::featurize(&grouped, &layout, "p", None).unwrap();
    assert_eq!(v.values[1], 7.25);
    assert_eq!(v.values[layout.group_count() + 1], 0.0);
    assert_eq!(v.present, vec![false, true, false]);
    let empty = mtdetect::features::featurize(&Default::default(), &layout, "p", None).unwrap();
    assert!(empty.values.iter().all(|&x| x == 0.0));
    assert_eq!(empty.present_count(), 0);
    println!(
        "PASS criterion 3: featurize matches the Welford oracle on 1000 groups ({:?})",
        start.elapsed()
    );
}

fn margin_separated_features(per_class: usize, dim_groups: usize, seed: u64) -> FeatureSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total_len = 2 * dim_groups;
    let mut rows = Vec::new();
    for i in 0..per_class {
        for (label, offset, side) in [(Label::Human, 0.0, "h"), (Label::Machine, 2.0, "m")] {
            let mut values: Vec<f64> = (0..total_len).map(|_| rng.gen_range(-0.1..0.1)).collect();
            for slot in values.iter_mut().take(20) {
                *slot += offset;
            }
            rows.push(CoherenceVector {
                paragraph_id: format!("{side}{i}"),
                label: Some(label),
                values,
                present: vec![true; dim_groups],
            });
        }
    }
    FeatureSet {
        header: FeatureSetHeader {
            schema_version: FEATURE_SCHEMA_VERSION,
            tagset_hash: "synthetic".into(),
            metric: "euclidean".into(),
            embedding_id: "synthetic".into(),
            group_count: dim_groups,
        },
        rows,
    }
}

#[test]
fn c04_classifier_sanity() {
    let start = Instant::now();
    let features = margin_separated_features(500, 1035, 1004);
    let hp = Hyperparams::default();

    for optimizer in [Optimizer::Linear, Optimizer::SgdSvm, Optimizer::SmoSvm] {
        let model = classifier::train(&features, optimizer, &hp).unwrap();
        let predictions = model.predict(&features).unwrap();
        let correct = predictions
            .iter()
            .zip(&features.rows)
            .filter(|(p, r)| Some(p.label) == r.label)
            .count();
        assert_eq!(
            correct,
            features.rows.len(),
            "{optimizer:?} below 100% training accuracy"
        );

        let plan = evaluator::plan_folds(&features, 10, 42, false).unwrap();
        let (report, _) = evaluator::cross_validate(&features, optimizer, &hp, &plan).unwrap();
        assert!(
            report.accuracy >= 0.99,
            "{optimizer:?} CV accuracy {}",
            report.accuracy
        );
    }

    // SMO dual objective must never decrease.
    let rows: Vec<&CoherenceVector> = features.rows.iter().collect();
    let data = Dataset::from_rows(&rows, None).unwrap();
    let (_, _fit) = classifier::train_dataset(&data, Optimizer::SmoSvm, &hp).unwrap();
    let standardized = {
        let raw: Vec<&[f64]> = (0..data.len()).map(|i| data.row(i)).collect();
        let s = classifier::Standardization::fit(&raw).unwrap();
        let mut x = vec![0.0; data.x.len()];
        for i in 0..data.len() {
            let mut out = vec![0.0; data.dim];
            s.transform(data.row(i), &mut out);
            x[i * data.dim..(i + 1) * data.dim].copy_from_slice(&out);
        }
        Dataset {
            ids: data.ids.clone(),
            x,
            dim: data.dim,
            y: data.y.clone(),
        }
    };
    let outcome = smo::optimize(&standardized, &hp).unwrap();
    assert!(!outcome.objective_trace.is_empty());
    for pair in outcome.objective_trace.windows(2) {
        assert!(
            pair[1] >= pair[0] - 1e-9,
            "dual objective decreased {} -> {}",
            pair[0],
            pair[1]
        );
    }
    println!(
        "PASS criterion 4: all optimizers at 100% train / >=99% CV accuracy, SMO dual monotone ({:?})",
        start.elapsed()
    );
}

/// Exhaustive threshold oracle: every unique score is a candidate; the
/// crossing of the interpolated FPR and FNR polylines is solved directly.
fn oracle_eer(scores: &[(f64, Label)]) -> f64 {
    let humans: Vec<f64> = scores
        .iter()
        .filter(|(_, l)| *l == Label::Human)
        .map(|(s, _)| *s)
        .collect();
    let machines: Vec<f64> = scores
        .iter()
        .filter(|(_, l)| *l == Label::Machine)
        .map(|(s, _)| *s)
        .collect();
    let mut thresholds: Vec<f64> = scores.iter().map(|(s, _)| *s).collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let fpr = |t: f64| humans.iter().filter(|&&s| s >= t).count() as f64 / humans.len() as f64;
    let fnr = |t: f64| machines.iter().filter(|&&s| s < t).count() as f64 / machines.len() as f64;
    let mut prev: Option<f64> = None;
    for &t in &thresholds {
        let diff = fpr(t) - fnr(t);
        if diff == 0.0 {
            return fpr(t);
        }
        if diff < 0.0 {
            let p = prev.expect("first threshold always has FPR 1, FNR 0");
            let (f1, n1) = (fpr(p), fnr(p));
            let (f2, n2) = (fpr(t), fnr(t));
            let alpha = (f1 - n1) / ((f1 - n1) - (f2 - n2));
            return f1 + alpha * (f2 - f1);
        }
        prev = Some(t);
    }
    let t = *thresholds.last().unwrap();
    let (f1, n1) = (fpr(t), fnr(t));
    let alpha = (f1 - n1) / ((f1 - n1) + 1.0);
    f1 + alpha * (0.0 - f1)
}

#[test]
fn c05_eer_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);

    for case in 0..100 {
        let n = rng.gen_range(4..=200usize);
        let scores: Vec<(f64, Label)> = (0..n)
            .map(|i| {
                // Coarse grid scores force plenty of exact ties.
                let s = (rng.gen_range(-8i32..=8) as f64) / 2.0;
                let label = if i < 2 {
                    [Label::Human, Label::Machine][i]
                } else if rng.gen_bool(0.5) {
                    Label::Machine
                } else {
                    Label::Human
                };
                (s, label)
            })
            .collect();
        let got = evaluator::compute_eer(&scores).unwrap();
        let want = oracle_eer(&scores);
        assert!(
            (got - want).abs() < 1e-12,
            "case {case}: eer {got} vs oracle {want}"
        );
    }

    // Perfect separation.
    let separated: Vec<(f64, Label)> = (0..50)
        .map(|i| (i as f64 - 100.0, Label::Human))
        .chain((0..50).map(|i| (i as f64 + 100.0, Label::Machine)))
        .collect();
    assert_eq!(evaluator::compute_eer(&separated).unwrap(), 0.0);

    // Label-permuted scores hover at 0.5.
    let permuted: Vec<(f64, Label)> = (0..2000)
        .map(|i| {
            let s: f64 = rng.gen_range(-1.0..1.0);
            let label = if i % 2 == 0 {
                Label::Human
            } else {
                Label::Machine
            };
            (s, label)
        })
        .collect();
    let eer = evaluator::compute_eer(&permuted).unwrap();
    assert!((eer - 0.5).abs() <= 0.05, "permuted EER {eer}");
    println!(
        "PASS criterion 5: compute_eer matches the exhaustive oracle within 1e-12 ({:?})",
        start.elapsed()
    );
}

#[test]
fn c06_end_to_end_signal() {
    let start = Instant::now();
    let fixture = common::coherence_fixture(1006, 200, 0.2);
    let features_path = fixture.dir.path().join("features.jsonl");
    let report_path = fixture.dir.path().join("report.json");

    let status = Command::new(common::bin())
        .args(["extract", "--corpus"])
        .arg(&fixture.corpus)
        .arg("--embeddings")
        .arg(&fixture.embeddings)
        .args(["--metric", "euclidean", "--out"])
        .arg(&features_path)
        .status()
        .unwrap();
    assert!(status.success(), "extract failed");

    let status = Command::new(common::bin())
        .args(["crossval", "--features"])
        .arg(&features_path)
        .args(["--optimizer", "smo", "--statistic", "combination", "--out"])
        .arg(&report_path)
        .status()
        .unwrap();
    assert!(status.success(), "crossval failed");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let accuracy = report["accuracy"].as_f64().unwrap();
    let eer = report["eer"].as_f64().unwrap();
    assert!(accuracy >= 0.80, "end-to-end accuracy {accuracy}");
    assert!(eer <= 0.20, "end-to-end EER {eer}");
    println!(
        "PASS criterion 6: fixture pipeline accuracy {accuracy:.3}, EER {eer:.3} ({:?})",
        start.elapsed()
    );
}

#[test]
fn c07_determinism() {
    let start = Instant::now();
    let fixture = common::coherence_fixture(1007, 40, 0.2);
    let f1 = fixture.dir.path().join("f1.jsonl");
    let f8 = fixture.dir.path().join("f8.jsonl");
    for (path, jobs) in [(&f1, "1"), (&f8, "8")] {
        let status = Command::new(common::bin())
            .args(["extract", "--corpus"])
            .arg(&fixture.corpus)
            .arg("--embeddings")
            .arg(&fixture.embeddings)
            .args(["--jobs", jobs, "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let b1 = std::fs::read(&f1).unwrap();
    let b8 = std::fs::read(&f8).unwrap();
    assert_eq!(b1, b8, "extract output depends on --jobs");

    let r1 = fixture.dir.path().join("r1.json");
    let r2 = fixture.dir.path().join("r2.json");
    for path in [&r1, &r2] {
        let status = Command::new(common::bin())
            .args(["crossval", "--features"])
            .arg(&f1)
            .args(["--seed", "42", "--folds", "10", "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(
        std::fs::read(&r1).unwrap(),
        std::fs::read(&r2).unwrap(),
        "crossval report not reproducible"
    );
    println!(
        "PASS criterion 7: extract byte-identical across --jobs, crossval reproducible ({:?})",
        start.elapsed()
    );
}

#[test]
fn c08_conditional_real_corpus_path() {
    // Table 1's 87.0% / 13.0% needs the TED corpus, Google translations, and
    // GloVe 6B, none bundled. The conditional contract: given equivalent
    // user-supplied features (MTDETECT_REAL_FEATURES), crossval completes and
    // emits a full report, with the ablation ordering as a soft warning only.
    let start = Instant::now();
    let (features_path, _fixture);
    match std::env::var("MTDETECT_REAL_FEATURES") {
        Ok(path) => {
            features_path = std::path::PathBuf::from(path);
            _fixture = None;
        }
        Err(_) => {
            let fixture = common::coherence_fixture(1008, 60, 0.2);
            let path = fixture.dir.path().join("features.jsonl");
            let status = Command::new(common::bin())
                .args(["extract", "--corpus"])
                .arg(&fixture.corpus)
                .arg("--embeddings")
                .arg(&fixture.embeddings)
                .args(["--metric", "euclidean", "--out"])
                .arg(&path)
                .status()
                .unwrap();
            assert!(status.success());
            features_path = path;
            _fixture = Some(fixture);
        }
    }

    let report_path = features_path.with_extension("report.json");
    let output = Command::new(common::bin())
        .args(["crossval", "--features"])
        .arg(&features_path)
        .args([
            "--optimizer",
            "smo",
            "--statistic",
            "combination",
            "--ablation-check",
            "--out",
        ])
        .arg(&report_path)
        .output()
        .unwrap();
    assert!(output.status.success(), "crossval did not complete");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    for field in ["accuracy", "eer", "per_fold", "confusion", "config"] {
        assert!(!report[field].is_null(), "report missing {field}");
    }
    // Ordering violations surface as a warning, never a failure.
    let stderr = String::from_utf8_lossy(&output.stderr);
    let note = if stderr.contains("ablation ordering violated") {
        "ablation ordering warning emitted"
    } else {
        "ablation ordering held"
    };
    println!(
        "PASS criterion 8: conditional crossval emits a full report; {note} ({:?})",
        start.elapsed()
    );
}

#[test]
fn c09_ablation_and_ranking_plumbing() {
    let start = Instant::now();
    let tagset = Tagset::penn_treebank();
    let layout = FeatureLayout::build(&tagset);
    let g = layout.group_count();

    // Masks reduce the effective dimension to exactly G.
    assert_eq!(Statistic::MeanOnly.columns(g).unwrap().len(), g);
    assert_eq!(Statistic::VarianceOnly.columns(g).unwrap().len(), g);
    assert!(Statistic::Combination.columns(g).is_none());

    // Fixture with class signal in exactly one group: TO-:.
    let to = tagset.index_of("TO").unwrap();
    let colon = tagset.index_of(":").unwrap();
    let signal = layout.group_index(TagPair::new(to, colon)).unwrap();
    assert_eq!(layout.group_name(signal), "TO-:");

    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut rows = Vec::new();
    for i in 0..60 {
        for (label, offset, side) in [
            (Label::Human, 1.0, "human"),
            (Label::Machine, 4.0, "machine"),
        ] {
            let mut values = vec![0.0f64; 2 * g];
            values[signal] = offset + rng.gen_range(-0.2..0.2);
            values[g + signal] = offset / 2.0 + rng.gen_range(-0.1..0.1);
            rows.push(CoherenceVector {
                paragraph_id: format!("pair{i}#{side}"),
                label: Some(label),
                values,
                present: vec![true; g],
            });
        }
    }
    let set = FeatureSet {
        header: FeatureSetHeader {
            schema_version: FEATURE_SCHEMA_VERSION,
            tagset_hash: tagset.hash(),
            metric: "euclidean".into(),
            embedding_id: "synthetic".into(),
            group_count: g,
        },
        rows,
    };
    let dir = tempfile::tempdir().unwrap();
    let features_path = dir.path().join("rank_features.jsonl");
    set.write_to_path(&features_path).unwrap();

    let ranking_path = dir.path().join("ranking.json");
    let status = Command::new(common::bin())
        .args(["rank", "--features"])
        .arg(&features_path)
        .args(["--top", "5", "--out"])
        .arg(&ranking_path)
        .status()
        .unwrap();
    assert!(status.success(), "rank failed");

    let ranking: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ranking_path).unwrap()).unwrap();
    let top = ranking["ranking"].as_array().unwrap();
    assert_eq!(top.len(), 5);
    assert_eq!(top[0]["group"], "TO-:");
    let combo = top[0]["combination_accuracy"].as_f64().unwrap();
    assert!(combo >= 0.95, "signal group combination accuracy {combo}");
    println!(
        "PASS criterion 9: TO-: ranks first at {combo:.3}; masks give dimension G exactly ({:?})",
        start.elapsed()
    );
}

#[test]
fn c10_desk_scale_performance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let vocab_size = 400_000usize;
    let dim = 300usize;

    // 400k x 300 synthetic table, built in memory (a GloVe 6B stand-in).
    let table = EmbeddingTable::from_vectors(
        (0..vocab_size).map(|i| {
            let v: Vec<f32> = (0..dim).map(|_| rng.gen_range(-1.0f32..1.0)).collect();
            (format!("w{i}"), v)
        }),
        "desk-scale-synthetic",
    )
    .unwrap();

    let tagset = Tagset::penn_treebank();
    let paragraphs: Vec<TaggedParagraph> = (0..4000)
        .map(|p| TaggedParagraph {
            id: format!("p{p}"),
            label: Some(if p % 2 == 0 {
                Label::Human
            } else {
                Label::Machine
            }),
            tokens: (0..350)
                .map(|_| Token {
                    surface: format!("w{}", rng.gen_range(0..vocab_size)),
                    tag: rng.gen_range(0..tagset.len() as u16),
                })
                .collect(),
            sentence_count: None,
        })
        .collect();
    let corpus = mtdetect::corpus::Corpus {
        paragraphs,
        tagset: tagset.clone(),
    };
    let setup = start.elapsed();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap();
    let extract_start = Instant::now();
    let set = pool
        .install(|| {
            let matches = matcher::match_corpus(&corpus, &table, DistanceMetric::Euclidean)?;
            let layout = FeatureLayout::build(&tagset);
            let labels = corpus
                .paragraphs
                .iter()
                .map(|p| (p.id.clone(), p.label))
                .collect();
            FeatureSet::from_matches(&matches, &layout, &labels, "euclidean", table.source_id())
        })
        .unwrap();
    let elapsed = extract_start.elapsed();

    assert_eq!(set.rows.len(), 4000);
    assert_eq!(set.rows[0].values.len(), 2070);
    assert!(
        elapsed.as_secs_f64() <= 600.0,
        "extraction took {elapsed:?}, budget 600s"
    );
    println!(
        "PASS criterion 10: 4000x350-token extraction in {elapsed:?} (setup {setup:?}, 8 workers)"
    );
}
