//! Train a linear SVM on labeled coherence vectors, save the model,
//! reload it, and score new paragraphs.
//! Run with `cargo run --example train_and_predict`.

#[path = "shared/mod.rs"]
mod shared;

use std::collections::HashMap;

use mtdetect::classifier::{self, Hyperparams, Optimizer, SvmModel};
use mtdetect::corpus::Label;
use mtdetect::embeddings::DistanceMetric;
use mtdetect::features::{FeatureLayout, FeatureSet};
use mtdetect::matcher;

fn extract(seed: u64, pairs: usize) -> FeatureSet {
    let corpus = shared::demo_corpus(seed, pairs);
    let table = shared::demo_table(7);
    let layout = FeatureLayout::build(&corpus.tagset);
    let matches = matcher::match_corpus(&corpus, &table, DistanceMetric::Euclidean).unwrap();
    let labels: HashMap<String, Option<Label>> = corpus
        .paragraphs
        .iter()
        .map(|p| (p.id.clone(), p.label))
        .collect();
    FeatureSet::from_matches(&matches, &layout, &labels, "euclidean", table.source_id()).unwrap()
}

fn main() {
    let train_set = extract(7, 40);
    let test_set = extract(99, 10);

    let hp = Hyperparams::default();
    let model = classifier::train(&train_set, Optimizer::SmoSvm, &hp).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save(&path).unwrap();
    let model = SvmModel::load(&path).unwrap();
    println!("model round-tripped through {}", path.display());

    let predictions = model.predict(&test_set).unwrap();
    let mut correct = 0;
    for (p, row) in predictions.iter().zip(&test_set.rows) {
        if Some(p.label) == row.label {
            correct += 1;
        }
    }
    println!(
        "held-out accuracy: {}/{} ({:.1}%)",
        correct,
        predictions.len(),
        100.0 * correct as f64 / predictions.len() as f64
    );
    for p in predictions.iter().take(4) {
        println!("  {:16} score {:+.4} -> {:?}", p.id, p.score, p.label);
    }
}
