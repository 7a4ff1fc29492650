//! Rank tag-pair groups by how well each one alone separates human from
//! machine text: cross-validate on the group's mean, variance, and both.
//! Run with `cargo run --example rank_pos_pairs`.

#[path = "shared/mod.rs"]
mod shared;

use std::collections::HashMap;

use mtdetect::classifier::{Hyperparams, Optimizer};
use mtdetect::corpus::Label;
use mtdetect::embeddings::DistanceMetric;
use mtdetect::evaluator;
use mtdetect::features::{FeatureLayout, FeatureSet};
use mtdetect::matcher;

fn main() {
    let corpus = shared::demo_corpus(33, 40);
    let table = shared::demo_table(7);
    let layout = FeatureLayout::build(&corpus.tagset);
    let matches = matcher::match_corpus(&corpus, &table, DistanceMetric::Euclidean).unwrap();
    let labels: HashMap<String, Option<Label>> = corpus
        .paragraphs
        .iter()
        .map(|p| (p.id.clone(), p.label))
        .collect();
    let set = FeatureSet::from_matches(&matches, &layout, &labels, "euclidean", table.source_id())
        .unwrap();

    let hp = Hyperparams::default();
    let plan = evaluator::plan_folds(&set, 10, hp.seed, true).unwrap();
    let names: Vec<String> = (0..layout.group_count())
        .map(|g| layout.group_name(g))
        .collect();
    let ranking =
        evaluator::rank_single_features(&set, &names, Optimizer::Linear, &hp, &plan).unwrap();

    println!("group      mean    variance  combination");
    for r in ranking.iter().take(10) {
        println!(
            "{:10} {:.3}   {:.3}     {:.3}",
            r.group, r.mean_accuracy, r.variance_accuracy, r.combination_accuracy
        );
    }
}
