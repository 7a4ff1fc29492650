//! Turn grouped word distances into fixed-length coherence vectors:
//! a mean and a variance per tag pair, 2070 values for the 45-tag set.
//! Run with `cargo run --example coherence_features`.

#[path = "shared/mod.rs"]
mod shared;

use std::collections::HashMap;

use mtdetect::corpus::Label;
use mtdetect::embeddings::DistanceMetric;
use mtdetect::features::{FeatureLayout, FeatureSet};
use mtdetect::matcher;

fn main() {
    let corpus = shared::demo_corpus(11, 3);
    let table = shared::demo_table(11);
    let layout = FeatureLayout::build(&corpus.tagset);
    println!(
        "{} tags -> {} tag-pair groups -> {} features per paragraph",
        corpus.tagset.len(),
        layout.group_count(),
        layout.total_len()
    );

    let matches = matcher::match_corpus(&corpus, &table, DistanceMetric::Euclidean).unwrap();
    let labels: HashMap<String, Option<Label>> = corpus
        .paragraphs
        .iter()
        .map(|p| (p.id.clone(), p.label))
        .collect();
    let set = FeatureSet::from_matches(&matches, &layout, &labels, "euclidean", table.source_id())
        .unwrap();

    for row in set.rows.iter().take(2) {
        println!(
            "\n{} ({:?}): {} of {} groups present",
            row.paragraph_id,
            row.label,
            row.present_count(),
            layout.group_count()
        );
        let mut shown = 0;
        for g in 0..layout.group_count() {
            if row.present[g] && shown < 5 {
                println!(
                    "  {:8} mean {:8.4}  variance {:8.4}",
                    layout.group_name(g),
                    row.values[g],
                    row.values[layout.group_count() + g],
                );
                shown += 1;
            }
        }
    }
}
