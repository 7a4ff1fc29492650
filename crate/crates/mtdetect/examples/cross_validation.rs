//! Stratified 10-fold cross-validation with pooled accuracy and equal
//! error rate, plus the mean-only / variance-only ablations. Rows whose
//! ids share a prefix before the final '#' (aligned translation pairs)
//! always land in the same fold.
//! Run with `cargo run --example cross_validation`.

#[path = "shared/mod.rs"]
mod shared;

use std::collections::HashMap;

use mtdetect::classifier::{Hyperparams, Optimizer};
use mtdetect::corpus::Label;
use mtdetect::embeddings::DistanceMetric;
use mtdetect::evaluator::{self, Statistic};
use mtdetect::features::{FeatureLayout, FeatureSet};
use mtdetect::matcher;

fn main() {
    let corpus = shared::demo_corpus(21, 50);
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

    for statistic in [
        Statistic::MeanOnly,
        Statistic::VarianceOnly,
        Statistic::Combination,
    ] {
        let (report, _) =
            evaluator::ablate(&set, statistic, Optimizer::SmoSvm, &hp, &plan).unwrap();
        println!(
            "{:13} accuracy {:.3}  EER {:.3}",
            report.config.statistic, report.accuracy, report.eer
        );
    }

    let (report, _) = evaluator::cross_validate(&set, Optimizer::SmoSvm, &hp, &plan).unwrap();
    println!("\nper-fold accuracy (combination):");
    for (i, fold) in report.per_fold.iter().enumerate() {
        println!("  fold {i}: {:.3}", fold.accuracy);
    }
    let c = &report.confusion;
    println!(
        "confusion: true machine {}, true human {}, false machine {}, false human {}",
        c.true_machine, c.true_human, c.false_machine, c.false_human
    );
}
