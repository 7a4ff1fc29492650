//! Match similar words inside one paragraph: for every word and every
//! other part-of-speech tag present, find the closest word carrying that
//! tag, then bucket the distances by unordered tag pair.
//! Run with `cargo run --example match_words`.

#[path = "shared/mod.rs"]
mod shared;

use mtdetect::embeddings::DistanceMetric;
use mtdetect::matcher;

fn main() {
    let corpus = shared::demo_corpus(7, 1);
    let table = shared::demo_table(7);
    let paragraph = &corpus.paragraphs[0];
    let tagset = &corpus.tagset;

    let (records, skipped, embedded) =
        matcher::match_records(paragraph, &table, DistanceMetric::Euclidean).unwrap();
    println!(
        "paragraph {}: {} tokens, {} embedded, {} skipped (out of vocabulary)",
        paragraph.id,
        paragraph.tokens.len(),
        embedded,
        skipped
    );
    println!("\nfirst matches (source -> closest word of each other tag):");
    for r in records.iter().take(8) {
        println!(
            "  {:10} [{}] -> {:10} [{}]  d = {:.4}",
            paragraph.tokens[r.source_index].surface,
            tagset.tag(r.source_tag),
            paragraph.tokens[r.target_index].surface,
            tagset.tag(r.target_tag),
            r.dist,
        );
    }

    let grouped = matcher::match_paragraph(paragraph, &table, DistanceMetric::Euclidean).unwrap();
    println!("\ndistances grouped by tag pair:");
    for (pair, dists) in grouped.groups.iter().take(8) {
        println!(
            "  {}-{}: {} distances, min {:.4}",
            tagset.tag(pair.a),
            tagset.tag(pair.b),
            dists.len(),
            dists.iter().cloned().fold(f64::INFINITY, f64::min),
        );
    }
}
