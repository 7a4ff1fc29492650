//! Build an embedding table, look up words, and compare the two distance
//! metrics. Run with `cargo run --example load_embeddings`.

#[path = "shared/mod.rs"]
mod shared;

use mtdetect::embeddings::DistanceMetric;

fn main() {
    let table = shared::demo_table(7);
    println!(
        "table: {} words, dimension {}, source id {}",
        table.vocab_size(),
        table.dimension(),
        table.source_id()
    );

    let query = "c0w0";
    let qvec = table.lookup(query).expect("query in vocabulary");
    for metric in [DistanceMetric::Euclidean, DistanceMetric::Cosine] {
        let mut nearest: Vec<(f64, &str)> = table
            .iter()
            .filter(|(w, _)| *w != query)
            .map(|(w, v)| (metric.distance(qvec, v).unwrap(), w))
            .collect();
        nearest.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!("\nnearest to {query} under {metric:?}:");
        for (d, w) in nearest.iter().take(5) {
            println!("  {w:8} {d:.4}");
        }
    }

    // Lookups fall back to lowercase before giving up.
    assert!(table.lookup("C0W0").is_some());
    assert!(table.lookup("not-a-word").is_none());
}
