//! Tag raw text by piping each paragraph through an external command that
//! reads text on stdin and writes one `surface<TAB>tag` line per token.
//! Any part-of-speech tagger that speaks this protocol plugs in; here a
//! tiny awk script tags capitalized words NNP and everything else NN.
//! Run with `cargo run --example external_tagger`.

use mtdetect::corpus::{self, Tagset};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.jsonl");
    std::fs::write(
        &raw,
        concat!(
            r#"{"id":"doc1","label":"human","text":"Maria fed the cat"}"#,
            "\n",
            r#"{"id":"doc2","label":"machine","text":"the dog chased Felix"}"#,
            "\n",
        ),
    )
    .unwrap();

    let tagger =
        r#"awk '{for (i = 1; i <= NF; i++) print $i "\t" ($i ~ /^[A-Z]/ ? "NNP" : "NN")}'"#;
    let tagset = Tagset::penn_treebank();
    let outcome = corpus::tag_with_external(&raw, tagger, &tagset).unwrap();

    for p in &outcome.corpus.paragraphs {
        println!("{} ({:?}):", p.id, p.label);
        for t in &p.tokens {
            println!("  {:8} {}", t.surface, tagset.tag(t.tag));
        }
    }
    println!("rejections: {}", outcome.rejections.len());
}
