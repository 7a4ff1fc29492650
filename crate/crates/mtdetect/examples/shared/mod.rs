//! Small synthetic dataset shared by the examples: a clustered embedding
//! vocabulary plus a paired human/machine corpus where the "machine" side
//! swaps some content words into a different cluster, weakening within-
//! paragraph coherence.

// Each example pulls in only part of this helper.
#![allow(dead_code)]

use mtdetect::corpus::{Corpus, Label, TaggedParagraph, Tagset, Token};
use mtdetect::embeddings::EmbeddingTable;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const DIM: usize = 16;
const CLUSTERS: usize = 6;
const WORDS_PER_CLUSTER: usize = 20;
const CONTENT_TAGS: [&str; 4] = ["NN", "NNS", "VB", "JJ"];
const FUNCTION_TAGS: [&str; 3] = ["DT", "IN", "PRP"];

pub fn demo_table(seed: u64) -> EmbeddingTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for c in 0..CLUSTERS {
        let center: Vec<f32> = (0..DIM).map(|_| rng.gen_range(-6.0f32..6.0)).collect();
        for w in 0..WORDS_PER_CLUSTER {
            let v: Vec<f32> = center
                .iter()
                .map(|&x| x + rng.gen_range(-0.4f32..0.4))
                .collect();
            entries.push((format!("c{c}w{w}"), v));
        }
    }
    for f in 0..30 {
        let v: Vec<f32> = (0..DIM).map(|_| rng.gen_range(-0.5f32..0.5)).collect();
        entries.push((format!("f{f}"), v));
    }
    EmbeddingTable::from_vectors(entries, "examples-demo").unwrap()
}

pub fn demo_corpus(seed: u64, pairs: usize) -> Corpus {
    let tagset = Tagset::penn_treebank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut paragraphs = Vec::new();
    for p in 0..pairs {
        let human = sample_paragraph(
            &mut rng,
            &tagset,
            format!("pair{p}#human"),
            Label::Human,
            0.0,
        );
        let machine = sample_paragraph(
            &mut rng,
            &tagset,
            format!("pair{p}#machine"),
            Label::Machine,
            0.3,
        );
        paragraphs.push(human);
        paragraphs.push(machine);
    }
    Corpus { paragraphs, tagset }
}

fn sample_paragraph(
    rng: &mut ChaCha8Rng,
    tagset: &Tagset,
    id: String,
    label: Label,
    swap_rate: f64,
) -> TaggedParagraph {
    let len = rng.gen_range(50..80);
    let home_cluster = rng.gen_range(0..CLUSTERS);
    let tokens = (0..len)
        .map(|i| {
            if i % 8 == 7 {
                return Token {
                    surface: ".".into(),
                    tag: tagset.index_of(".").unwrap(),
                };
            }
            if rng.gen_bool(0.3) {
                let tag = FUNCTION_TAGS.choose(rng).unwrap();
                return Token {
                    surface: format!("f{}", rng.gen_range(0..30)),
                    tag: tagset.index_of(tag).unwrap(),
                };
            }
            let cluster = if rng.gen_bool(swap_rate) {
                (home_cluster + rng.gen_range(1..CLUSTERS)) % CLUSTERS
            } else {
                home_cluster
            };
            let tag = CONTENT_TAGS.choose(rng).unwrap();
            Token {
                surface: format!("c{cluster}w{}", rng.gen_range(0..WORDS_PER_CLUSTER)),
                tag: tagset.index_of(tag).unwrap(),
            }
        })
        .collect();
    TaggedParagraph {
        id,
        label: Some(label),
        tokens,
        sentence_count: None,
    }
}
