//! Shared synthetic fixtures for integration tests: a clustered toy
//! embedding plus aligned human/machine paragraph pairs where the machine
//! side swaps a fraction of content words for far same-POS vocabulary.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const DIM: usize = 50;
pub const CONTENT_TAGS: [&str; 5] = ["NN", "NNS", "VB", "JJ", "RB"];
pub const FUNCTION_TAGS: [&str; 4] = ["DT", "IN", "PRP", "."];
pub const CLUSTERS: usize = 8;
pub const WORDS_PER_CLUSTER: usize = 24;

pub struct ToyVocab {
    /// word -> vector
    pub vectors: Vec<(String, Vec<f32>)>,
    /// content tag -> cluster -> words
    pub content: HashMap<String, Vec<Vec<String>>>,
    /// function tag -> words
    pub function: HashMap<String, Vec<String>>,
}

/// ~1k-word vocabulary in DIM dimensions. Each content tag gets well
/// separated clusters (inter-center distance dwarfs intra-cluster noise);
/// function words sit in one tight cluster of their own.
pub fn toy_vocab(seed: u64) -> ToyVocab {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::new();
    let mut content: HashMap<String, Vec<Vec<String>>> = HashMap::new();
    let mut function: HashMap<String, Vec<String>> = HashMap::new();

    for tag in CONTENT_TAGS {
        let mut clusters = Vec::new();
        for c in 0..CLUSTERS {
            let center: Vec<f32> = (0..DIM).map(|_| rng.gen_range(-8.0f32..8.0)).collect();
            let mut words = Vec::new();
            for w in 0..WORDS_PER_CLUSTER {
                let word = format!("{}_c{}_w{}", tag.to_lowercase(), c, w);
                let vector: Vec<f32> = center
                    .iter()
                    .map(|&x| x + rng.gen_range(-0.5f32..0.5))
                    .collect();
                vectors.push((word.clone(), vector));
                words.push(word);
            }
            clusters.push(words);
        }
        content.insert(tag.to_string(), clusters);
    }
    for tag in FUNCTION_TAGS {
        let center: Vec<f32> = (0..DIM).map(|_| rng.gen_range(-1.0f32..1.0)).collect();
        let mut words = Vec::new();
        for w in 0..10 {
            let word = if tag == "." {
                if w == 0 {
                    ".".to_string()
                } else {
                    continue;
                }
            } else {
                format!("{}_{}", tag.to_lowercase(), w)
            };
            let vector: Vec<f32> = center
                .iter()
                .map(|&x| x + rng.gen_range(-0.3f32..0.3))
                .collect();
            vectors.push((word.clone(), vector));
            words.push(word);
        }
        function.insert(tag.to_string(), words);
    }
    ToyVocab {
        vectors,
        content,
        function,
    }
}

pub struct Fixture {
    pub dir: tempfile::TempDir,
    pub embeddings: PathBuf,
    pub corpus: PathBuf,
}

/// Write the toy embedding and `pairs` aligned human/machine paragraph pairs
/// to disk. The machine side of each pair swaps `swap_rate` of its content
/// words for same-tag words from a different cluster.
pub fn coherence_fixture(seed: u64, pairs: usize, swap_rate: f64) -> Fixture {
    let vocab = toy_vocab(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let dir = tempfile::tempdir().expect("tempdir");

    let embeddings = dir.path().join("toy_glove.txt");
    let mut glove = String::new();
    for (word, vector) in &vocab.vectors {
        glove.push_str(word);
        for v in vector {
            glove.push(' ');
            glove.push_str(&format!("{v}"));
        }
        glove.push('\n');
    }
    std::fs::write(&embeddings, glove).expect("write embeddings");

    let corpus = dir.path().join("corpus.jsonl");
    let mut jsonl = String::new();
    for pair in 0..pairs {
        let cluster = rng.gen_range(0..CLUSTERS);
        let human = sample_paragraph(&vocab, cluster, &mut rng);
        let machine = swap_content_words(&vocab, &human, cluster, swap_rate, &mut rng);
        jsonl.push_str(&record_json(&format!("pair{pair}#human"), "human", &human));
        jsonl.push_str(&record_json(
            &format!("pair{pair}#machine"),
            "machine",
            &machine,
        ));
    }
    std::fs::write(&corpus, jsonl).expect("write corpus");
    Fixture {
        dir,
        embeddings,
        corpus,
    }
}

fn sample_paragraph(
    vocab: &ToyVocab,
    cluster: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(String, String)> {
    let len = rng.gen_range(60..100);
    let mut tokens = Vec::with_capacity(len);
    for i in 0..len {
        if i % 9 == 8 {
            tokens.push((".".to_string(), ".".to_string()));
        } else if rng.gen_bool(0.3) {
            let tag = FUNCTION_TAGS[rng.gen_range(0..3)];
            let words = &vocab.function[tag];
            tokens.push((
                words[rng.gen_range(0..words.len())].clone(),
                tag.to_string(),
            ));
        } else {
            let tag = CONTENT_TAGS[rng.gen_range(0..CONTENT_TAGS.len())];
            let words = &vocab.content[tag][cluster];
            tokens.push((
                words[rng.gen_range(0..words.len())].clone(),
                tag.to_string(),
            ));
        }
    }
    tokens
}

fn swap_content_words(
    vocab: &ToyVocab,
    human: &[(String, String)],
    cluster: usize,
    swap_rate: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<(String, String)> {
    human
        .iter()
        .map(|(word, tag)| {
            let is_content = CONTENT_TAGS.contains(&tag.as_str());
            if is_content && rng.gen_bool(swap_rate) {
                let mut other = rng.gen_range(0..CLUSTERS);
                if other == cluster {
                    other = (other + 1) % CLUSTERS;
                }
                let words = &vocab.content[tag.as_str()][other];
                (words[rng.gen_range(0..words.len())].clone(), tag.clone())
            } else {
                (word.clone(), tag.clone())
            }
        })
        .collect()
}

fn record_json(id: &str, label: &str, tokens: &[(String, String)]) -> String {
    let tokens_json: Vec<String> = tokens
        .iter()
        .map(|(t, p)| format!(r#"{{"t":"{t}","p":"{p}"}}"#))
        .collect();
    format!(
        "{{\"id\":\"{id}\",\"label\":\"{label}\",\"tokens\":[{}]}}\n",
        tokens_json.join(",")
    )
}

/// Path to the compiled CLI binary.
pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mtdetect")
}
