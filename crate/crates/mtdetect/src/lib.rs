//! Machine-translated paragraph detection from word-embedding coherence.
//!
//! A paragraph is represented by how tightly its words cluster in an embedding
//! space: every word is matched against every other word, the minimum distance
//! per part-of-speech pair is kept, and the per-group means and variances form
//! a fixed-layout feature vector fed to a linear classifier.
//!
//! The pipeline has three stages, each usable on its own:
//!
//! - [`matcher`]: nearest same-tag neighbor search over a tagged paragraph,
//!   bucketed by unordered POS-tag pair.
//! - [`features`]: reduction of the distance buckets to a dense
//!   means-then-variances coherence vector.
//! - [`classifier`] / [`evaluator`]: linear SVM training (three optimizer
//!   variants) and the evaluation harness (stratified k-fold CV, accuracy,
//!   equal error rate, ablations, per-group feature ranking).
//!
//! See the `examples/` directory for one runnable program per capability, and
//! the `mtdetect` binary for the batch CLI (`ingest`, `extract`, `train`,
//! `predict`, `crossval`, `rank`).

pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod evaluator;
pub mod features;
pub mod matcher;

pub use embeddings::{DistanceMetric, EmbeddingTable};
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
