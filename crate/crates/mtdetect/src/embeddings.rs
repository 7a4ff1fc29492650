//! GloVe-format embedding tables and inter-word distance metrics.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::Result;

/// Distance between two word vectors.
///
/// Euclidean is the default for coherence features; its wider dynamic range
/// separates word pairs more clearly than cosine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    Euclidean,
    Cosine,
}

impl DistanceMetric {
    pub fn name(self) -> &'static str {
        match self {
            DistanceMetric::Euclidean => "euclidean",
            DistanceMetric::Cosine => "cosine",
        }
    }

    /// Metric value between two vectors of equal dimension.
    ///
    /// Cosine distance is `1 - cos(u, v)`, in `[0, 2]`, and is an error when
    /// either vector has zero norm.
    pub fn distance(self, u: &[f32], v: &[f32]) -> Result<f64> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                actual: v.len(),
            });
        }
        match self {
            DistanceMetric::Euclidean => {
                let mut acc = 0.0f64;
                for (a, b) in u.iter().zip(v) {
                    let d = *a as f64 - *b as f64;
                    acc += d * d;
                }
                Ok(acc.sqrt())
            }
            DistanceMetric::Cosine => {
                let (mut dot, mut nu, mut nv) = (0.0f64, 0.0f64, 0.0f64);
                for (a, b) in u.iter().zip(v) {
                    let (a, b) = (*a as f64, *b as f64);
                    dot += a * b;
                    nu += a * a;
                    nv += b * b;
                }
                if nu == 0.0 || nv == 0.0 {
                    return Err(Error::ZeroNormVector);
                }
                Ok(1.0 - dot / (nu.sqrt() * nv.sqrt()))
            }
        }
    }
}

impl std::str::FromStr for DistanceMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(DistanceMetric::Euclidean),
            "cosine" => Ok(DistanceMetric::Cosine),
            other => Err(Error::Usage(format!(
                "unknown metric {other:?}; expected euclidean or cosine"
            ))),
        }
    }
}

/// Immutable vocabulary-to-vector table.
///
/// Vectors live in one contiguous buffer indexed through the vocabulary map,
/// so a 400k x 300 table stays compact and safe to share across worker
/// threads.
#[derive(Debug)]
pub struct EmbeddingTable {
    dimension: usize,
    index: HashMap<String, u32>,
    data: Vec<f32>,
    source_id: String,
    duplicate_count: usize,
}

impl EmbeddingTable {
    /// Load a whitespace-separated GloVe text file: one token followed by D
    /// real components per line. The dimension is taken from the first line
    /// unless `expected_dimension` pins it. Duplicate tokens keep the last
    /// occurrence and are counted.
    pub fn load(path: impl AsRef<Path>, expected_dimension: Option<usize>) -> Result<Self> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(&display, e))?;
        let mut reader = BufReader::new(file);

        let mut hasher = Sha256::new();
        let mut index: HashMap<String, u32> = HashMap::new();
        let mut data: Vec<f32> = Vec::new();
        let mut dimension = expected_dimension;
        let mut duplicate_count = 0usize;
        let mut line = String::new();
        let mut line_no = 0usize;

        loop {
            line.clear();
            let n = reader
                .read_line(&mut line)
                .map_err(|e| Error::io(&display, e))?;
            if n == 0 {
                break;
            }
            line_no += 1;
            hasher.update(line.as_bytes());
            let trimmed = line.trim_end_matches(['\n', '\r']);
            if trimmed.is_empty() {
                continue;
            }
            let mut fields = trimmed.split_ascii_whitespace();
            let token = fields
                .next()
                .ok_or_else(|| Error::parse(&display, line_no, "empty line"))?;
            let mut vector = Vec::with_capacity(dimension.unwrap_or(0));
            for field in fields {
                let value: f32 = field.parse().map_err(|_| {
                    Error::parse(
                        &display,
                        line_no,
                        format!("non-numeric component {field:?}"),
                    )
                })?;
                if !value.is_finite() {
                    return Err(Error::parse(
                        &display,
                        line_no,
                        format!("non-finite component {field:?}"),
                    ));
                }
                vector.push(value);
            }
            let dim = match dimension {
                Some(d) => {
                    if vector.len() != d {
                        return Err(Error::parse(
                            &display,
                            line_no,
                            format!("expected {d} components, found {}", vector.len()),
                        ));
                    }
                    d
                }
                None => {
                    if vector.is_empty() {
                        return Err(Error::parse(&display, line_no, "no vector components"));
                    }
                    dimension = Some(vector.len());
                    vector.len()
                }
            };
            match index.get(token) {
                Some(&slot) => {
                    duplicate_count += 1;
                    let start = slot as usize * dim;
                    data[start..start + dim].copy_from_slice(&vector);
                }
                None => {
                    let slot = (data.len() / dim) as u32;
                    index.insert(token.to_owned(), slot);
                    data.extend_from_slice(&vector);
                }
            }
        }

        let dimension = dimension.ok_or_else(|| Error::EmptyEmbeddingFile(display.clone()))?;
        if index.is_empty() {
            return Err(Error::EmptyEmbeddingFile(display));
        }
        Ok(EmbeddingTable {
            dimension,
            index,
            data,
            source_id: format!("{:x}", hasher.finalize()),
            duplicate_count,
        })
    }

    /// Build a table directly from (token, vector) pairs. Every vector must
    /// have the same length; later duplicates replace earlier entries.
    pub fn from_vectors<I, S>(entries: I, source_id: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut index = HashMap::new();
        let mut data = Vec::new();
        let mut dimension = None;
        let mut duplicate_count = 0usize;
        for (token, vector) in entries {
            let dim = *dimension.get_or_insert(vector.len());
            if vector.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: vector.len(),
                });
            }
            let token: String = token.into();
            match index.get(&token) {
                Some(&slot) => {
                    duplicate_count += 1;
                    let start = slot as usize * dim;
                    data[start..start + dim].copy_from_slice(&vector);
                }
                None => {
                    let slot = (data.len() / dim) as u32;
                    index.insert(token, slot);
                    data.extend_from_slice(&vector);
                }
            }
        }
        let dimension = dimension.ok_or_else(|| Error::EmptyEmbeddingFile("<memory>".into()))?;
        Ok(EmbeddingTable {
            dimension,
            index,
            data,
            source_id: source_id.into(),
            duplicate_count,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vocab_size(&self) -> usize {
        self.index.len()
    }

    /// Content hash (or caller-supplied id) identifying the source file.
    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// How many vocabulary lines were overwritten by a later duplicate.
    pub fn duplicate_count(&self) -> usize {
        self.duplicate_count
    }

    /// Exact-match lookup, falling back to the lowercased token. GloVe 6B is
    /// lowercase-only; exact-first keeps cased embeddings correct.
    pub fn lookup(&self, token: &str) -> Option<&[f32]> {
        if let Some(v) = self.get_exact(token) {
            return Some(v);
        }
        let lower = token.to_lowercase();
        if lower == token {
            return None;
        }
        self.get_exact(&lower)
    }

    fn get_exact(&self, token: &str) -> Option<&[f32]> {
        self.index.get(token).map(|&slot| {
            let start = slot as usize * self.dimension;
            &self.data[start..start + self.dimension]
        })
    }

    /// Iterate over all (token, vector) entries in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.index.iter().map(|(token, &slot)| {
            let start = slot as usize * self.dimension;
            (token.as_str(), &self.data[start..start + self.dimension])
        })
    }

    /// Write the table back out in GloVe text format. Token order follows the
    /// internal vector layout, so a load/save/load round trip preserves every
    /// lookup.
    pub fn write_glove(&self, mut out: impl Write) -> std::io::Result<()> {
        let mut tokens: Vec<(&str, u32)> = self
            .index
            .iter()
            .map(|(t, &slot)| (t.as_str(), slot))
            .collect();
        tokens.sort_by_key(|&(_, slot)| slot);
        for (token, slot) in tokens {
            write!(out, "{token}")?;
            let start = slot as usize * self.dimension;
            for value in &self.data[start..start + self.dimension] {
                write!(out, " {value}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
