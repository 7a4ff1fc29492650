//! Step 2: coherence features — per-group mean and population variance.
//!
//! The feature vector has a fixed layout bound to the tagset: all group means
//! first, then all group variances, with groups enumerated lexicographically
//! over canonical tag-pair indices. Empty groups encode as (0, 0) with a
//! cleared presence bit so the vector stays dense and fixed-length.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::corpus::{Label, Tagset};
use crate::error::Error;
use crate::matcher::{GroupedSimilarities, TagPair};
use crate::Result;

pub const FEATURE_SCHEMA_VERSION: u32 = 1;

/// Bijection between canonical tag pairs and feature slots.
#[derive(Debug, Clone)]
pub struct FeatureLayout {
    tagset: Tagset,
    group_count: usize,
}

impl FeatureLayout {
    /// Enumerate all unordered pairs (a, b), a <= b, in tagset order.
    /// 45 tags give 1035 groups and a 2070-slot vector.
    pub fn build(tagset: &Tagset) -> Self {
        let t = tagset.len();
        FeatureLayout {
            tagset: tagset.clone(),
            group_count: t * (t + 1) / 2,
        }
    }

    pub fn tagset(&self) -> &Tagset {
        &self.tagset
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    pub fn total_len(&self) -> usize {
        2 * self.group_count
    }

    /// Slot index of a canonical pair under lexicographic enumeration.
    pub fn group_index(&self, pair: TagPair) -> Option<usize> {
        let t = self.tagset.len();
        let (a, b) = (pair.a as usize, pair.b as usize);
        if a > b || b >= t {
            return None;
        }
        Some(a * t - a * (a + 1) / 2 + b)
    }

    /// Inverse of [`group_index`](Self::group_index).
    pub fn pair_at(&self, index: usize) -> TagPair {
        let t = self.tagset.len();
        let mut a = 0usize;
        let mut base = 0usize;
        while base + (t - a) <= index {
            base += t - a;
            a += 1;
        }
        let b = a + (index - base);
        TagPair {
            a: a as u16,
            b: b as u16,
        }
    }

    /// Human-readable name of a group, e.g. "TO-:".
    pub fn group_name(&self, index: usize) -> String {
        let pair = self.pair_at(index);
        format!("{}-{}", self.tagset.tag(pair.a), self.tagset.tag(pair.b))
    }
}

/// One paragraph's dense feature row: means at `[0, G)`, variances at
/// `[G, 2G)`, plus a presence bit per group.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    pub paragraph_id: String,
    pub label: Option<Label>,
    pub values: Vec<f64>,
    pub present: Vec<bool>,
}

impl CoherenceVector {
    pub fn present_count(&self) -> usize {
        self.present.iter().filter(|&&b| b).count()
    }
}

/// Reduce grouped similarities to the fixed-layout coherence vector.
/// Variance is the population variance, so singleton groups get 0 with the
/// presence bit still set.
pub fn featurize(
    grouped: &GroupedSimilarities,
    layout: &FeatureLayout,
    paragraph_id: impl Into<String>,
    label: Option<Label>,
) -> Result<CoherenceVector> {
    let g = layout.group_count();
    let mut values = vec![0.0f64; 2 * g];
    let mut present = vec![false; g];
    for (pair, distances) in &grouped.groups {
        let idx = layout
            .group_index(*pair)
            .ok_or_else(|| Error::UnknownGroup(format!("{}-{}", pair.a, pair.b)))?;
        let (mean, variance) = mean_variance(distances);
        values[idx] = mean;
        values[g + idx] = variance;
        present[idx] = true;
    }
    Ok(CoherenceVector {
        paragraph_id: paragraph_id.into(),
        label,
        values,
        present,
    })
}

fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let variance = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, variance)
}

/// Header record binding a feature file to its layout and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSetHeader {
    pub schema_version: u32,
    pub tagset_hash: String,
    pub metric: String,
    pub embedding_id: String,
    pub group_count: usize,
}

/// A full feature file: header plus one row per paragraph.
#[derive(Debug, Clone)]
pub struct FeatureSet {
    pub header: FeatureSetHeader,
    pub rows: Vec<CoherenceVector>,
}

#[derive(Serialize, Deserialize)]
struct FeatureRowRecord {
    id: String,
    label: Option<Label>,
    values: Vec<f64>,
    present: String,
}

/// Encode a presence bitmask as base64, least-significant bit first.
pub fn encode_mask(present: &[bool]) -> String {
    let mut bytes = vec![0u8; present.len().div_ceil(8)];
    for (i, &bit) in present.iter().enumerate() {
        if bit {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    base64::engine::general_purpose::STANDARD.encode(bytes)
}

/// Decode a base64 presence bitmask of known length.
pub fn decode_mask(encoded: &str, len: usize) -> Result<Vec<bool>> {
    let bytes = base64::engine::general_purpose::STANDARD
        .decode(encoded)
        .map_err(|e| Error::Usage(format!("bad presence mask: {e}")))?;
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Usage("presence mask length mismatch".into()));
    }
    Ok((0..len).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect())
}

impl FeatureSet {
    pub fn new(header: FeatureSetHeader) -> Self {
        FeatureSet {
            header,
            rows: Vec::new(),
        }
    }

    /// Build the whole set from matched paragraphs. Rows keep input order.
    pub fn from_matches(
        matches: &[(String, GroupedSimilarities)],
        layout: &FeatureLayout,
        labels: &HashMap<String, Option<Label>>,
        metric: &str,
        embedding_id: &str,
    ) -> Result<Self> {
        let header = FeatureSetHeader {
            schema_version: FEATURE_SCHEMA_VERSION,
            tagset_hash: layout.tagset().hash(),
            metric: metric.to_string(),
            embedding_id: embedding_id.to_string(),
            group_count: layout.group_count(),
        };
        let mut set = FeatureSet::new(header);
        for (id, grouped) in matches {
            let label = labels.get(id).copied().flatten();
            set.rows
                .push(featurize(grouped, layout, id.clone(), label)?);
        }
        Ok(set)
    }

    pub fn group_count(&self) -> usize {
        self.header.group_count
    }

    pub fn total_len(&self) -> usize {
        2 * self.header.group_count
    }

    /// Provenance string used for layout-mismatch checks.
    pub fn binding(&self) -> String {
        format!(
            "tagset={} metric={} embedding={}",
            self.header.tagset_hash, self.header.metric, self.header.embedding_id
        )
    }

    pub fn write(&self, mut out: impl Write) -> std::io::Result<()> {
        serde_json::to_writer(&mut out, &self.header)?;
        writeln!(out)?;
        for row in &self.rows {
            let record = FeatureRowRecord {
                id: row.paragraph_id.clone(),
                label: row.label,
                values: row.values.clone(),
                present: encode_mask(&row.present),
            };
            serde_json::to_writer(&mut out, &record)?;
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write_to_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let display = path.as_ref().display().to_string();
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&display, e))?;
        let mut writer = std::io::BufWriter::new(file);
        self.write(&mut writer).map_err(|e| Error::io(&display, e))
    }

    pub fn read(reader: impl BufRead, source: &str) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header: FeatureSetHeader = match lines.next() {
            Some((_, line)) => {
                let line = line.map_err(|e| Error::io(source, e))?;
                serde_json::from_str(&line).map_err(|e| Error::parse(source, 1, e.to_string()))?
            }
            None => return Err(Error::parse(source, 1, "missing feature-set header")),
        };
        if header.schema_version != FEATURE_SCHEMA_VERSION {
            return Err(Error::SchemaVersion(header.schema_version));
        }
        let total_len = 2 * header.group_count;
        let mut rows = Vec::new();
        for (line_no, line) in lines {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let record: FeatureRowRecord = serde_json::from_str(&line)
                .map_err(|e| Error::parse(source, line_no + 1, e.to_string()))?;
            if record.values.len() != total_len {
                return Err(Error::parse(
                    source,
                    line_no + 1,
                    format!(
                        "row has {} values, layout requires {total_len}",
                        record.values.len()
                    ),
                ));
            }
            rows.push(CoherenceVector {
                paragraph_id: record.id,
                label: record.label,
                values: record.values,
                present: decode_mask(&record.present, header.group_count)?,
            });
        }
        Ok(FeatureSet { header, rows })
    }

    pub fn read_from_path(path: impl AsRef<Path>) -> Result<Self> {
        let display = path.as_ref().display().to_string();
        let file = std::fs::File::open(&path).map_err(|e| Error::io(&display, e))?;
        Self::read(std::io::BufReader::new(file), &display)
    }
}
