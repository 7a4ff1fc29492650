//! Step 1: nearest same-tag neighbor matching within a paragraph.
//!
//! For every embedded token and every tag held by at least one *other*
//! embedded token, the minimum distance to a token of that tag is kept (ties
//! broken by the smallest target index). Each kept distance lands in the
//! unordered tag-pair group of the source and target tags, so a group {a,b}
//! with a != b collects records from both sides.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, TaggedParagraph};
use crate::embeddings::{DistanceMetric, EmbeddingTable};
use crate::Result;

/// Canonical unordered tag pair: indices into the tagset with `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagPair {
    pub a: u16,
    pub b: u16,
}

impl TagPair {
    pub fn new(x: u16, y: u16) -> Self {
        if x <= y {
            TagPair { a: x, b: y }
        } else {
            TagPair { a: y, b: x }
        }
    }
}

/// Minimum-distance match for one (source token, target tag) slot.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchRecord {
    pub source_index: usize,
    pub source_tag: u16,
    pub target_tag: u16,
    pub target_index: usize,
    pub dist: f64,
}

/// Distances bucketed by canonical tag pair, plus matching diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupedSimilarities {
    /// Multiset of kept distances per group, in source-index order.
    pub groups: BTreeMap<TagPair, Vec<f64>>,
    /// Tokens excluded because the embedding lookup failed.
    pub skipped_tokens: usize,
    /// Embedded tokens that participated in matching.
    pub embedded_tokens: usize,
}

impl GroupedSimilarities {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// Per-paragraph diagnostics for the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct ParagraphDiagnostics {
    pub id: String,
    pub tokens: usize,
    pub skipped_tokens: usize,
    pub empty_groups: bool,
}

/// Match every word of the paragraph against every other word, keeping the
/// per-tag minimum. Fewer than two embedded tokens yield empty groups rather
/// than an error.
pub fn match_paragraph(
    paragraph: &TaggedParagraph,
    table: &EmbeddingTable,
    metric: DistanceMetric,
) -> Result<GroupedSimilarities> {
    let (records, skipped, embedded) = match_records(paragraph, table, metric)?;
    let mut out = GroupedSimilarities {
        skipped_tokens: skipped,
        embedded_tokens: embedded,
        ..Default::default()
    };
    for r in records {
        out.groups
            .entry(TagPair::new(r.source_tag, r.target_tag))
            .or_default()
            .push(r.dist);
    }
    Ok(out)
}

/// The per-(source, target-tag) minimum-distance records behind
/// [`match_paragraph`], with skipped and embedded token counts.
pub fn match_records(
    paragraph: &TaggedParagraph,
    table: &EmbeddingTable,
    metric: DistanceMetric,
) -> Result<(Vec<MatchRecord>, usize, usize)> {
    // Resolve vectors once; OOV tokens drop out of matching entirely.
    let mut embedded: Vec<(usize, u16, &[f32])> = Vec::with_capacity(paragraph.tokens.len());
    let mut skipped = 0usize;
    for (i, token) in paragraph.tokens.iter().enumerate() {
        match table.lookup(&token.surface) {
            Some(v) => embedded.push((i, token.tag, v)),
            None => skipped += 1,
        }
    }

    let mut records = Vec::new();
    let n = embedded.len();
    if n < 2 {
        return Ok((records, skipped, embedded.len()));
    }

    // Distances are symmetric, so compute each unordered pair once. The
    // dense matrix is skipped for very long paragraphs to bound memory.
    let pair_matrix = if n <= 2048 {
        let mut m = vec![0.0f64; n * n];
        for p in 0..n {
            for q in (p + 1)..n {
                let d = metric.distance(embedded[p].2, embedded[q].2)?;
                m[p * n + q] = d;
                m[q * n + p] = d;
            }
        }
        Some(m)
    } else {
        None
    };

    let tag_span = embedded.iter().map(|&(_, t, _)| t as usize).max().unwrap() + 1;
    let mut best: Vec<(f64, usize)> = vec![(f64::INFINITY, usize::MAX); tag_span];
    for (src_pos, &(src_idx, src_tag, src_vec)) in embedded.iter().enumerate() {
        // Minimum distance per target tag; the smallest target index wins
        // ties because candidates are scanned in index order.
        best.fill((f64::INFINITY, usize::MAX));
        for (tgt_pos, &(tgt_idx, tgt_tag, tgt_vec)) in embedded.iter().enumerate() {
            if tgt_idx == src_idx {
                continue;
            }
            let d = match &pair_matrix {
                Some(m) => m[src_pos * n + tgt_pos],
                None => metric.distance(src_vec, tgt_vec)?,
            };
            let slot = &mut best[tgt_tag as usize];
            if d < slot.0 {
                *slot = (d, tgt_idx);
            }
        }
        for (tgt_tag, &(dist, tgt_idx)) in best.iter().enumerate() {
            if tgt_idx != usize::MAX {
                records.push(MatchRecord {
                    source_index: src_idx,
                    source_tag: src_tag,
                    target_tag: tgt_tag as u16,
                    target_index: tgt_idx,
                    dist,
                });
            }
        }
    }
    Ok((records, skipped, embedded.len()))
}

/// Match a whole corpus, in input order. Work is spread across the rayon pool
/// but output order and content are independent of the worker count.
pub fn match_corpus(
    corpus: &Corpus,
    table: &EmbeddingTable,
    metric: DistanceMetric,
) -> Result<Vec<(String, GroupedSimilarities)>> {
    corpus
        .paragraphs
        .par_iter()
        .map(|p| match_paragraph(p, table, metric).map(|g| (p.id.clone(), g)))
        .collect()
}

/// Diagnostics for a matched corpus, pairable with the match results.
pub fn diagnostics(
    corpus: &Corpus,
    matches: &[(String, GroupedSimilarities)],
) -> Vec<ParagraphDiagnostics> {
    corpus
        .paragraphs
        .iter()
        .zip(matches)
        .map(|(p, (_, g))| ParagraphDiagnostics {
            id: p.id.clone(),
            tokens: p.tokens.len(),
            skipped_tokens: g.skipped_tokens,
            empty_groups: g.is_empty(),
        })
        .collect()
}
