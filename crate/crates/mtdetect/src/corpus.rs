//! Labeled, POS-tagged paragraph ingestion.
//!
//! Paragraphs arrive either pre-tagged (JSON Lines, one record per paragraph)
//! or as raw text piped through an external tagger command speaking a simple
//! `surface<TAB>tag` line protocol.

use std::collections::{HashMap, HashSet};
use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Stdio};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::Result;

/// The 45-tag Penn Treebank tagset, word tags first, punctuation last.
/// Punctuation tags participate in matching; ":" in particular carries signal.
pub const PENN_TREEBANK_TAGS: [&str; 45] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNP", "NNPS", "NNS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", "#", "$", "''", "``", "(", ")", ",", ".", ":",
];

/// An ordered set of distinct POS tags. The order is the canonical ordering
/// used to canonicalize unordered tag pairs and to lay out feature vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tagset {
    tags: Vec<String>,
    by_name: HashMap<String, u16>,
    canonical: bool,
}

impl Tagset {
    /// The bundled 45-tag Penn Treebank tagset.
    pub fn penn_treebank() -> Self {
        let mut ts = Self::new(PENN_TREEBANK_TAGS.iter().map(|s| s.to_string())).unwrap();
        ts.canonical = true;
        ts
    }

    /// A custom tagset; tags must be non-empty and unique.
    pub fn new(tags: impl IntoIterator<Item = String>) -> Result<Self> {
        let tags: Vec<String> = tags.into_iter().collect();
        let mut by_name = HashMap::new();
        for (i, tag) in tags.iter().enumerate() {
            if tag.is_empty() {
                return Err(Error::Usage("empty tag in tagset".into()));
            }
            if by_name.insert(tag.clone(), i as u16).is_some() {
                return Err(Error::Usage(format!("duplicate tag {tag:?} in tagset")));
            }
        }
        if tags.is_empty() {
            return Err(Error::Usage("tagset has no tags".into()));
        }
        Ok(Tagset {
            tags,
            by_name,
            canonical: false,
        })
    }

    /// Load one tag per line from a text file.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let display = path.as_ref().display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&display, e))?;
        Self::new(
            text.lines()
                .map(|l| l.trim().to_string())
                .filter(|l| !l.is_empty()),
        )
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn index_of(&self, tag: &str) -> Option<u16> {
        self.by_name.get(tag).copied()
    }

    pub fn tag(&self, index: u16) -> &str {
        &self.tags[index as usize]
    }

    /// Stable content hash binding feature files and models to this tagset.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for tag in &self.tags {
            hasher.update(tag.as_bytes());
            hasher.update(b"\n");
        }
        format!("{:x}", hasher.finalize())
    }
}

/// Paragraph label; `Unlabeled` serves prediction-time input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Human,
    Machine,
}

/// One token: surface form plus POS tag, as indices into the active tagset.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub surface: String,
    pub tag: u16,
}

/// An admitted paragraph: ordered tagged tokens plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedParagraph {
    pub id: String,
    pub label: Option<Label>,
    pub tokens: Vec<Token>,
    pub sentence_count: Option<u32>,
}

/// Why a record was refused admission.
#[derive(Debug, Clone, Serialize)]
pub struct Rejection {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusStats {
    pub paragraphs: usize,
    pub human: usize,
    pub machine: usize,
    pub unlabeled: usize,
    pub mean_sentence_count: Option<f64>,
    pub mean_token_count: f64,
}

/// A validated collection of tagged paragraphs sharing one tagset.
pub struct Corpus {
    pub paragraphs: Vec<TaggedParagraph>,
    pub tagset: Tagset,
}

/// Outcome of an ingestion pass: the admitted corpus plus every rejection.
/// Admission is total: each input record lands in exactly one of the two.
pub struct LoadOutcome {
    pub corpus: Corpus,
    pub rejections: Vec<Rejection>,
}

impl Corpus {
    pub fn stats(&self) -> CorpusStats {
        let mut human = 0;
        let mut machine = 0;
        let mut unlabeled = 0;
        let mut sentence_sum = 0u64;
        let mut sentence_n = 0usize;
        let mut token_sum = 0usize;
        for p in &self.paragraphs {
            match p.label {
                Some(Label::Human) => human += 1,
                Some(Label::Machine) => machine += 1,
                None => unlabeled += 1,
            }
            if let Some(s) = p.sentence_count {
                sentence_sum += s as u64;
                sentence_n += 1;
            }
            token_sum += p.tokens.len();
        }
        let n = self.paragraphs.len();
        CorpusStats {
            paragraphs: n,
            human,
            machine,
            unlabeled,
            mean_sentence_count: (sentence_n > 0).then(|| sentence_sum as f64 / sentence_n as f64),
            mean_token_count: if n > 0 {
                token_sum as f64 / n as f64
            } else {
                0.0
            },
        }
    }

    /// Serialize back to the ingestion JSONL schema.
    pub fn write_jsonl(&self, mut out: impl std::io::Write) -> std::io::Result<()> {
        for p in &self.paragraphs {
            let record = RawTaggedRecord {
                id: p.id.clone(),
                label: p.label,
                tokens: p
                    .tokens
                    .iter()
                    .map(|t| RawToken {
                        t: t.surface.clone(),
                        p: self.tagset.tag(t.tag).to_string(),
                    })
                    .collect(),
                sentences: p.sentence_count,
            };
            serde_json::to_writer(&mut out, &record)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawToken {
    t: String,
    p: String,
}

#[derive(Serialize, Deserialize)]
struct RawTaggedRecord {
    id: String,
    label: Option<Label>,
    tokens: Vec<RawToken>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sentences: Option<u32>,
}

#[derive(Deserialize)]
struct RawTextRecord {
    id: String,
    label: Option<Label>,
    text: String,
}

/// Parse a pre-tagged JSONL corpus. Malformed JSON and duplicate ids are hard
/// errors; records with tags outside the tagset or no tokens are rejected
/// individually.
pub fn load_corpus(path: impl AsRef<Path>, tagset: &Tagset) -> Result<LoadOutcome> {
    let display = path.as_ref().display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&display, e))?;
    load_corpus_str(&text, &display, tagset)
}

pub fn load_corpus_str(text: &str, source: &str, tagset: &Tagset) -> Result<LoadOutcome> {
    let mut paragraphs = Vec::new();
    let mut rejections = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: RawTaggedRecord = serde_json::from_str(line)
            .map_err(|e| Error::parse(source, line_no + 1, e.to_string()))?;
        if !seen_ids.insert(record.id.clone()) {
            return Err(Error::DuplicateId(record.id));
        }
        match admit_record(record, tagset) {
            Ok(p) => paragraphs.push(p),
            Err(r) => rejections.push(r),
        }
    }
    Ok(LoadOutcome {
        corpus: Corpus {
            paragraphs,
            tagset: tagset.clone(),
        },
        rejections,
    })
}

fn admit_record(
    record: RawTaggedRecord,
    tagset: &Tagset,
) -> std::result::Result<TaggedParagraph, Rejection> {
    if record.tokens.is_empty() {
        return Err(Rejection {
            id: record.id,
            reason: "no tokens".into(),
        });
    }
    let mut tokens = Vec::with_capacity(record.tokens.len());
    for raw in record.tokens {
        match tagset.index_of(&raw.p) {
            Some(tag) => tokens.push(Token {
                surface: raw.t,
                tag,
            }),
            None => {
                return Err(Rejection {
                    id: record.id,
                    reason: format!("unknown tag {}", raw.p),
                })
            }
        }
    }
    Ok(TaggedParagraph {
        id: record.id,
        label: record.label,
        tokens,
        sentence_count: record.sentences,
    })
}

/// Ingest raw-text JSONL by piping each paragraph through an external tagger.
///
/// The tagger command receives the paragraph text on stdin and must emit one
/// `surface<TAB>tag` line per token; blank lines (sentence or paragraph
/// separators) are skipped. A nonzero exit status aborts the whole run.
pub fn tag_with_external(
    path: impl AsRef<Path>,
    tagger_cmd: &str,
    tagset: &Tagset,
) -> Result<LoadOutcome> {
    let display = path.as_ref().display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&display, e))?;

    let mut paragraphs = Vec::new();
    let mut rejections = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: RawTextRecord = serde_json::from_str(line)
            .map_err(|e| Error::parse(&display, line_no + 1, e.to_string()))?;
        if !seen_ids.insert(record.id.clone()) {
            return Err(Error::DuplicateId(record.id));
        }
        if record.text.trim().is_empty() {
            rejections.push(Rejection {
                id: record.id,
                reason: "no tokens".into(),
            });
            continue;
        }
        let tokens = match run_tagger(tagger_cmd, &record.text)? {
            Ok(tokens) => tokens,
            Err(reason) => {
                rejections.push(Rejection {
                    id: record.id,
                    reason,
                });
                continue;
            }
        };
        let raw = RawTaggedRecord {
            id: record.id,
            label: record.label,
            tokens,
            sentences: None,
        };
        match admit_record(raw, tagset) {
            Ok(p) => paragraphs.push(p),
            Err(r) => rejections.push(r),
        }
    }
    Ok(LoadOutcome {
        corpus: Corpus {
            paragraphs,
            tagset: tagset.clone(),
        },
        rejections,
    })
}

/// Run the tagger once for one paragraph. The outer Result is a process
/// failure; the inner Err is a per-record rejection reason.
fn run_tagger(tagger_cmd: &str, text: &str) -> Result<std::result::Result<Vec<RawToken>, String>> {
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(tagger_cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::io(format!("tagger command {tagger_cmd:?}"), e))?;
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("tagger stdin", e))?;
    let output = child
        .wait_with_output()
        .map_err(|e| Error::io("tagger process", e))?;
    if !output.status.success() {
        return Err(Error::TaggerFailed {
            status: output.status.code().unwrap_or(-1),
            stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        });
    }
    let stdout = String::from_utf8_lossy(&output.stdout);
    let mut tokens = Vec::new();
    for line in stdout.lines() {
        if line.trim().is_empty() {
            continue;
        }
        match line.split_once('\t') {
            Some((surface, tag)) => tokens.push(RawToken {
                t: surface.to_string(),
                p: tag.trim().to_string(),
            }),
            None => return Ok(Err(format!("malformed tagger line {line:?}"))),
        }
    }
    if tokens.is_empty() {
        return Ok(Err("no tokens".into()));
    }
    Ok(Ok(tokens))
}
