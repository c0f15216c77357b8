//! Labeled datasets, adversarial pair corpora, deterministic tokenization,
//! and token-level edit-script alignment.
//!
//! Everything in this module is pure and stateless; readers are
//! single-consumer iterators.

mod align;
mod ingest;
mod tokenize;

pub use align::{align_pair, align_tokens};
pub use ingest::{
    ingest_pairs, read_examples, read_pairs, write_examples_jsonl, write_pairs_jsonl, PairFormat,
    PairReader,
};
pub use tokenize::tokenize;

use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use thiserror::Error;

/// A sentence split into tokens, each carrying its `(start, end)` character
/// offsets into the raw string.
///
/// Spans are non-overlapping and strictly increasing. The substring of `raw`
/// at `spans[i]` equals `tokens[i]` before optional lowercasing, so the raw
/// string can always be rebuilt from the spans plus the inter-token gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedText {
    pub raw: String,
    pub tokens: Vec<String>,
    /// Per-token `(start, end)` character offsets into `raw` (end exclusive).
    pub spans: Vec<(usize, usize)>,
}

impl TokenizedText {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The raw substring backing token `i` (original casing, unlike
    /// `tokens[i]` when lowercasing was requested).
    pub fn raw_token(&self, i: usize) -> String {
        let (start, end) = self.spans[i];
        self.raw.chars().skip(start).take(end - start).collect()
    }

    /// Rebuild the raw string with the listed tokens replaced.
    ///
    /// `replacements` maps token index to replacement string; indices must be
    /// strictly increasing. Unreplaced tokens keep their original surface
    /// form, as do all inter-token gaps.
    pub fn replace_tokens(&self, replacements: &[(usize, &str)]) -> String {
        debug_assert!(replacements.windows(2).all(|w| w[0].0 < w[1].0));
        let chars: Vec<char> = self.raw.chars().collect();
        let mut out = String::with_capacity(self.raw.len());
        let mut cursor = 0usize;
        let mut repl = replacements.iter().peekable();
        for (i, &(start, end)) in self.spans.iter().enumerate() {
            out.extend(&chars[cursor..start]);
            match repl.peek() {
                Some(&&(idx, text)) if idx == i => {
                    out.push_str(text);
                    repl.next();
                }
                _ => out.extend(&chars[start..end]),
            }
            cursor = end;
        }
        out.extend(&chars[cursor..]);
        out
    }
}

/// One labeled classification example with task/dataset provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub text: String,
    pub label: usize,
    #[serde(rename = "task")]
    pub task_id: String,
    #[serde(rename = "dataset")]
    pub dataset_id: String,
}

/// One (original, perturbed) record with attack provenance, the stored
/// success flag, and optional victim confidences for the true class.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialPair {
    pub original: LabeledExample,
    pub perturbed: String,
    pub attack_method: String,
    pub victim_model_id: String,
    pub success: bool,
    pub orig_conf: Option<f64>,
    pub adv_conf: Option<f64>,
}

/// One token-level edit over the original token sequence.
///
/// Indices refer to positions in the *original* sequence. An `Insert` at
/// index `i` places its token before original position `i` (so `i == len`
/// appends at the end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    Substitute {
        index: usize,
        original: String,
        replacement: String,
    },
    Insert {
        index: usize,
        token: String,
    },
    Delete {
        index: usize,
        original: String,
    },
}

impl Edit {
    /// Original-sequence position this edit anchors to.
    pub fn index(&self) -> usize {
        match self {
            Edit::Substitute { index, .. } | Edit::Insert { index, .. } | Edit::Delete { index, .. } => {
                *index
            }
        }
    }
}

/// An ordered minimum-cost edit script between two token sequences.
///
/// Edits are stored in application order: ascending by original index, with
/// inserts at a given index preceding the substitute/delete that consumes it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditScript {
    pub edits: Vec<Edit>,
}

impl EditScript {
    pub fn len(&self) -> usize {
        self.edits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }

    /// Apply the script to the original token sequence.
    pub fn apply(&self, original: &[String]) -> Vec<String> {
        let mut out = Vec::with_capacity(original.len());
        let mut pos = 0usize;
        for edit in &self.edits {
            match edit {
                Edit::Substitute { index, replacement, .. } => {
                    out.extend_from_slice(&original_slice(original, pos, *index));
                    out.push(replacement.clone());
                    pos = index + 1;
                }
                Edit::Delete { index, .. } => {
                    out.extend_from_slice(&original_slice(original, pos, *index));
                    pos = index + 1;
                }
                Edit::Insert { index, token } => {
                    out.extend_from_slice(&original_slice(original, pos, *index));
                    out.push(token.clone());
                    pos = *index;
                }
            }
        }
        out.extend_from_slice(&original[pos..]);
        out
    }

    /// The `(source, target, index)` of every substitution, in order.
    pub fn substitutions(&self) -> impl Iterator<Item = (&str, &str, usize)> {
        self.edits.iter().filter_map(|e| match e {
            Edit::Substitute {
                index,
                original,
                replacement,
            } => Some((original.as_str(), replacement.as_str(), *index)),
            _ => None,
        })
    }
}

fn original_slice(original: &[String], from: usize, to: usize) -> &[String] {
    &original[from..to]
}

/// Errors raised while reading corpora from disk.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: field `{field}`: {reason}")]
    Field {
        line: usize,
        field: String,
        reason: String,
    },
    #[error("unknown corpus format `{0}` (expected `jsonl` or `csv`)")]
    UnknownFormat(String),
}

#[cfg(test)]
mod tests;
