//! Distance, fluency, and similarity measurements behind evaluation reports.

mod lm;
mod report;

pub use lm::{ppl_increase, CharNGramLm};
pub use report::{build_report_row, render_report_csv, render_report_markdown, ReportRow};

use crate::corpus::tokenize;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::time::Duration;
use thiserror::Error;

/// Minimum unit-cost edit count between two sequences.
///
/// Works at any granularity; see [`char_distance`] and [`token_distance`]
/// for the two common ones.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut current = vec![0usize; b.len() + 1];
    for (i, item_a) in a.iter().enumerate() {
        current[0] = i + 1;
        for (j, item_b) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(item_a != item_b);
            current[j + 1] = sub.min(prev[j + 1] + 1).min(current[j] + 1);
        }
        std::mem::swap(&mut prev, &mut current);
    }
    prev[b.len()]
}

/// Character-level Levenshtein distance.
pub fn char_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein(&a, &b)
}

/// Token-level Levenshtein distance over the standard tokenization.
pub fn token_distance(a: &str, b: &str) -> usize {
    levenshtein(&tokenize(a, false).tokens, &tokenize(b, false).tokens)
}

/// Cosine similarity of token-count vectors, in `[0, 1]`.
pub fn similarity(original: &str, perturbed: &str) -> Result<f64, MetricsError> {
    let a = token_counts(original)?;
    let b = token_counts(perturbed)?;
    let mut dot = 0.0;
    for (token, count) in &a {
        if let Some(other) = b.get(token) {
            dot += count * other;
        }
    }
    let norm_a: f64 = a.values().map(|c| c * c).sum::<f64>().sqrt();
    let norm_b: f64 = b.values().map(|c| c * c).sum::<f64>().sqrt();
    Ok(dot / (norm_a * norm_b))
}

fn token_counts(text: &str) -> Result<BTreeMap<String, f64>, MetricsError> {
    let tokens = tokenize(text, false).tokens;
    if tokens.is_empty() {
        return Err(MetricsError::EmptyText);
    }
    let mut counts = BTreeMap::new();
    for token in tokens {
        *counts.entry(token).or_insert(0.0) += 1.0;
    }
    Ok(counts)
}

/// A pluggable scorer over (original, perturbed) pairs; lets an external
/// service replace a built-in stand-in metric.
pub trait PairScorer: Send + Sync {
    fn score(&self, original: &str, perturbed: &str) -> Result<f64, MetricsError>;
}

/// Built-in similarity stand-in: token-count cosine.
pub struct TokenCosineScorer;

impl PairScorer for TokenCosineScorer {
    fn score(&self, original: &str, perturbed: &str) -> Result<f64, MetricsError> {
        similarity(original, perturbed)
    }
}

/// HTTP client for the scorer hook protocol:
/// `POST <endpoint>/score {"original": str, "perturbed": str}` returning
/// `{"value": float}`.
pub struct RemoteScorer {
    url: String,
    timeout: Duration,
    agent: ureq::Agent,
}

impl RemoteScorer {
    pub fn bind(endpoint: &str, timeout: Duration) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout_connect(timeout)
            .timeout(timeout)
            .build();
        RemoteScorer {
            url: format!("{}/score", endpoint.trim_end_matches('/')),
            timeout,
            agent,
        }
    }
}

#[derive(Deserialize)]
struct ScoreResponse {
    value: f64,
}

impl PairScorer for RemoteScorer {
    fn score(&self, original: &str, perturbed: &str) -> Result<f64, MetricsError> {
        let response = self
            .agent
            .post(&self.url)
            .send_json(ureq::json!({ "original": original, "perturbed": perturbed }))
            .map_err(|e| match e {
                ureq::Error::Status(code, _) => MetricsError::Status(code),
                ureq::Error::Transport(t) => {
                    let text = t.to_string();
                    if text.contains("timed out") || text.contains("timeout") {
                        MetricsError::Timeout(self.timeout)
                    } else {
                        MetricsError::Transport(text)
                    }
                }
            })?;
        let parsed: ScoreResponse = response
            .into_json()
            .map_err(|e| MetricsError::Protocol(e.to_string()))?;
        Ok(parsed.value)
    }
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("text is empty")]
    EmptyText,
    #[error("remote scorer transport failure: {0}")]
    Transport(String),
    #[error("remote scorer timed out after {0:?}")]
    Timeout(Duration),
    #[error("remote scorer returned HTTP status {0}")]
    Status(u16),
    #[error("remote scorer protocol violation: {0}")]
    Protocol(String),
}

#[cfg(test)]
mod tests;
