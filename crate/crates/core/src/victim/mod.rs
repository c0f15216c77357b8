//! The classifier-under-attack behind a uniform oracle interface.
//!
//! Every victim — the built-in hashed bag-of-words model or a remote HTTP
//! service — sits behind [`VictimOracle`]. Query accounting is handled by
//! wrapping an oracle with [`with_ledger`]; decision-based evaluation strips
//! confidences with [`decision_only`].

mod bow;
mod remote;

pub use bow::{train_bow_classifier, BowClassifier, BowOracle, BowTrainConfig, MASK_TOKEN};
pub use remote::{bind_remote, RemoteVictim};

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;
use thiserror::Error;

/// A classification outcome: the predicted label, plus the per-class
/// probability vector when the oracle runs in confidence mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: usize,
    pub confidence: Option<Vec<f64>>,
}

impl Prediction {
    /// Decision-only prediction.
    pub fn label_only(label: usize) -> Self {
        Prediction {
            label,
            confidence: None,
        }
    }

    /// Build a prediction from a probability vector; the label is the argmax
    /// (lowest index on ties).
    ///
    /// Entries must lie in `[0, 1]` and sum to 1 within `1e-6`.
    pub fn from_confidence(confidence: Vec<f64>) -> Result<Self, VictimError> {
        if confidence.is_empty() {
            return Err(VictimError::InvalidConfidence("empty vector".into()));
        }
        if confidence.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(VictimError::InvalidConfidence(format!(
                "entry outside [0, 1] in {confidence:?}"
            )));
        }
        let sum: f64 = confidence.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(VictimError::InvalidConfidence(format!(
                "entries sum to {sum}, expected 1"
            )));
        }
        let label = argmax(&confidence);
        Ok(Prediction {
            label,
            confidence: Some(confidence),
        })
    }

    /// Confidence assigned to class `y`, if the vector is present.
    pub fn confidence_for(&self, y: usize) -> Option<f64> {
        self.confidence.as_ref().and_then(|c| c.get(y)).copied()
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0usize;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// A classifier that answers one text at a time.
///
/// Implementations must be safe for concurrent read-only `predict` calls.
pub trait VictimOracle: Send + Sync {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError>;
}

impl<T: VictimOracle + ?Sized> VictimOracle for &T {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError> {
        (**self).predict(text)
    }
}

impl<T: VictimOracle + ?Sized> VictimOracle for Arc<T> {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError> {
        (**self).predict(text)
    }
}

impl<T: VictimOracle + ?Sized> VictimOracle for Box<T> {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError> {
        (**self).predict(text)
    }
}

/// Monotone query counter, incremented by exactly 1 per oracle call routed
/// through a [`Metered`] wrapper.
#[derive(Debug, Default)]
pub struct QueryLedger {
    count: AtomicU64,
}

impl QueryLedger {
    pub fn new() -> Arc<Self> {
        Arc::new(QueryLedger::default())
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::SeqCst)
    }

    fn record(&self) {
        self.count.fetch_add(1, Ordering::SeqCst);
    }
}

/// Oracle wrapper that meters every `predict` call against a ledger.
pub struct Metered<O> {
    inner: O,
    ledger: Arc<QueryLedger>,
}

/// Route all `predict` calls of `oracle` through `ledger`.
pub fn with_ledger<O: VictimOracle>(oracle: O, ledger: Arc<QueryLedger>) -> Metered<O> {
    Metered {
        inner: oracle,
        ledger,
    }
}

impl<O: VictimOracle> VictimOracle for Metered<O> {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError> {
        self.ledger.record();
        self.inner.predict(text)
    }
}

/// Oracle adapter that withholds confidence scores, leaving only the label.
pub struct DecisionOnly<O> {
    inner: O,
}

/// Restrict `oracle` to the decision-based black-box contract.
pub fn decision_only<O: VictimOracle>(oracle: O) -> DecisionOnly<O> {
    DecisionOnly { inner: oracle }
}

impl<O: VictimOracle> VictimOracle for DecisionOnly<O> {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError> {
        let prediction = self.inner.predict(text)?;
        Ok(Prediction::label_only(prediction.label))
    }
}

/// Errors from training or querying victims.
#[derive(Debug, Error)]
pub enum VictimError {
    #[error("training data is empty")]
    EmptyTrainingData,
    #[error("training data contains a single class; need at least 2")]
    SingleClass,
    #[error("invalid confidence vector: {0}")]
    InvalidConfidence(String),
    #[error("oracle does not expose confidence scores")]
    ConfidenceUnavailable,
    #[error("remote victim transport failure: {0}")]
    Transport(String),
    #[error("remote victim timed out after {0:?}")]
    Timeout(Duration),
    #[error("remote victim returned HTTP status {0}")]
    Status(u16),
    #[error("remote victim protocol violation: {0}")]
    Protocol(String),
    #[error("model file {path}: {reason}")]
    ModelFile { path: String, reason: String },
}

#[cfg(test)]
mod tests;
