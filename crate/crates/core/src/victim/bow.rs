use super::{argmax, Prediction, VictimError, VictimOracle};
use crate::corpus::{tokenize, LabeledExample};
use fnv::FnvHasher;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::hash::Hasher;
use std::path::Path;
use std::sync::Arc;

/// Sentinel used when masking a token out of a sentence. It is routed to a
/// reserved feature bucket the trainer never updates, so a masked position
/// contributes nothing to the logits.
pub const MASK_TOKEN: &str = "xxmaskxx";

const MODEL_VERSION: u32 = 1;

/// Training configuration for the built-in classifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BowTrainConfig {
    /// Number of feature-hash buckets (bucket 0 is reserved for the mask
    /// sentinel).
    pub hash_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for BowTrainConfig {
    fn default() -> Self {
        BowTrainConfig {
            hash_size: 1 << 18,
            epochs: 5,
            learning_rate: 0.1,
            seed: 0,
        }
    }
}

/// Multinomial logistic regression over hashed unigram+bigram counts.
#[derive(Debug, Clone, PartialEq)]
pub struct BowClassifier {
    hash_size: usize,
    num_classes: usize,
    /// Flat `hash_size x num_classes`, indexed `bucket * num_classes + class`.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

fn fnv64(bytes: &[u8]) -> u64 {
    let mut hasher = FnvHasher::default();
    hasher.write(bytes);
    hasher.finish()
}

impl BowClassifier {
    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn hash_size(&self) -> usize {
        self.hash_size
    }

    fn bucket(&self, key: &str, contains_mask: bool) -> usize {
        if contains_mask {
            0
        } else {
            1 + (fnv64(key.as_bytes()) as usize) % (self.hash_size - 1)
        }
    }

    /// Hashed unigram+bigram counts for a text, as `bucket -> count`.
    fn features(&self, text: &str) -> BTreeMap<usize, f64> {
        let tokens = tokenize(text, true).tokens;
        let mut counts = BTreeMap::new();
        for token in &tokens {
            let bucket = self.bucket(token, token == MASK_TOKEN);
            *counts.entry(bucket).or_insert(0.0) += 1.0;
        }
        for pair in tokens.windows(2) {
            let masked = pair[0] == MASK_TOKEN || pair[1] == MASK_TOKEN;
            let key = format!("{}\u{1f}{}", pair[0], pair[1]);
            let bucket = self.bucket(&key, masked);
            *counts.entry(bucket).or_insert(0.0) += 1.0;
        }
        counts
    }

    fn logits(&self, features: &BTreeMap<usize, f64>) -> Vec<f64> {
        let mut logits = self.bias.clone();
        for (&bucket, &count) in features {
            let base = bucket * self.num_classes;
            for (c, logit) in logits.iter_mut().enumerate() {
                *logit += self.weights[base + c] * count;
            }
        }
        logits
    }

    /// Per-class probabilities for a text.
    pub fn predict_probs(&self, text: &str) -> Vec<f64> {
        softmax(&self.logits(&self.features(text)))
    }

    /// Predicted label (argmax of the probabilities).
    pub fn predict_label(&self, text: &str) -> usize {
        argmax(&self.predict_probs(text))
    }

    /// Fraction of examples whose predicted label matches.
    pub fn accuracy(&self, examples: &[LabeledExample]) -> f64 {
        if examples.is_empty() {
            return 0.0;
        }
        let correct = examples
            .iter()
            .filter(|e| self.predict_label(&e.text) == e.label)
            .count();
        correct as f64 / examples.len() as f64
    }

    /// Wrap the model as a decision-only oracle.
    pub fn into_oracle(self) -> BowOracle {
        BowOracle {
            model: Arc::new(self),
            expose_confidence: false,
        }
    }

    /// Wrap the model as a confidence-mode oracle.
    pub fn into_confidence_oracle(self) -> BowOracle {
        BowOracle {
            model: Arc::new(self),
            expose_confidence: true,
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), VictimError> {
        let sparse: Vec<(usize, f64)> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, w)| (i, *w))
            .collect();
        let file = ModelFile {
            version: MODEL_VERSION,
            hash_size: self.hash_size,
            num_classes: self.num_classes,
            bias: self.bias.clone(),
            weights: sparse,
        };
        let json = serde_json::to_string(&file).map_err(|e| model_err(path, e.to_string()))?;
        std::fs::write(path, json).map_err(|e| model_err(path, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, VictimError> {
        let text = std::fs::read_to_string(path).map_err(|e| model_err(path, e.to_string()))?;
        let file: ModelFile =
            serde_json::from_str(&text).map_err(|e| model_err(path, e.to_string()))?;
        if file.version != MODEL_VERSION {
            return Err(model_err(
                path,
                format!("unsupported model version {}", file.version),
            ));
        }
        let mut weights = vec![0.0; file.hash_size * file.num_classes];
        for (index, value) in file.weights {
            if index >= weights.len() {
                return Err(model_err(path, format!("weight index {index} out of range")));
            }
            weights[index] = value;
        }
        Ok(BowClassifier {
            hash_size: file.hash_size,
            num_classes: file.num_classes,
            weights,
            bias: file.bias,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    hash_size: usize,
    num_classes: usize,
    bias: Vec<f64>,
    weights: Vec<(usize, f64)>,
}

fn model_err(path: &Path, reason: String) -> VictimError {
    VictimError::ModelFile {
        path: path.display().to_string(),
        reason,
    }
}

/// Built-in oracle over a trained [`BowClassifier`].
#[derive(Clone)]
pub struct BowOracle {
    model: Arc<BowClassifier>,
    expose_confidence: bool,
}

impl BowOracle {
    pub fn model(&self) -> &BowClassifier {
        &self.model
    }
}

impl VictimOracle for BowOracle {
    fn predict(&self, text: &str) -> Result<Prediction, VictimError> {
        let probs = self.model.predict_probs(text);
        let label = argmax(&probs);
        Ok(Prediction {
            label,
            confidence: self.expose_confidence.then_some(probs),
        })
    }
}

/// Train the built-in classifier with per-example gradient steps.
///
/// Deterministic for a given config: example order is shuffled by a seeded
/// generator and all arithmetic is sequential.
pub fn train_bow_classifier(
    examples: &[LabeledExample],
    config: &BowTrainConfig,
) -> Result<BowClassifier, VictimError> {
    if examples.is_empty() {
        return Err(VictimError::EmptyTrainingData);
    }
    let num_classes = examples.iter().map(|e| e.label).max().unwrap() + 1;
    let first = examples[0].label;
    if num_classes < 2 || examples.iter().all(|e| e.label == first) {
        return Err(VictimError::SingleClass);
    }
    assert!(config.hash_size >= 2, "hash_size must leave room for the mask bucket");

    let mut model = BowClassifier {
        hash_size: config.hash_size,
        num_classes,
        weights: vec![0.0; config.hash_size * num_classes],
        bias: vec![0.0; num_classes],
    };
    let features: Vec<BTreeMap<usize, f64>> = examples
        .iter()
        .map(|e| model.features(&e.text))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &idx in &order {
            let feats = &features[idx];
            let probs = softmax(&model.logits(feats));
            let y = examples[idx].label;
            for c in 0..num_classes {
                let grad = probs[c] - if c == y { 1.0 } else { 0.0 };
                model.bias[c] -= config.learning_rate * grad;
                for (&bucket, &count) in feats {
                    model.weights[bucket * num_classes + c] -=
                        config.learning_rate * grad * count;
                }
            }
        }
    }
    Ok(model)
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}
