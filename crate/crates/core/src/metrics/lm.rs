use super::MetricsError;
use std::collections::{BTreeSet, HashMap};

/// Padding character prepended `order - 1` times before each text.
const BOS: char = '\u{2402}';

/// Character n-gram language model with add-one smoothing.
///
/// The alphabet is the set of characters seen as prediction targets during
/// training; any other character scores as a single unknown-character class,
/// so the next-character probabilities sum to 1 per context.
#[derive(Debug, Clone)]
pub struct CharNGramLm {
    order: usize,
    corpus_id: String,
    alphabet: BTreeSet<char>,
    counts: HashMap<String, HashMap<char, u64>>,
    context_totals: HashMap<String, u64>,
}

impl CharNGramLm {
    /// Train on a corpus of texts. `order` is the n-gram length (default 5
    /// in the CLI); contexts are the preceding `order - 1` characters.
    pub fn train<'a, I>(corpus: I, order: usize, corpus_id: &str) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        assert!(order >= 2, "n-gram order must be at least 2");
        let mut lm = CharNGramLm {
            order,
            corpus_id: corpus_id.to_string(),
            alphabet: BTreeSet::new(),
            counts: HashMap::new(),
            context_totals: HashMap::new(),
        };
        for text in corpus {
            for (context, next) in lm.ngrams(text) {
                lm.alphabet.insert(next);
                *lm
                    .counts
                    .entry(context.clone())
                    .or_default()
                    .entry(next)
                    .or_insert(0) += 1;
                *lm.context_totals.entry(context).or_insert(0) += 1;
            }
        }
        lm
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    fn ngrams(&self, text: &str) -> Vec<(String, char)> {
        let mut padded: Vec<char> = std::iter::repeat(BOS).take(self.order - 1).collect();
        padded.extend(text.chars());
        let mut out = Vec::new();
        for i in (self.order - 1)..padded.len() {
            let context: String = padded[i + 1 - self.order..i].iter().collect();
            out.push((context, padded[i]));
        }
        out
    }

    /// Add-one-smoothed probability of `next` given `context`. Characters
    /// outside the training alphabet share one unknown class.
    fn probability(&self, context: &str, next: char) -> f64 {
        let v = (self.alphabet.len() + 1) as f64;
        let total = self.context_totals.get(context).copied().unwrap_or(0) as f64;
        let count = if self.alphabet.contains(&next) {
            self.counts
                .get(context)
                .and_then(|m| m.get(&next))
                .copied()
                .unwrap_or(0) as f64
        } else {
            0.0
        };
        (count + 1.0) / (total + v)
    }

    /// Perplexity: exponentiated mean negative log-probability per character.
    pub fn perplexity(&self, text: &str) -> Result<f64, MetricsError> {
        if text.is_empty() {
            return Err(MetricsError::EmptyText);
        }
        let grams = self.ngrams(text);
        let nll: f64 = grams
            .iter()
            .map(|(context, next)| -self.probability(context, *next).ln())
            .sum();
        Ok((nll / grams.len() as f64).exp())
    }
}

/// Relative perplexity increase of the perturbed text over the original:
/// `(PPL(perturbed) - PPL(original)) / PPL(original)`.
pub fn ppl_increase(
    lm: &CharNGramLm,
    original: &str,
    perturbed: &str,
) -> Result<f64, MetricsError> {
    let base = lm.perplexity(original)?;
    let after = lm.perplexity(perturbed)?;
    Ok((after - base) / base)
}
