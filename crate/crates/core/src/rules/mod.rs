//! Substitution-rule banks: extraction from adversarial pair corpora,
//! cross-corpus merging, preference statistics, and persistence.
//!
//! A rule `(source -> target)` records how often an attack replaced `source`
//! with `target` (`count`) and the mean drop in the victim's confidence for
//! the true class caused by the pair that contained it (`salience`).

mod analysis;
mod extract;
mod io;

pub use analysis::{export_heatmap, gini, gini_substitution_preference, Heatmap};
pub use extract::{extract_rules, ExtractDiagnostics, ExtractOutcome, SkippedPair};
pub use io::{load_bank, save_bank};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Granularity of a substitution rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleLevel {
    /// Synonym-filtered word replacement.
    Word,
    /// Small character edit (typo-style) replacement.
    Char,
}

impl std::fmt::Display for RuleLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RuleLevel::Word => write!(f, "word"),
            RuleLevel::Char => write!(f, "char"),
        }
    }
}

/// Where a rule was observed: task, dataset, and attack method.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Provenance {
    pub task: String,
    pub dataset: String,
    pub attack: String,
}

/// A learned `(source -> target)` perturbation with its statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionRule {
    pub source: String,
    pub target: String,
    pub level: RuleLevel,
    pub count: u64,
    /// Mean confidence drop for the true class, in `[-1, 1]` for
    /// probability-valued confidences.
    pub salience: f64,
    pub provenance: BTreeSet<Provenance>,
}

/// Indexed, mergeable collection of substitution rules.
///
/// At most one rule object exists per `(source, target, level)` triple;
/// inserting a duplicate folds counts together and count-weights the
/// salience. Iteration order is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBank {
    lexicon_id: String,
    rules: BTreeMap<String, BTreeMap<(String, RuleLevel), SubstitutionRule>>,
}

impl RuleBank {
    pub fn new(lexicon_id: &str) -> Self {
        RuleBank {
            lexicon_id: lexicon_id.to_string(),
            rules: BTreeMap::new(),
        }
    }

    pub fn lexicon_id(&self) -> &str {
        &self.lexicon_id
    }

    /// Number of rules in the bank.
    pub fn len(&self) -> usize {
        self.rules.values().map(|targets| targets.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// All rules whose source matches, in deterministic order.
    pub fn rules_for(&self, source: &str) -> impl Iterator<Item = &SubstitutionRule> {
        self.rules.get(source).into_iter().flat_map(|t| t.values())
    }

    pub fn get(&self, source: &str, target: &str, level: RuleLevel) -> Option<&SubstitutionRule> {
        self.rules
            .get(source)?
            .get(&(target.to_string(), level))
    }

    /// All rules, ordered by source, then target, then level.
    pub fn iter(&self) -> impl Iterator<Item = &SubstitutionRule> {
        self.rules.values().flat_map(|targets| targets.values())
    }

    /// Distinct source tokens.
    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }

    /// Insert a rule, folding it into an existing `(source, target, level)`
    /// entry if present: counts add, salience is count-weighted, provenance
    /// sets union.
    pub fn insert_rule(&mut self, rule: SubstitutionRule) {
        let key = (rule.target.clone(), rule.level);
        let targets = self.rules.entry(rule.source.clone()).or_default();
        match targets.get_mut(&key) {
            None => {
                targets.insert(key, rule);
            }
            Some(existing) => {
                let total = existing.count + rule.count;
                existing.salience = (existing.salience * existing.count as f64
                    + rule.salience * rule.count as f64)
                    / total as f64;
                existing.count = total;
                existing.provenance.extend(rule.provenance);
            }
        }
    }

    /// The bank restricted to rules of one level.
    pub fn filter_level(&self, level: RuleLevel) -> RuleBank {
        let mut out = RuleBank::new(&self.lexicon_id);
        for rule in self.iter().filter(|r| r.level == level) {
            out.insert_rule(rule.clone());
        }
        out
    }
}

/// Union banks extracted with the same lexicon: counts add per rule,
/// salience is count-weighted, provenance sets union.
pub fn merge_banks(banks: &[RuleBank]) -> Result<RuleBank, RulesError> {
    let first = banks.first().ok_or(RulesError::NoBanks)?;
    let mut merged = RuleBank::new(&first.lexicon_id);
    for bank in banks {
        if bank.lexicon_id != merged.lexicon_id {
            return Err(RulesError::LexiconMismatch {
                expected: merged.lexicon_id.clone(),
                found: bank.lexicon_id.clone(),
            });
        }
        for rule in bank.iter() {
            merged.insert_rule(rule.clone());
        }
    }
    Ok(merged)
}

/// Token-to-synonyms lookup used by the word-level rule filter. Lookup of an
/// absent token yields the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct SynonymLexicon {
    id: String,
    map: BTreeMap<String, BTreeSet<String>>,
}

static EMPTY_SET: BTreeSet<String> = BTreeSet::new();

impl SynonymLexicon {
    pub fn new<I, S>(id: &str, entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<S>)>,
        S: Into<String>,
    {
        let map = entries
            .into_iter()
            .map(|(token, synonyms)| {
                (
                    token.into(),
                    synonyms.into_iter().map(Into::into).collect(),
                )
            })
            .collect();
        SynonymLexicon {
            id: id.to_string(),
            map,
        }
    }

    /// Lexicon with no entries; every word substitution fails the filter.
    pub fn empty(id: &str) -> Self {
        SynonymLexicon {
            id: id.to_string(),
            map: BTreeMap::new(),
        }
    }

    /// Load a JSON map `token -> [synonyms]`. The lexicon id is a content
    /// hash of the file, so banks extracted from byte-identical lexicons
    /// merge and others are rejected.
    pub fn load(path: &Path) -> Result<Self, RulesError> {
        let bytes = std::fs::read(path).map_err(|e| RulesError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let map: BTreeMap<String, Vec<String>> =
            serde_json::from_slice(&bytes).map_err(|e| RulesError::Malformed {
                path: path.to_path_buf(),
                reason: e.to_string(),
            })?;
        let digest = Sha256::digest(&bytes);
        let id = format!("sha256:{:016x}", u64::from_be_bytes(digest[..8].try_into().unwrap()));
        Ok(SynonymLexicon::new(
            &id,
            map.into_iter().map(|(k, v)| (k, v)),
        ))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn synonyms(&self, token: &str) -> &BTreeSet<String> {
        self.map.get(token).unwrap_or(&EMPTY_SET)
    }

    /// The word-level rule filter:
    /// `(synonyms(target) ∪ {target}) ∩ synonyms(source)` is non-empty.
    pub fn filter_passes(&self, source: &str, target: &str) -> bool {
        let source_synonyms = self.synonyms(source);
        if source_synonyms.contains(target) {
            return true;
        }
        self.synonyms(target)
            .iter()
            .any(|s| source_synonyms.contains(s))
    }
}

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("rule bank is empty")]
    EmptyBank,
    #[error("no rule banks given")]
    NoBanks,
    #[error("lexicon mismatch: expected `{expected}`, found `{found}`")]
    LexiconMismatch { expected: String, found: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed file: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("{path}: unsupported bank version {found} (expected {expected})")]
    Version {
        path: PathBuf,
        found: u32,
        expected: u32,
    },
}

#[cfg(test)]
mod tests;
