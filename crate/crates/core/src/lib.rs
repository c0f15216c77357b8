//! Mining, generation, and evaluation of adversarial text substitutions.
//!
//! The crate is organized around a pipeline over corpora of
//! (original, perturbed) sentence pairs:
//!
//! * [`corpus`] — deterministic tokenization, pair ingestion (JSONL/CSV),
//!   and token-level edit-script alignment.
//! * [`victim`] — the classifier-under-attack behind a uniform
//!   [`victim::VictimOracle`] interface with per-call query metering, a
//!   trainable hashed bag-of-words classifier, and a remote HTTP client.
//! * [`rules`] — extraction of word- and character-level substitution
//!   rules with occurrence counts and salience from successful pairs,
//!   cross-corpus bank merging, and preference statistics.
//! * [`vulnerability`] — per-word vulnerability scoring by masking and
//!   the overlap statistics built on top of it.
//! * [`generator`] — a feedback-free adversarial candidate generator
//!   fitted by maximum likelihood over observed substitutions, with
//!   temperature-controlled sampling.
//! * [`attack`] — decision-based black-box attack loops (candidate-batch
//!   and greedy rule-based) under strict query budgets.
//! * [`metrics`] — edit distance, a character n-gram language model for
//!   perplexity deltas, token-cosine similarity, and report tables.
//! * [`defense`] — preprocessing defense by inverting learned
//!   perturbations before classification.
//! * [`synth`] — synthetic multi-task corpora for demos and end-to-end
//!   tests.

pub mod attack;
pub mod corpus;
pub mod defense;
pub mod generator;
pub mod metrics;
pub mod rules;
pub mod seeding;
pub mod synth;
pub mod victim;
pub mod vulnerability;

pub use attack::{AttackConfig, AttackResult, AttackStrategy, EvalReport};
pub use corpus::{AdversarialPair, Edit, EditScript, LabeledExample, TokenizedText};
pub use defense::{Cleaner, TieBreak};
pub use generator::{CandidateGenerator, GenerateParams, GeneratorDirection, GeneratorModel};
pub use metrics::CharNGramLm;
pub use rules::{RuleBank, RuleLevel, SubstitutionRule, SynonymLexicon};
pub use victim::{Prediction, QueryLedger, VictimOracle};
pub use vulnerability::VulnerabilityProfile;
