use super::{Provenance, RuleBank, RuleLevel, SubstitutionRule, SynonymLexicon};
use crate::corpus::{align_pair, tokenize, AdversarialPair, Edit};
use crate::metrics::levenshtein;
use crate::victim::VictimOracle;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Result of a rule-extraction run: the bank plus per-run diagnostics.
#[derive(Debug)]
pub struct ExtractOutcome {
    pub bank: RuleBank,
    pub diagnostics: ExtractDiagnostics,
}

/// Counters for everything the extraction loop saw but did not turn into a
/// rule, plus the pairs it had to skip.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ExtractDiagnostics {
    pub pairs_total: usize,
    /// Pairs whose perturbed text fooled the victim and contributed edits.
    pub pairs_contributing: usize,
    /// Pairs rejected by the misclassification guard.
    pub pairs_unsuccessful: usize,
    pub skipped: Vec<SkippedPair>,
    pub word_occurrences: u64,
    pub char_occurrences: u64,
    /// Substitutions that passed neither the synonym filter nor the
    /// character-edit bound.
    pub discarded_substitutions: u64,
    /// Insertions and deletions never form rules; they are only counted.
    pub insert_edits: u64,
    pub delete_edits: u64,
}

/// A pair the extraction loop could not evaluate, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedPair {
    pub index: usize,
    pub reason: String,
}

impl ExtractDiagnostics {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("counter,value\n");
        let rows: [(&str, u64); 9] = [
            ("pairs_total", self.pairs_total as u64),
            ("pairs_contributing", self.pairs_contributing as u64),
            ("pairs_unsuccessful", self.pairs_unsuccessful as u64),
            ("pairs_skipped", self.skipped.len() as u64),
            ("word_occurrences", self.word_occurrences),
            ("char_occurrences", self.char_occurrences),
            ("discarded_substitutions", self.discarded_substitutions),
            ("insert_edits", self.insert_edits),
            ("delete_edits", self.delete_edits),
        ];
        for (name, value) in rows {
            out.push_str(&format!("{name},{value}\n"));
        }
        out
    }
}

/// Accumulates occurrence counts and confidence-drop sums, then finalizes
/// each rule's salience as the mean drop.
struct BankBuilder {
    lexicon_id: String,
    entries: BTreeMap<(String, String, RuleLevel), (u64, f64, std::collections::BTreeSet<Provenance>)>,
}

impl BankBuilder {
    fn new(lexicon_id: &str) -> Self {
        BankBuilder {
            lexicon_id: lexicon_id.to_string(),
            entries: BTreeMap::new(),
        }
    }

    fn add_occurrence(&mut self, source: &str, target: &str, level: RuleLevel, delta: f64, provenance: Provenance) {
        let entry = self
            .entries
            .entry((source.to_string(), target.to_string(), level))
            .or_insert_with(|| (0, 0.0, Default::default()));
        entry.0 += 1;
        entry.1 += delta;
        entry.2.insert(provenance);
    }

    fn finish(self) -> RuleBank {
        let mut bank = RuleBank::new(&self.lexicon_id);
        for ((source, target, level), (count, delta_sum, provenance)) in self.entries {
            bank.insert_rule(SubstitutionRule {
                source,
                target,
                level,
                count,
                salience: delta_sum / count as f64,
                provenance,
            });
        }
        bank
    }
}

/// Mine substitution rules from a pair corpus.
///
/// A pair contributes only when its perturbed text is misclassified: with
/// stored confidences the stored success flag is the guard and no oracle is
/// queried; otherwise the task's confidence-mode oracle decides. For every
/// aligned substitution `(w -> ŵ)` of a contributing pair, the rule is
/// word-level when the synonym filter passes, char-level when the character
/// edit distance is at most `char_edit_max`, and discarded otherwise. Each
/// occurrence adds the pair's confidence drop for the true class to the
/// rule; the final salience is the mean drop.
///
/// Pairs that carry neither stored confidences nor a usable oracle are
/// skipped and reported in the diagnostics.
pub fn extract_rules<I>(
    pairs: I,
    oracles: &BTreeMap<String, Arc<dyn VictimOracle>>,
    lexicon: &SynonymLexicon,
    char_edit_max: usize,
) -> ExtractOutcome
where
    I: IntoIterator<Item = AdversarialPair>,
{
    let mut builder = BankBuilder::new(lexicon.id());
    let mut diagnostics = ExtractDiagnostics::default();

    for (index, pair) in pairs.into_iter().enumerate() {
        diagnostics.pairs_total += 1;
        let judged = match judge_pair(&pair, oracles) {
            Ok(judged) => judged,
            Err(reason) => {
                diagnostics.skipped.push(SkippedPair { index, reason });
                continue;
            }
        };
        let Some(delta) = judged else {
            diagnostics.pairs_unsuccessful += 1;
            continue;
        };
        diagnostics.pairs_contributing += 1;

        let original = tokenize(&pair.original.text, true);
        let perturbed = tokenize(&pair.perturbed, true);
        let script = align_pair(&original, &perturbed);
        let provenance = Provenance {
            task: pair.original.task_id.clone(),
            dataset: pair.original.dataset_id.clone(),
            attack: pair.attack_method.clone(),
        };
        for edit in &script.edits {
            match edit {
                Edit::Substitute {
                    original: source,
                    replacement: target,
                    ..
                } => {
                    debug_assert_ne!(source, target);
                    if lexicon.filter_passes(source, target) {
                        diagnostics.word_occurrences += 1;
                        builder.add_occurrence(source, target, RuleLevel::Word, delta, provenance.clone());
                    } else if char_edit_distance(source, target) <= char_edit_max {
                        diagnostics.char_occurrences += 1;
                        builder.add_occurrence(source, target, RuleLevel::Char, delta, provenance.clone());
                    } else {
                        diagnostics.discarded_substitutions += 1;
                    }
                }
                Edit::Insert { .. } => diagnostics.insert_edits += 1,
                Edit::Delete { .. } => diagnostics.delete_edits += 1,
            }
        }
    }

    ExtractOutcome {
        bank: builder.finish(),
        diagnostics,
    }
}

fn char_edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein(&a, &b)
}

/// Decide whether a pair contributes, and with which confidence drop.
///
/// `Ok(Some(delta))` means the perturbed text fools the victim and `delta`
/// is `conf(y|x) - conf(y|x_adv)`. `Ok(None)` means the pair is rejected by
/// the guard. `Err` carries the skip reason.
fn judge_pair(
    pair: &AdversarialPair,
    oracles: &BTreeMap<String, Arc<dyn VictimOracle>>,
) -> Result<Option<f64>, String> {
    let y = pair.original.label;
    if let (Some(orig_conf), Some(adv_conf)) = (pair.orig_conf, pair.adv_conf) {
        // Stored-confidence fast path: the success flag is the guard and no
        // oracle query is made.
        if !pair.success {
            return Ok(None);
        }
        return Ok(Some(orig_conf - adv_conf));
    }
    let Some(oracle) = oracles.get(&pair.original.task_id) else {
        return Err(format!(
            "no oracle for task `{}` and no stored confidences",
            pair.original.task_id
        ));
    };
    let adv = oracle
        .predict(&pair.perturbed)
        .map_err(|e| format!("oracle failure on perturbed text: {e}"))?;
    let Some(adv_conf) = adv.confidence_for(y) else {
        return Err("oracle does not expose confidence scores".to_string());
    };
    if adv.label == y {
        return Ok(None);
    }
    let orig = oracle
        .predict(&pair.original.text)
        .map_err(|e| format!("oracle failure on original text: {e}"))?;
    let Some(orig_conf) = orig.confidence_for(y) else {
        return Err("oracle does not expose confidence scores".to_string());
    };
    Ok(Some(orig_conf - adv_conf))
}
