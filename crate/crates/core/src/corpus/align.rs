use super::{Edit, EditScript, TokenizedText};

/// Align two tokenized texts into a minimum-cost token edit script.
///
/// Both texts must have been tokenized with identical settings.
pub fn align_pair(original: &TokenizedText, perturbed: &TokenizedText) -> EditScript {
    align_tokens(&original.tokens, &perturbed.tokens)
}

/// Minimum-cost edit script under unit costs for substitute/insert/delete.
///
/// Among minimal scripts, substitutions are preferred over insert+delete
/// pairs, and edits are pushed as far left as possible; the result is fully
/// deterministic.
pub fn align_tokens(a: &[String], b: &[String]) -> EditScript {
    let m = a.len();
    let n = b.len();
    let mut dp = vec![vec![0usize; n + 1]; m + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=n {
        dp[0][j] = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let sub_cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            dp[i][j] = (dp[i - 1][j - 1] + sub_cost)
                .min(dp[i - 1][j] + 1)
                .min(dp[i][j - 1] + 1);
        }
    }

    // Traceback preference: match, then substitute, then delete, then insert.
    // Matching whenever tokens agree keeps edits leftmost; taking the diagonal
    // on cost ties realizes the substitution-over-insert+delete rule.
    let mut edits = Vec::with_capacity(dp[m][n]);
    let mut i = m;
    let mut j = n;
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && a[i - 1] == b[j - 1] && dp[i][j] == dp[i - 1][j - 1] {
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + 1 {
            edits.push(Edit::Substitute {
                index: i - 1,
                original: a[i - 1].clone(),
                replacement: b[j - 1].clone(),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && dp[i][j] == dp[i - 1][j] + 1 {
            edits.push(Edit::Delete {
                index: i - 1,
                original: a[i - 1].clone(),
            });
            i -= 1;
        } else {
            edits.push(Edit::Insert {
                index: i,
                token: b[j - 1].clone(),
            });
            j -= 1;
        }
    }
    edits.reverse();
    EditScript { edits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn single_substitution() {
        let script = align_tokens(&toks(&["good", "movie"]), &toks(&["g00d", "movie"]));
        assert_eq!(
            script.edits,
            vec![Edit::Substitute {
                index: 0,
                original: "good".into(),
                replacement: "g00d".into(),
            }]
        );
    }

    #[test]
    fn identical_sequences_have_empty_script() {
        let script = align_tokens(&toks(&["a", "b"]), &toks(&["a", "b"]));
        assert!(script.is_empty());
    }

    #[test]
    fn single_deletion() {
        let script = align_tokens(&toks(&["a", "b", "c"]), &toks(&["a", "c"]));
        assert_eq!(
            script.edits,
            vec![Edit::Delete {
                index: 1,
                original: "b".into(),
            }]
        );
    }

    #[test]
    fn delete_prefers_leftmost_duplicate() {
        let script = align_tokens(&toks(&["a", "a"]), &toks(&["a"]));
        assert_eq!(
            script.edits,
            vec![Edit::Delete {
                index: 0,
                original: "a".into(),
            }]
        );
    }

    #[test]
    fn swap_is_realized_as_two_substitutions() {
        let script = align_tokens(&toks(&["a", "b"]), &toks(&["b", "a"]));
        assert_eq!(script.len(), 2);
        assert_eq!(script.substitutions().count(), 2);
    }

    #[test]
    fn apply_reproduces_perturbed_tokens() {
        let a = toks(&["the", "cast", "was", "great"]);
        let b = toks(&["the", "whole", "cast", "was", "gr8"]);
        let script = align_tokens(&a, &b);
        assert_eq!(script.apply(&a), b);
    }

    #[test]
    fn align_pair_uses_token_sequences() {
        let orig = tokenize("good movie", true);
        let pert = tokenize("g00d movie", true);
        let script = align_pair(&orig, &pert);
        assert_eq!(script.len(), 1);
        assert_eq!(script.apply(&orig.tokens), pert.tokens);
    }
}
