use super::*;
use proptest::prelude::*;

#[test]
fn kitten_sitting_distance_is_three() {
    assert_eq!(char_distance("kitten", "sitting"), 3);
}

#[test]
fn identical_sequences_have_zero_distance() {
    assert_eq!(char_distance("same", "same"), 0);
}

#[test]
fn empty_against_abc_is_three() {
    assert_eq!(char_distance("", "abc"), 3);
}

#[test]
fn token_distance_counts_token_edits() {
    assert_eq!(token_distance("good movie tonight", "g00d movie tonight"), 1);
    assert_eq!(token_distance("a b c", "a c"), 1);
}

#[test]
fn similarity_of_identical_texts_is_one() {
    assert!((similarity("nice plot twist", "nice plot twist").unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn similarity_of_disjoint_texts_is_zero() {
    assert_eq!(similarity("alpha beta", "gamma delta").unwrap(), 0.0);
}

#[test]
fn similarity_half_overlap_is_half() {
    assert!((similarity("a b", "a c").unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn similarity_rejects_empty_text() {
    assert!(matches!(similarity("", "a"), Err(MetricsError::EmptyText)));
    assert!(matches!(similarity("a", "   "), Err(MetricsError::EmptyText)));
}

fn small_string() -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(vec!['a', 'b', 'c']), 0..=4)
        .prop_map(|chars| chars.into_iter().collect())
}

proptest! {
    #[test]
    fn levenshtein_metric_axioms(a in small_string(), b in small_string(), c in small_string()) {
        let ab = char_distance(&a, &b);
        let ba = char_distance(&b, &a);
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(char_distance(&a, &a), 0);
        if a != b {
            prop_assert!(ab > 0);
        }
        let ac = char_distance(&a, &c);
        let cb = char_distance(&c, &b);
        prop_assert!(ab <= ac + cb);
    }

    #[test]
    fn similarity_is_symmetric_and_bounded(a in "[ab c]{1,12}", b in "[ab c]{1,12}") {
        prop_assume!(!tokenize_empty(&a) && !tokenize_empty(&b));
        let ab = similarity(&a, &b).unwrap();
        let ba = similarity(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
    }
}

fn tokenize_empty(text: &str) -> bool {
    crate::corpus::tokenize(text, false).tokens.is_empty()
}

#[test]
fn similarity_is_one_iff_count_vectors_parallel() {
    // Same multiset, different order: parallel count vectors.
    assert!((similarity("a b b", "b a b").unwrap() - 1.0).abs() < 1e-12);
    // Doubled counts are still parallel.
    assert!((similarity("a b", "a a b b").unwrap() - 1.0).abs() < 1e-12);
    // Different support is not.
    assert!(similarity("a b", "a c").unwrap() < 1.0);
}
