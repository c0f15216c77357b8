use super::*;
use crate::corpus::LabeledExample;

fn example(text: &str, label: usize) -> LabeledExample {
    LabeledExample {
        text: text.into(),
        label,
        task_id: "t".into(),
        dataset_id: "d".into(),
    }
}

/// 200 examples that are linearly separable on the word "refund".
fn refund_dataset() -> Vec<LabeledExample> {
    let fillers = ["please review my order", "the parcel arrived today", "thanks for the quick reply", "what is the status here"];
    let mut out = Vec::new();
    for i in 0..200 {
        let filler = fillers[i % fillers.len()];
        if i % 2 == 0 {
            out.push(example(&format!("{filler} number {i}"), 0));
        } else {
            out.push(example(&format!("{filler} refund number {i}"), 1));
        }
    }
    out
}

fn small_config(seed: u64) -> BowTrainConfig {
    BowTrainConfig {
        hash_size: 1 << 12,
        epochs: 3,
        learning_rate: 0.5,
        seed,
    }
}

#[test]
fn trainer_separates_trigger_word() {
    let data = refund_dataset();
    let model = train_bow_classifier(&data, &small_config(1)).unwrap();
    assert!(model.accuracy(&data) >= 0.95);
}

#[test]
fn trainer_rejects_empty_data() {
    let err = train_bow_classifier(&[], &small_config(0)).unwrap_err();
    assert!(matches!(err, VictimError::EmptyTrainingData));
}

#[test]
fn trainer_rejects_single_class_data() {
    let data = vec![example("a", 0), example("b", 0)];
    let err = train_bow_classifier(&data, &small_config(0)).unwrap_err();
    assert!(matches!(err, VictimError::SingleClass));
}

#[test]
fn training_is_deterministic_for_a_seed() {
    let data = refund_dataset();
    let a = train_bow_classifier(&data, &small_config(7)).unwrap();
    let b = train_bow_classifier(&data, &small_config(7)).unwrap();
    assert_eq!(a, b, "same data + same seed must give bit-identical weights");
}

#[test]
fn prediction_argmax_and_confidence_mode() {
    let p = Prediction::from_confidence(vec![0.7, 0.3]).unwrap();
    assert_eq!(p.label, 0);
    let data = refund_dataset();
    let model = train_bow_classifier(&data, &small_config(1)).unwrap();
    let decision = model.clone().into_oracle();
    let confidence = model.into_confidence_oracle();
    assert!(decision.predict("please refund me").unwrap().confidence.is_none());
    let with_conf = confidence.predict("please refund me").unwrap();
    let probs = with_conf.confidence.expect("confidence mode exposes probabilities");
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn invalid_confidence_vectors_are_rejected() {
    assert!(Prediction::from_confidence(vec![0.9, 0.3]).is_err());
    assert!(Prediction::from_confidence(vec![1.2, -0.2]).is_err());
    assert!(Prediction::from_confidence(vec![]).is_err());
}

#[test]
fn ledger_counts_metered_calls_exactly() {
    let data = refund_dataset();
    let model = train_bow_classifier(&data, &small_config(1)).unwrap();
    let oracle = model.into_oracle();
    let ledger = QueryLedger::new();
    let metered = with_ledger(&oracle, ledger.clone());
    assert_eq!(ledger.count(), 0);
    for _ in 0..5 {
        metered.predict("anything at all").unwrap();
    }
    assert_eq!(ledger.count(), 5);
}

#[test]
fn independent_ledgers_count_independently() {
    let data = refund_dataset();
    let model = train_bow_classifier(&data, &small_config(1)).unwrap();
    let oracle = model.into_oracle();
    let first = QueryLedger::new();
    let second = QueryLedger::new();
    let metered_a = with_ledger(&oracle, first.clone());
    let metered_b = with_ledger(&oracle, second.clone());
    metered_a.predict("x").unwrap();
    metered_a.predict("y").unwrap();
    metered_b.predict("z").unwrap();
    assert_eq!(first.count(), 2);
    assert_eq!(second.count(), 1);
}

#[test]
fn decision_only_strips_confidence() {
    let data = refund_dataset();
    let model = train_bow_classifier(&data, &small_config(1)).unwrap();
    let oracle = decision_only(model.into_confidence_oracle());
    assert!(oracle.predict("refund now").unwrap().confidence.is_none());
}

#[test]
fn masking_reserved_bucket_is_inert() {
    let data = refund_dataset();
    let model = train_bow_classifier(&data, &small_config(1)).unwrap();
    let plain = model.predict_probs("the parcel arrived today");
    let masked = model.predict_probs(&format!("the parcel arrived today {MASK_TOKEN}"));
    // Appending the sentinel only adds reserved-bucket features, which carry
    // zero weight; class probabilities must be unchanged.
    for (a, b) in plain.iter().zip(&masked) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn model_save_load_round_trip() {
    let data = refund_dataset();
    let model = train_bow_classifier(&data, &small_config(3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("victim.json");
    model.save(&path).unwrap();
    let back = BowClassifier::load(&path).unwrap();
    assert_eq!(model, back);
}
