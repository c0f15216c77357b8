use super::*;
use proptest::prelude::*;
use std::io::Write;

// Independent reference: recursive token Levenshtein with memoization, kept
// structurally unlike the iterative table in `align`.
fn reference_distance(a: &[String], b: &[String]) -> usize {
    fn go(a: &[String], b: &[String], i: usize, j: usize, memo: &mut Vec<Vec<Option<usize>>>) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(d) = memo[i][j] {
            return d;
        }
        let d = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            let sub = go(a, b, i + 1, j + 1, memo);
            let del = go(a, b, i + 1, j, memo);
            let ins = go(a, b, i, j + 1, memo);
            1 + sub.min(del).min(ins)
        };
        memo[i][j] = Some(d);
        d
    }
    let mut memo = vec![vec![None; b.len() + 1]; a.len() + 1];
    go(a, b, 0, 0, &mut memo)
}

fn token_seq() -> impl Strategy<Value = Vec<String>> {
    proptest::collection::vec(
        proptest::sample::select(vec!["a".to_string(), "b".to_string(), "c".to_string(), "d".to_string()]),
        0..=10,
    )
}

proptest! {
    #[test]
    fn align_round_trips(a in token_seq(), b in token_seq()) {
        let script = align_tokens(&a, &b);
        prop_assert_eq!(script.apply(&a), b);
    }

    #[test]
    fn align_is_minimal(a in token_seq(), b in token_seq()) {
        let script = align_tokens(&a, &b);
        prop_assert_eq!(script.len(), reference_distance(&a, &b));
    }

    #[test]
    fn tokenize_is_idempotent_on_token_join(text in "[ -~]{0,40}") {
        let first = tokenize(&text, false);
        let joined = first.tokens.join(" ");
        let second = tokenize(&joined, false);
        prop_assert_eq!(first.tokens, second.tokens);
    }
}

#[test]
fn tokenize_is_deterministic() {
    let a = tokenize("Same input, twice!", true);
    let b = tokenize("Same input, twice!", true);
    assert_eq!(a, b);
}

fn write_temp(contents: &str, ext: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::Builder::new()
        .suffix(&format!(".{ext}"))
        .tempfile()
        .unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file
}

const GOOD_LINE: &str = r#"{"original":"good movie","label":1,"task":"sentiment","dataset":"toy","perturbed":"g00d movie","attack":"typo","model":"bow","success":true,"orig_conf":0.9,"adv_conf":0.4}"#;

#[test]
fn jsonl_records_are_read_in_order() {
    let other = GOOD_LINE.replace("g00d movie", "good film");
    let third = GOOD_LINE.replace("\"success\":true", "\"success\":false");
    let file = write_temp(&format!("{GOOD_LINE}\n{other}\n{third}\n"), "jsonl");
    let pairs = read_pairs(file.path(), PairFormat::Jsonl).unwrap();
    assert_eq!(pairs.len(), 3);
    assert_eq!(pairs[0].perturbed, "g00d movie");
    assert_eq!(pairs[1].perturbed, "good film");
    assert!(!pairs[2].success, "success=false records are retained");
    assert_eq!(pairs[0].orig_conf, Some(0.9));
}

#[test]
fn missing_field_error_names_line_and_field() {
    let bad = GOOD_LINE.replace("\"perturbed\":\"g00d movie\",", "");
    let file = write_temp(&format!("{GOOD_LINE}\n{bad}\n"), "jsonl");
    let err = read_pairs(file.path(), PairFormat::Jsonl).unwrap_err();
    match err {
        CorpusError::Field { line, field, .. } => {
            assert_eq!(line, 2);
            assert_eq!(field, "perturbed");
        }
        other => panic!("unexpected error: {other:?}"),
    }
}

#[test]
fn confidence_out_of_range_is_rejected() {
    let bad = GOOD_LINE.replace("0.9", "1.5");
    let file = write_temp(&format!("{bad}\n"), "jsonl");
    let err = read_pairs(file.path(), PairFormat::Jsonl).unwrap_err();
    assert!(matches!(err, CorpusError::Field { field, .. } if field == "orig_conf"));
}

#[test]
fn csv_round_trips_with_jsonl_field_names() {
    let csv_text = "original,label,task,dataset,perturbed,attack,model,success,orig_conf,adv_conf\n\
        good movie,1,sentiment,toy,g00d movie,typo,bow,true,0.9,0.4\n\
        nice plot,0,sentiment,toy,n1ce plot,typo,bow,false,,\n";
    let file = write_temp(csv_text, "csv");
    let pairs = read_pairs(file.path(), PairFormat::Csv).unwrap();
    assert_eq!(pairs.len(), 2);
    assert_eq!(pairs[0].original.label, 1);
    assert_eq!(pairs[1].orig_conf, None);
    assert!(!pairs[1].success);
}

#[test]
fn csv_missing_column_is_a_field_error() {
    let csv_text = "original,label,task,dataset,attack,model,success\na,1,t,d,x,m,true\n";
    let file = write_temp(csv_text, "csv");
    let err = ingest_pairs(file.path(), PairFormat::Csv).err().unwrap();
    assert!(matches!(err, CorpusError::Field { field, .. } if field == "perturbed"));
}

#[test]
fn unknown_format_string_is_rejected() {
    let err = "parquet".parse::<PairFormat>().unwrap_err();
    assert!(matches!(err, CorpusError::UnknownFormat(f) if f == "parquet"));
}

#[test]
fn pairs_jsonl_write_read_round_trip() {
    let pairs = vec![AdversarialPair {
        original: LabeledExample {
            text: "good movie".into(),
            label: 1,
            task_id: "sentiment".into(),
            dataset_id: "toy".into(),
        },
        perturbed: "g00d movie".into(),
        attack_method: "typo".into(),
        victim_model_id: "bow".into(),
        success: true,
        orig_conf: Some(0.9),
        adv_conf: None,
    }];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.jsonl");
    write_pairs_jsonl(&path, &pairs).unwrap();
    let back = read_pairs(&path, PairFormat::Jsonl).unwrap();
    assert_eq!(back, pairs);
}
