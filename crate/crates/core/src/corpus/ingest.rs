use super::{AdversarialPair, CorpusError, LabeledExample};
use serde_json::Value;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// On-disk corpus formats. CSV uses the same column names as the JSONL
/// object keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFormat {
    Jsonl,
    Csv,
}

impl FromStr for PairFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(PairFormat::Jsonl),
            "csv" => Ok(PairFormat::Csv),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

impl PairFormat {
    /// Infer the format from a file extension (`.jsonl`/`.json` or `.csv`).
    pub fn from_path(path: &Path) -> Result<Self, CorpusError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Ok(PairFormat::Jsonl),
            Some("csv") => Ok(PairFormat::Csv),
            other => Err(CorpusError::UnknownFormat(
                other.unwrap_or("<none>").to_string(),
            )),
        }
    }
}

const PAIR_FIELDS: [&str; 8] = [
    "original", "label", "task", "dataset", "perturbed", "attack", "model", "success",
];

/// Streaming reader over an adversarial pair corpus; yields records in file
/// order.
pub struct PairReader {
    inner: ReaderInner,
}

enum ReaderInner {
    Jsonl {
        lines: Lines<BufReader<File>>,
        line_no: usize,
    },
    Csv {
        records: csv::StringRecordsIntoIter<File>,
        headers: csv::StringRecord,
    },
}

/// Open a pair corpus for streaming ingestion.
pub fn ingest_pairs(path: &Path, format: PairFormat) -> Result<PairReader, CorpusError> {
    let file = open(path)?;
    let inner = match format {
        PairFormat::Jsonl => ReaderInner::Jsonl {
            lines: BufReader::new(file).lines(),
            line_no: 0,
        },
        PairFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(file);
            let headers = reader
                .headers()
                .map_err(|e| CorpusError::MalformedLine {
                    line: 1,
                    reason: e.to_string(),
                })?
                .clone();
            for field in PAIR_FIELDS {
                if !headers.iter().any(|h| h == field) {
                    return Err(CorpusError::Field {
                        line: 1,
                        field: field.to_string(),
                        reason: "missing column".to_string(),
                    });
                }
            }
            ReaderInner::Csv {
                records: reader.into_records(),
                headers,
            }
        }
    };
    Ok(PairReader { inner })
}

/// Read a whole pair corpus into memory, failing on the first bad record.
pub fn read_pairs(path: &Path, format: PairFormat) -> Result<Vec<AdversarialPair>, CorpusError> {
    ingest_pairs(path, format)?.collect()
}

impl Iterator for PairReader {
    type Item = Result<AdversarialPair, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        match &mut self.inner {
            ReaderInner::Jsonl { lines, line_no } => loop {
                *line_no += 1;
                match lines.next()? {
                    Ok(line) => {
                        if line.trim().is_empty() {
                            continue;
                        }
                        return Some(parse_pair_json(&line, *line_no));
                    }
                    Err(e) => {
                        return Some(Err(CorpusError::MalformedLine {
                            line: *line_no,
                            reason: e.to_string(),
                        }))
                    }
                }
            },
            ReaderInner::Csv { records, headers } => {
                let record = records.next()?;
                Some(record.map_err(csv_error).and_then(|r| {
                    let line = r.position().map(|p| p.line() as usize).unwrap_or(0);
                    parse_pair_csv(&r, headers, line)
                }))
            }
        }
    }
}

fn parse_pair_json(line: &str, line_no: usize) -> Result<AdversarialPair, CorpusError> {
    let value: Value = serde_json::from_str(line).map_err(|e| CorpusError::MalformedLine {
        line: line_no,
        reason: e.to_string(),
    })?;
    let original = LabeledExample {
        text: req_str(&value, "original", line_no)?,
        label: req_label(&value, "label", line_no)?,
        task_id: req_str(&value, "task", line_no)?,
        dataset_id: req_str(&value, "dataset", line_no)?,
    };
    Ok(AdversarialPair {
        original,
        perturbed: req_str(&value, "perturbed", line_no)?,
        attack_method: req_str(&value, "attack", line_no)?,
        victim_model_id: req_str(&value, "model", line_no)?,
        success: req_bool(&value, "success", line_no)?,
        orig_conf: opt_conf(&value, "orig_conf", line_no)?,
        adv_conf: opt_conf(&value, "adv_conf", line_no)?,
    })
}

fn parse_pair_csv(
    record: &csv::StringRecord,
    headers: &csv::StringRecord,
    line: usize,
) -> Result<AdversarialPair, CorpusError> {
    let get = |field: &str| -> Option<&str> {
        headers
            .iter()
            .position(|h| h == field)
            .and_then(|i| record.get(i))
    };
    let req = |field: &str| -> Result<String, CorpusError> {
        get(field).map(str::to_string).ok_or_else(|| CorpusError::Field {
            line,
            field: field.to_string(),
            reason: "missing value".to_string(),
        })
    };
    let label_text = req("label")?;
    let label = label_text.parse::<usize>().map_err(|_| CorpusError::Field {
        line,
        field: "label".to_string(),
        reason: format!("expected non-negative integer, got `{label_text}`"),
    })?;
    let success_text = req("success")?;
    let success = match success_text.as_str() {
        "true" => true,
        "false" => false,
        other => {
            return Err(CorpusError::Field {
                line,
                field: "success".to_string(),
                reason: format!("expected true/false, got `{other}`"),
            })
        }
    };
    let conf = |field: &str| -> Result<Option<f64>, CorpusError> {
        match get(field) {
            None | Some("") => Ok(None),
            Some(text) => {
                let parsed = text.parse::<f64>().map_err(|_| CorpusError::Field {
                    line,
                    field: field.to_string(),
                    reason: format!("expected float, got `{text}`"),
                })?;
                check_conf(parsed, field, line)?;
                Ok(Some(parsed))
            }
        }
    };
    Ok(AdversarialPair {
        original: LabeledExample {
            text: req("original")?,
            label,
            task_id: req("task")?,
            dataset_id: req("dataset")?,
        },
        perturbed: req("perturbed")?,
        attack_method: req("attack")?,
        victim_model_id: req("model")?,
        success,
        orig_conf: conf("orig_conf")?,
        adv_conf: conf("adv_conf")?,
    })
}

/// Read a labeled dataset: JSONL objects (or CSV columns) `text`, `label`,
/// `task`, `dataset`.
pub fn read_examples(path: &Path, format: PairFormat) -> Result<Vec<LabeledExample>, CorpusError> {
    match format {
        PairFormat::Jsonl => {
            let file = open(path)?;
            let mut out = Vec::new();
            for (idx, line) in BufReader::new(file).lines().enumerate() {
                let line_no = idx + 1;
                let line = line.map_err(|e| CorpusError::MalformedLine {
                    line: line_no,
                    reason: e.to_string(),
                })?;
                if line.trim().is_empty() {
                    continue;
                }
                let value: Value =
                    serde_json::from_str(&line).map_err(|e| CorpusError::MalformedLine {
                        line: line_no,
                        reason: e.to_string(),
                    })?;
                out.push(LabeledExample {
                    text: req_str(&value, "text", line_no)?,
                    label: req_label(&value, "label", line_no)?,
                    task_id: req_str(&value, "task", line_no)?,
                    dataset_id: req_str(&value, "dataset", line_no)?,
                });
            }
            Ok(out)
        }
        PairFormat::Csv => {
            let file = open(path)?;
            let mut reader = csv::Reader::from_reader(file);
            let headers = reader
                .headers()
                .map_err(|e| CorpusError::MalformedLine {
                    line: 1,
                    reason: e.to_string(),
                })?
                .clone();
            let mut out = Vec::new();
            for record in reader.into_records() {
                let record = record.map_err(csv_error)?;
                let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
                let get = |field: &str| -> Result<String, CorpusError> {
                    headers
                        .iter()
                        .position(|h| h == field)
                        .and_then(|i| record.get(i))
                        .map(str::to_string)
                        .ok_or_else(|| CorpusError::Field {
                            line,
                            field: field.to_string(),
                            reason: "missing value".to_string(),
                        })
                };
                let label_text = get("label")?;
                let label = label_text.parse::<usize>().map_err(|_| CorpusError::Field {
                    line,
                    field: "label".to_string(),
                    reason: format!("expected non-negative integer, got `{label_text}`"),
                })?;
                out.push(LabeledExample {
                    text: get("text")?,
                    label,
                    task_id: get("task")?,
                    dataset_id: get("dataset")?,
                });
            }
            Ok(out)
        }
    }
}

/// Write a pair corpus as JSONL, one object per line, in the ingest schema.
pub fn write_pairs_jsonl(path: &Path, pairs: &[AdversarialPair]) -> Result<(), CorpusError> {
    let file = create(path)?;
    let mut writer = BufWriter::new(file);
    for pair in pairs {
        let mut object = serde_json::Map::new();
        object.insert("original".into(), pair.original.text.clone().into());
        object.insert("label".into(), pair.original.label.into());
        object.insert("task".into(), pair.original.task_id.clone().into());
        object.insert("dataset".into(), pair.original.dataset_id.clone().into());
        object.insert("perturbed".into(), pair.perturbed.clone().into());
        object.insert("attack".into(), pair.attack_method.clone().into());
        object.insert("model".into(), pair.victim_model_id.clone().into());
        object.insert("success".into(), pair.success.into());
        if let Some(c) = pair.orig_conf {
            object.insert("orig_conf".into(), c.into());
        }
        if let Some(c) = pair.adv_conf {
            object.insert("adv_conf".into(), c.into());
        }
        write_line(&mut writer, &Value::Object(object), path)?;
    }
    writer.flush().map_err(|e| io_err(path, e))
}

/// Write a labeled dataset as JSONL in the `read_examples` schema.
pub fn write_examples_jsonl(path: &Path, examples: &[LabeledExample]) -> Result<(), CorpusError> {
    let file = create(path)?;
    let mut writer = BufWriter::new(file);
    for example in examples {
        let value = serde_json::json!({
            "text": example.text,
            "label": example.label,
            "task": example.task_id,
            "dataset": example.dataset_id,
        });
        write_line(&mut writer, &value, path)?;
    }
    writer.flush().map_err(|e| io_err(path, e))
}

fn write_line(writer: &mut impl Write, value: &Value, path: &Path) -> Result<(), CorpusError> {
    serde_json::to_writer(&mut *writer, value).map_err(|e| CorpusError::MalformedLine {
        line: 0,
        reason: e.to_string(),
    })?;
    writer.write_all(b"\n").map_err(|e| io_err(path, e))
}

fn open(path: &Path) -> Result<File, CorpusError> {
    File::open(path).map_err(|e| io_err(path, e))
}

fn create(path: &Path) -> Result<File, CorpusError> {
    File::create(path).map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: PathBuf::from(path),
        source,
    }
}

fn csv_error(e: csv::Error) -> CorpusError {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or_default();
    CorpusError::MalformedLine {
        line,
        reason: e.to_string(),
    }
}

fn req_str(value: &Value, field: &str, line: usize) -> Result<String, CorpusError> {
    match value.get(field) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(other) => Err(CorpusError::Field {
            line,
            field: field.to_string(),
            reason: format!("expected string, got {other}"),
        }),
        None => Err(missing(field, line)),
    }
}

fn req_label(value: &Value, field: &str, line: usize) -> Result<usize, CorpusError> {
    match value.get(field) {
        Some(Value::Number(n)) => n.as_u64().map(|v| v as usize).ok_or_else(|| CorpusError::Field {
            line,
            field: field.to_string(),
            reason: format!("expected non-negative integer, got {n}"),
        }),
        Some(other) => Err(CorpusError::Field {
            line,
            field: field.to_string(),
            reason: format!("expected non-negative integer, got {other}"),
        }),
        None => Err(missing(field, line)),
    }
}

fn req_bool(value: &Value, field: &str, line: usize) -> Result<bool, CorpusError> {
    match value.get(field) {
        Some(Value::Bool(b)) => Ok(*b),
        Some(other) => Err(CorpusError::Field {
            line,
            field: field.to_string(),
            reason: format!("expected boolean, got {other}"),
        }),
        None => Err(missing(field, line)),
    }
}

fn opt_conf(value: &Value, field: &str, line: usize) -> Result<Option<f64>, CorpusError> {
    match value.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Number(n)) => {
            let v = n.as_f64().ok_or_else(|| CorpusError::Field {
                line,
                field: field.to_string(),
                reason: format!("expected float, got {n}"),
            })?;
            check_conf(v, field, line)?;
            Ok(Some(v))
        }
        Some(other) => Err(CorpusError::Field {
            line,
            field: field.to_string(),
            reason: format!("expected float, got {other}"),
        }),
    }
}

fn check_conf(v: f64, field: &str, line: usize) -> Result<(), CorpusError> {
    if !(0.0..=1.0).contains(&v) {
        return Err(CorpusError::Field {
            line,
            field: field.to_string(),
            reason: format!("confidence {v} outside [0, 1]"),
        });
    }
    Ok(())
}

fn missing(field: &str, line: usize) -> CorpusError {
    CorpusError::Field {
        line,
        field: field.to_string(),
        reason: "missing field".to_string(),
    }
}
