use super::{char_distance, CharNGramLm, MetricsError, PairScorer};
use crate::attack::EvalReport;
use crate::corpus::{tokenize, LabeledExample};
use crate::vulnerability::perturbation_rate;

/// One aggregate report row in the fixed column order:
/// ASR, mean queries over successes, mean Levenshtein, mean perturbation
/// rate, mean perplexity increase, mean similarity.
///
/// Optional metrics render as empty cells, never 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub asr: f64,
    pub mean_queries_success: Option<f64>,
    pub mean_levenshtein: Option<f64>,
    pub mean_perturbation_rate: Option<f64>,
    pub mean_ppl_increase: Option<f64>,
    pub mean_similarity: Option<f64>,
}

/// Aggregate per-pair metrics over the successful attacks of an evaluation.
///
/// `dataset` must be the dataset the evaluation ran on; adversarial texts are
/// paired with their originals through the per-example indices. The language
/// model and similarity scorer are optional hooks; without them the
/// corresponding cells stay empty.
pub fn build_report_row(
    eval: &EvalReport,
    dataset: &[LabeledExample],
    lm: Option<&CharNGramLm>,
    similarity: Option<&dyn PairScorer>,
) -> Result<ReportRow, MetricsError> {
    let mut distances = Vec::new();
    let mut rates = Vec::new();
    let mut ppls = Vec::new();
    let mut sims = Vec::new();
    for result in &eval.per_example {
        let Some(adversarial) = &result.adversarial_text else {
            continue;
        };
        let original = &dataset[result.example_index].text;
        distances.push(char_distance(original, adversarial) as f64);
        let orig_tokens = tokenize(original, true);
        let adv_tokens = tokenize(adversarial, true);
        if let Ok(rate) = perturbation_rate(&orig_tokens, &adv_tokens) {
            rates.push(rate);
        }
        if let Some(lm) = lm {
            ppls.push(super::ppl_increase(lm, original, adversarial)?);
        }
        if let Some(scorer) = similarity {
            sims.push(scorer.score(original, adversarial)?);
        }
    }
    Ok(ReportRow {
        asr: eval.asr,
        mean_queries_success: eval.mean_queries_success,
        mean_levenshtein: mean(&distances),
        mean_perturbation_rate: mean(&rates),
        mean_ppl_increase: mean(&ppls),
        mean_similarity: mean(&sims),
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

const COLUMNS: [&str; 6] = [
    "asr",
    "mean_queries_success",
    "mean_levenshtein",
    "mean_perturbation_rate",
    "mean_ppl_increase",
    "mean_similarity",
];

fn cells(row: &ReportRow) -> [String; 6] {
    [
        format!("{:.6}", row.asr),
        opt(row.mean_queries_success),
        opt(row.mean_levenshtein),
        opt(row.mean_perturbation_rate),
        opt(row.mean_ppl_increase),
        opt(row.mean_similarity),
    ]
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.6}")).unwrap_or_default()
}

pub fn render_report_csv(row: &ReportRow) -> String {
    format!("{}\n{}\n", COLUMNS.join(","), cells(row).join(","))
}

pub fn render_report_markdown(row: &ReportRow) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
    out.push_str(&format!("|{}\n", " --- |".repeat(COLUMNS.len())));
    out.push_str(&format!("| {} |\n", cells(row).join(" | ")));
    out
}
