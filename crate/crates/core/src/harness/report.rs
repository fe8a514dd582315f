//! CSV and markdown rendering of Monte Carlo summaries.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::run::McSummary;
use crate::error::{Error, Result};
use crate::estimators::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::Config(format!("unknown table format `{other}`"))),
        }
    }
}

/// One line of the CSV output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub scenario: String,
    pub panel: String,
    pub estimator: String,
    pub outcome: Outcome,
    pub true_ate: f64,
    pub est_ate: f64,
    pub se: f64,
    pub reps: u64,
    pub seed: u64,
}

pub const CSV_HEADER: [&str; 9] = ["scenario", "panel", "estimator", "outcome", "true_ate", "est_ate", "se", "reps", "seed"];

pub fn csv_records(summary: &McSummary) -> Vec<CsvRecord> {
    summary
        .cells
        .iter()
        .map(|c| CsvRecord {
            scenario: summary.scenario.clone(),
            panel: summary.panel.clone(),
            estimator: c.estimator.clone(),
            outcome: c.outcome,
            true_ate: c.true_ate,
            est_ate: c.est_ate,
            se: c.se,
            reps: summary.replications,
            seed: summary.seed,
        })
        .collect()
}

fn to_csv(summaries: &[McSummary]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for s in summaries {
        for rec in csv_records(s) {
            w.serialize(rec).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
    if headers.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Io(format!("unexpected CSV header: {:?}", headers)));
    }
    rdr.deserialize().map(|r| r.map_err(|e: csv::Error| Error::Io(e.to_string()))).collect()
}

fn outcome_heading(o: Outcome) -> String {
    match o {
        Outcome::Employment => "Emp.".into(),
        other => other.to_string().replace('-', " - "),
    }
}

fn number(x: f64) -> String {
    format!("{x:.3}")
}

fn to_markdown(summaries: &[McSummary]) -> String {
    let mut out = String::new();
    for s in summaries {
        let outcomes: Vec<Outcome> = s.truth.iter().map(|t| t.outcome).collect();
        let title = if s.panel.is_empty() { s.scenario.as_str() } else { s.panel.as_str() };
        let _ = writeln!(out, "*{title}*\n");
        let _ = writeln!(out, "| | {} |", outcomes.iter().map(|&o| outcome_heading(o)).collect::<Vec<_>>().join(" | "));
        let _ = writeln!(out, "|---|{}", "---:|".repeat(outcomes.len()));
        let _ = writeln!(
            out,
            "| True average causal effect | {} |",
            s.truth.iter().map(|t| number(t.ate)).collect::<Vec<_>>().join(" | ")
        );
        for est in s.estimators() {
            let cells: Vec<_> = outcomes.iter().filter_map(|&o| s.cell(&est, o)).collect();
            let _ = writeln!(out, "| {est} | {} |", cells.iter().map(|c| number(c.est_ate)).collect::<Vec<_>>().join(" | "));
            let _ = writeln!(out, "| | {} |", cells.iter().map(|c| format!("({})", number(c.se))).collect::<Vec<_>>().join(" | "));
        }
        out.push('\n');
    }
    out
}

/// Render summaries as CSV (one row per estimator and outcome) or as
/// markdown panels with the estimate above its parenthesized standard error.
pub fn emit_table(summaries: &[McSummary], format: TableFormat) -> Result<String> {
    match format {
        TableFormat::Csv => to_csv(summaries),
        TableFormat::Markdown => Ok(to_markdown(summaries)),
    }
}
