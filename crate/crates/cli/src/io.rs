//! File formats and readers that connect pipeline stages.
//!
//! Every format here is documented field-by-field in `formats.md` at the
//! repository root. Readers attach file and line context to every error, and
//! writers emit deterministic bytes: sorted maps, fixed field order, one
//! JSON object per JSONL line, and a trailing newline on whole-file JSON.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use anyhow::{Context, Result};
use ragrank_core::{ModelId, PairwiseJudgment, QueryRecord, RagResponse, Verdict};
use ragrank_textmetrics::{parse_citations, parse_rag_output, FeatureVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SubsetSpec;

/// One canonical pairwise judgment as stored on disk.
///
/// `verdict` always refers to `model_a`/`model_b` as written here; `swapped`
/// records that the judge saw the answers in the opposite order. `raw`
/// carries the judge's full reply for audit and is omitted by generators
/// that have none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentRow {
    pub query_id: String,
    pub model_a: String,
    pub model_b: String,
    pub verdict: Verdict,
    pub swapped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<String>,
}

impl JudgmentRow {
    /// A row for a judgment that has no raw judge reply attached.
    pub fn from_judgment(judgment: &PairwiseJudgment) -> Self {
        Self {
            query_id: judgment.query_id.clone(),
            model_a: judgment.model_a.to_string(),
            model_b: judgment.model_b.to_string(),
            verdict: judgment.verdict,
            swapped: judgment.swapped,
            raw: None,
        }
    }

    /// Validates the row into a typed judgment, dropping `raw`.
    pub fn into_judgment(self) -> Result<PairwiseJudgment> {
        let model_a = ModelId::new(self.model_a)?;
        let model_b = ModelId::new(self.model_b)?;
        Ok(PairwiseJudgment::new(
            self.query_id,
            model_a,
            model_b,
            self.verdict,
            self.swapped,
        )?)
    }
}

/// A judge reply that could not be canonicalized, kept for manual triage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectRow {
    pub query_id: String,
    pub model_a: String,
    pub model_b: String,
    pub swapped: bool,
    /// The reply as received; empty when the request itself failed.
    pub raw: String,
    pub error: String,
}

/// A raw model output as stored on disk; markers and citations are parsed
/// at load time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawResponseRow {
    pub model_id: String,
    pub query_id: String,
    pub raw_text: String,
}

/// One reference answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldAnswerRow {
    pub query_id: String,
    pub answer: String,
}

/// A (model, query, feature) cell that had no record, as reported in the
/// aggregated feature file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingCellRow {
    pub model_id: String,
    pub query_id: String,
    pub feature: String,
}

/// The aggregated feature file: one mean vector per model, plus which
/// cells were missing from the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureFile {
    /// The selection the vectors were aggregated under.
    pub subset: SubsetSpec,
    /// Selected features in canonical column order.
    pub feature_names: Vec<String>,
    /// One vector per model, sorted by model id.
    pub vectors: Vec<FeatureVector>,
    /// Cells skipped during aggregation, sorted.
    pub missing: Vec<MissingCellRow>,
}

/// Reads a JSONL file into typed rows, reporting the file and line of any
/// malformed row.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file =
        File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}", path.display(), index + 1))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Writes rows as one JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.push(b'\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Reads a whole-file JSON document.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes a pretty-printed JSON document with a trailing newline.
pub fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// SHA-256 of a file's bytes, as lowercase hex.
pub fn sha256_hex(path: &Path) -> Result<String> {
    let mut file =
        File::open(path).with_context(|| format!("hashing {}", path.display()))?;
    let mut hasher = Sha256::new();
    let mut buffer = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buffer)?;
        if n == 0 {
            break;
        }
        hasher.update(&buffer[..n]);
    }
    let digest: [u8; 32] = hasher.finalize().into();
    Ok(hex::encode(digest))
}

/// Loads queries and checks each record's shape.
pub fn load_queries(path: &Path) -> Result<Vec<QueryRecord>> {
    let queries: Vec<QueryRecord> = read_jsonl(path)?;
    for query in &queries {
        query
            .check_shape()
            .with_context(|| format!("in {}", path.display()))?;
    }
    Ok(queries)
}

/// Loads raw responses and derives their parsed parts: the reason/answer
/// split and the citation list. Citations are read from the answer section
/// when one exists, otherwise from the whole output.
pub fn load_responses(path: &Path) -> Result<Vec<RagResponse>> {
    let rows: Vec<RawResponseRow> = read_jsonl(path)?;
    rows.into_iter()
        .map(|row| {
            let (reason, answer) = parse_rag_output(&row.raw_text);
            let cited_ids = parse_citations(answer.as_deref().unwrap_or(&row.raw_text));
            Ok(RagResponse {
                model_id: ModelId::new(row.model_id)
                    .with_context(|| format!("in {}", path.display()))?,
                query_id: row.query_id,
                raw_text: row.raw_text,
                reason,
                answer,
                cited_ids,
            })
        })
        .collect()
}

/// Loads judgments into typed form, dropping any attached raw replies.
pub fn load_judgments(path: &Path) -> Result<Vec<PairwiseJudgment>> {
    let rows: Vec<JudgmentRow> = read_jsonl(path)?;
    rows.into_iter()
        .map(|row| {
            row.into_judgment()
                .with_context(|| format!("in {}", path.display()))
        })
        .collect()
}

/// Writes rows through the CSV writer and returns the bytes written.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let file =
        File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Formats a float for CSV cells; plain `{}` keeps the shortest exact
/// representation, so re-reading reproduces the value bit-for-bit.
pub fn csv_float(value: f64) -> String {
    format!("{value}")
}

/// Ensures `dir` exists.
pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(())
}

/// Convenience for writing text files with error context.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
