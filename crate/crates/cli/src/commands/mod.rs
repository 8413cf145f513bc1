//! One module per subcommand, sharing a resolved invocation context.
//!
//! Artifact names are fixed: every stage reads its predecessors' outputs
//! from the run's output directory by the names below, so a whole run lives
//! in one directory and `report` can consolidate whatever is present.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ragrank_core::{validate_dataset, QueryRecord, RagResponse, ValidationReport};

use crate::config::RunConfig;

pub mod ablate_features;
pub mod ablate_sampling;
pub mod features;
pub mod fit_bt;
pub mod judge;
pub mod report;
pub mod simulate;
pub mod surrogate;

pub const FEATURE_RECORDS_JSONL: &str = "feature_records.jsonl";
pub const FEATURES_JSON: &str = "features.json";
pub const FEATURES_CSV: &str = "features.csv";
pub const JUDGMENTS_JSONL: &str = "judgments.jsonl";
pub const REJECTS_JSONL: &str = "rejects.jsonl";
pub const BT_FIT_JSON: &str = "bt_fit.json";
pub const LEADERBOARD_CSV: &str = "leaderboard.csv";
pub const SURROGATE_REPORT_JSON: &str = "surrogate_report.json";
pub const FOREST_JSON: &str = "forest.json";
pub const ABLATE_SAMPLING_CSV: &str = "ablate_sampling.csv";
pub const ABLATE_FEATURES_CSV: &str = "ablate_features.csv";
pub const WORLD_JSON: &str = "world.json";
pub const TRUE_LOGITS_JSON: &str = "true_logits.json";
pub const REPORT_MD: &str = "report.md";
pub const REPORT_JSON: &str = "report.json";

/// A resolved invocation: config plus the seed and output directory after
/// command-line overrides.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub config: RunConfig,
    pub seed: u64,
    pub out: PathBuf,
}

impl Ctx {
    /// Path of a named artifact in the output directory.
    pub fn artifact(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// An artifact a later stage depends on; errors point at the stage
    /// that produces it.
    pub fn existing_artifact(&self, name: &str, produced_by: &str) -> Result<PathBuf> {
        let path = self.artifact(name);
        if !path.is_file() {
            bail!(
                "{} not found in {}; run `ragrank {produced_by}` first (same --out)",
                name,
                self.out.display()
            );
        }
        Ok(path)
    }

    /// The judgment pool: the configured `paths.judgments` if set, else the
    /// `judgments.jsonl` the judge stage writes into the output directory.
    pub fn judgments_input(&self) -> Result<PathBuf> {
        if let Some(path) = &self.config.paths.judgments {
            if !path.is_file() {
                bail!("paths.judgments does not exist: {}", path.display());
            }
            return Ok(path.clone());
        }
        self.existing_artifact(JUDGMENTS_JSONL, "judge")
    }

    /// Stable metadata key for the judgment pool: the configured path when
    /// set, else the artifact name (out-dir-relative, so metadata stays
    /// identical across output directories).
    pub fn judgments_meta_key(&self) -> String {
        match &self.config.paths.judgments {
            Some(path) => path.display().to_string(),
            None => JUDGMENTS_JSONL.to_string(),
        }
    }
}

/// Resolves a required config path, naming the field when unset or absent.
pub fn required_path<'a>(path: &'a Option<PathBuf>, field: &str) -> Result<&'a Path> {
    let path = path
        .as_deref()
        .with_context(|| format!("config must set paths.{field}"))?;
    if !path.is_file() {
        bail!("paths.{field} does not exist: {}", path.display());
    }
    Ok(path)
}

/// Cross-checks a dataset and reports problems, erroring on responses that
/// point at unknown queries and — when `require_complete` — on missing
/// (model, query) responses. Queries with no relevant passage are noted but
/// block nothing here; the stages that care handle them per cell.
pub fn check_dataset(
    queries: &[QueryRecord],
    responses: &[RagResponse],
    require_complete: bool,
) -> Result<ValidationReport> {
    let report = validate_dataset(queries, responses);
    if !report.unknown_query_refs.is_empty() {
        let examples: Vec<String> = report
            .unknown_query_refs
            .iter()
            .take(5)
            .map(|(model, query)| format!("{model}/{query}"))
            .collect();
        bail!(
            "{} response(s) reference unknown queries, e.g. {}",
            report.unknown_query_refs.len(),
            examples.join(", ")
        );
    }
    if require_complete && !report.missing_pairs.is_empty() {
        let examples: Vec<String> = report
            .missing_pairs
            .iter()
            .take(5)
            .map(|(model, query)| format!("{model}/{query}"))
            .collect();
        bail!(
            "{} (model, query) pair(s) have no response, e.g. {}; \
             every model must answer every query before judging",
            report.missing_pairs.len(),
            examples.join(", ")
        );
    }
    if !report.missing_pairs.is_empty() {
        eprintln!(
            "warning: {} (model, query) pair(s) have no response; \
             their cells will be reported as missing",
            report.missing_pairs.len()
        );
    }
    if !report.queries_without_relevant.is_empty() {
        eprintln!(
            "note: {} quer(ies) have no relevant passage; their citation \
             cells are skipped",
            report.queries_without_relevant.len()
        );
    }
    Ok(report)
}
