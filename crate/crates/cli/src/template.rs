//! Judge prompt templating.
//!
//! Templates are plain text files with `{{placeholder}}` substitution. The
//! judge prompt must present the question, the shared documents, and both
//! answers, so all four placeholders are mandatory; an unknown placeholder
//! is an error too, because it is almost certainly a typo that would
//! otherwise reach the judge verbatim.

use ragrank_core::QueryRecord;
use regex::Regex;
use std::sync::LazyLock;
use thiserror::Error;

/// The built-in pairwise judge prompt, used when the config names no
/// template file.
pub const DEFAULT_TEMPLATE: &str = include_str!("../templates/judge_prompt.txt");

/// Placeholders every judge template must provide.
pub const REQUIRED_PLACEHOLDERS: [&str; 4] =
    ["query", "documents", "answer_a", "answer_b"];

static PLACEHOLDER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\{\{\s*([A-Za-z0-9_]+)\s*\}\}").unwrap());

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("template is missing the {{{{{0}}}}} placeholder")]
    MissingPlaceholder(&'static str),
    #[error("template contains unknown placeholder {{{{{0}}}}}")]
    UnknownPlaceholder(String),
}

/// Checks that a template carries exactly the supported placeholders.
pub fn validate_template(template: &str) -> Result<(), TemplateError> {
    for required in REQUIRED_PLACEHOLDERS {
        if !PLACEHOLDER
            .captures_iter(template)
            .any(|c| &c[1] == required)
        {
            return Err(TemplateError::MissingPlaceholder(required));
        }
    }
    for capture in PLACEHOLDER.captures_iter(template) {
        let name = &capture[1];
        if !REQUIRED_PLACEHOLDERS.contains(&name) {
            return Err(TemplateError::UnknownPlaceholder(name.to_string()));
        }
    }
    Ok(())
}

/// Renders a query's passages as one `[passage_id] text` line each, in
/// retrieval order.
pub fn render_documents(query: &QueryRecord) -> String {
    query
        .passages
        .iter()
        .map(|p| format!("[{}] {}", p.passage_id, p.text))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Fills a validated template with one comparison's content. `answer_a` and
/// `answer_b` are the texts in *presentation* order — the caller applies
/// any position swap before rendering.
pub fn render_prompt(
    template: &str,
    query: &QueryRecord,
    answer_a: &str,
    answer_b: &str,
) -> Result<String, TemplateError> {
    validate_template(template)?;
    let documents = render_documents(query);
    let rendered = PLACEHOLDER
        .replace_all(template, |capture: &regex::Captures| match &capture[1] {
            "query" => query.text.clone(),
            "documents" => documents.clone(),
            "answer_a" => answer_a.to_string(),
            "answer_b" => answer_b.to_string(),
            other => unreachable!("validated template had placeholder {other}"),
        })
        .into_owned();
    Ok(rendered)
}
