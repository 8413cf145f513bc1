//! `ragrank judge`: collect pairwise verdicts from a chat-completion judge.
//!
//! Every model pair meets on every query exactly once, with presentation
//! order flipped by a seeded coin so position bias cancels in aggregate.
//! Replies that cannot be canonicalized land in a reject file instead of
//! the judgment pool.

use std::collections::BTreeMap;
use std::fs;

use anyhow::{Context, Result};
use rand::RngExt;
use ragrank_arena::canonicalize_verdict;
use ragrank_core::{derive_rng, ModelId, PairwiseJudgment, RagResponse, RngSeed};

use crate::commands::{check_dataset, required_path, Ctx, JUDGMENTS_JSONL, REJECTS_JSONL};
use crate::config::filter_language;
use crate::io::{load_queries, load_responses, write_jsonl, JudgmentRow, RejectRow};
use crate::judge::JudgeClient;
use crate::meta::RunMeta;
use crate::template::{render_prompt, validate_template, DEFAULT_TEMPLATE};

/// One comparison to send: the canonical (unswapped) pair plus the coin.
struct Task {
    query_id: String,
    model_a: ModelId,
    model_b: ModelId,
    swapped: bool,
}

/// How the run went; any rejects mean a partial failure exit.
pub struct JudgeSummary {
    pub judged: usize,
    pub rejected: usize,
}

pub fn run(ctx: &Ctx) -> Result<JudgeSummary> {
    let config = &ctx.config;
    let endpoint = config
        .endpoint
        .as_ref()
        .context("config must set \"endpoint\" for the judge command")?;
    endpoint.validate()?;

    let template = match &config.template {
        Some(path) => fs::read_to_string(path)
            .with_context(|| format!("reading template {}", path.display()))?,
        None => DEFAULT_TEMPLATE.to_string(),
    };
    validate_template(&template)?;

    let queries_path = required_path(&config.paths.queries, "queries")?;
    let responses_path = required_path(&config.paths.responses, "responses")?;
    let all_queries = load_queries(queries_path)?;
    let mut queries = filter_language(all_queries, config.language.as_deref())?;
    queries.sort_by(|a, b| a.query_id.cmp(&b.query_id));
    let kept: std::collections::BTreeSet<&str> =
        queries.iter().map(|q| q.query_id.as_str()).collect();
    let responses: Vec<RagResponse> = load_responses(responses_path)?
        .into_iter()
        .filter(|r| kept.contains(r.query_id.as_str()))
        .collect();
    check_dataset(&queries, &responses, true)?;

    let mut models: Vec<ModelId> = responses.iter().map(|r| r.model_id.clone()).collect();
    models.sort();
    models.dedup();
    if models.len() < 2 {
        anyhow::bail!("need at least two models to judge, found {}", models.len());
    }

    // (model, query) -> text shown to the judge.
    let answers: BTreeMap<(&ModelId, &str), &str> = responses
        .iter()
        .map(|r| {
            let text = r.answer.as_deref().unwrap_or(&r.raw_text);
            ((&r.model_id, r.query_id.as_str()), text)
        })
        .collect();

    let mut rng = derive_rng(RngSeed(ctx.seed), "judge-swap");
    let mut tasks: Vec<Task> = Vec::new();
    let mut prompts: Vec<String> = Vec::new();
    for query in &queries {
        for i in 0..models.len() {
            for j in i + 1..models.len() {
                let swapped: bool = rng.random();
                let (model_a, model_b) = (&models[i], &models[j]);
                let answer_a = answers[&(model_a, query.query_id.as_str())];
                let answer_b = answers[&(model_b, query.query_id.as_str())];
                let (first, second) = if swapped {
                    (answer_b, answer_a)
                } else {
                    (answer_a, answer_b)
                };
                prompts.push(render_prompt(&template, query, first, second)?);
                tasks.push(Task {
                    query_id: query.query_id.clone(),
                    model_a: model_a.clone(),
                    model_b: model_b.clone(),
                    swapped,
                });
            }
        }
    }

    let client = JudgeClient::from_config(endpoint)?;
    eprintln!(
        "judging {} comparisons ({} pairs x {} queries, parallelism {})",
        tasks.len(),
        models.len() * (models.len() - 1) / 2,
        queries.len(),
        endpoint.parallelism
    );
    let results = client.run_all(&prompts, endpoint.parallelism);

    let mut judgments: Vec<JudgmentRow> = Vec::new();
    let mut rejects: Vec<RejectRow> = Vec::new();
    for (task, result) in tasks.iter().zip(results) {
        match result {
            Ok(reply) => match canonicalize_verdict(&reply, task.swapped) {
                Ok(verdict) => {
                    let judgment = PairwiseJudgment::new(
                        task.query_id.clone(),
                        task.model_a.clone(),
                        task.model_b.clone(),
                        verdict,
                        task.swapped,
                    )?;
                    let mut row = JudgmentRow::from_judgment(&judgment);
                    row.raw = Some(reply);
                    judgments.push(row);
                }
                Err(err) => rejects.push(reject(task, reply, err.to_string())),
            },
            Err(err) => rejects.push(reject(task, String::new(), err.to_string())),
        }
    }

    write_jsonl(&ctx.artifact(JUDGMENTS_JSONL), &judgments)?;
    let rejects_path = ctx.artifact(REJECTS_JSONL);
    if rejects.is_empty() {
        if rejects_path.exists() {
            fs::remove_file(&rejects_path)
                .with_context(|| format!("removing stale {}", rejects_path.display()))?;
        }
    } else {
        write_jsonl(&rejects_path, &rejects)?;
    }

    let mut meta = RunMeta::new("judge", ctx.seed)
        .stream("judge-swap", 1)
        .input(queries_path)?
        .input(responses_path)?;
    if let Some(path) = &config.template {
        meta = meta.input(path)?;
    }
    meta.write(&ctx.out)?;

    println!(
        "judge: {} judgment(s), {} reject(s) -> {}",
        judgments.len(),
        rejects.len(),
        ctx.out.display()
    );
    Ok(JudgeSummary {
        judged: judgments.len(),
        rejected: rejects.len(),
    })
}

fn reject(task: &Task, raw: String, error: String) -> RejectRow {
    RejectRow {
        query_id: task.query_id.clone(),
        model_a: task.model_a.to_string(),
        model_b: task.model_b.to_string(),
        swapped: task.swapped,
        raw,
        error,
    }
}

