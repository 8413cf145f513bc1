//! `ragrank features`: compute per-(model, query) feature records from the
//! dataset, merge in externally produced scores, and aggregate them into one
//! vector per model.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Context, Result};
use ragrank_core::{ModelId, QueryRecord, RagResponse};
use ragrank_textmetrics::{
    aggregate_features, bleu, bundled_profiles, citation_metrics, detect_language,
    ingest_external_scores, ExternalScoreRecord, FeatureName, FeatureRecord, MetricsError,
    TokenizerMode,
};

use crate::commands::{
    check_dataset, required_path, Ctx, FEATURES_CSV, FEATURES_JSON, FEATURE_RECORDS_JSONL,
};
use crate::config::filter_language;
use crate::io::{
    self, csv_float, load_queries, load_responses, read_jsonl, write_csv, write_jsonl,
    FeatureFile, GoldAnswerRow, MissingCellRow,
};
use crate::meta::RunMeta;

/// Rank cutoff for the citation recall/MAP features (they score the first
/// ten cited passages, matching their names).
const CITATION_K: usize = 10;

/// Largest n-gram order entering the overlap score.
const BLEU_MAX_N: usize = 4;

pub fn run(ctx: &Ctx) -> Result<()> {
    let config = &ctx.config;
    let queries_path = required_path(&config.paths.queries, "queries")?;
    let responses_path = required_path(&config.paths.responses, "responses")?;

    let all_queries = load_queries(queries_path)?;
    let known_ids: BTreeSet<&str> = all_queries.iter().map(|q| q.query_id.as_str()).collect();
    let all_responses = load_responses(responses_path)?;
    if let Some((model, query)) = all_responses
        .iter()
        .find(|r| !known_ids.contains(r.query_id.as_str()))
        .map(|r| (r.model_id.clone(), r.query_id.clone()))
    {
        bail!("response for {model}/{query} references a query missing from the query file");
    }

    let queries = filter_language(all_queries, config.language.as_deref())?;
    let kept_ids: BTreeSet<&str> = queries.iter().map(|q| q.query_id.as_str()).collect();
    let responses: Vec<RagResponse> = all_responses
        .into_iter()
        .filter(|r| kept_ids.contains(r.query_id.as_str()))
        .collect();
    if responses.is_empty() {
        bail!("no responses left after language filtering");
    }
    check_dataset(&queries, &responses, false)?;

    let subset = config.subset.resolve()?;
    let members = subset.members();
    let member_set: BTreeSet<FeatureName> = members.iter().copied().collect();

    let needs_language = member_set.contains(&FeatureName::LangTarget)
        || member_set.contains(&FeatureName::LangEnglish);
    let needs_citations = member_set.contains(&FeatureName::CitationRecall10)
        || member_set.contains(&FeatureName::CitationMap10);
    let needs_overlap = member_set.contains(&FeatureName::AnswerRougeL)
        || member_set.contains(&FeatureName::AnswerBleu);
    let external_members: Vec<FeatureName> = members
        .iter()
        .copied()
        .filter(|f| f.externally_sourced())
        .collect();

    let profiles = bundled_profiles();
    if needs_language {
        let supported: BTreeSet<&str> = profiles.iter().map(|p| p.language.as_str()).collect();
        for query in &queries {
            if !supported.contains(query.language.as_str()) {
                bail!(
                    "query {} has language {:?}, which the bundled detector does not \
                     cover; supported: {}",
                    query.query_id,
                    query.language,
                    supported.into_iter().collect::<Vec<_>>().join(", ")
                );
            }
        }
    }

    let gold: BTreeMap<String, String> = if needs_overlap {
        let path = config.paths.gold_answers.as_deref().with_context(|| {
            format!(
                "subset selects {}, which need gold answers; set paths.gold_answers",
                names(
                    members
                        .iter()
                        .copied()
                        .filter(|f| matches!(
                            f,
                            FeatureName::AnswerRougeL | FeatureName::AnswerBleu
                        ))
                )
            )
        })?;
        let rows: Vec<GoldAnswerRow> = read_jsonl(path)?;
        rows.into_iter().map(|r| (r.query_id, r.answer)).collect()
    } else {
        BTreeMap::new()
    };

    let mut records: Vec<FeatureRecord> = Vec::new();
    let mut short_text = 0usize;
    let mut no_relevant_skips = 0usize;
    let mut missing_gold = 0usize;
    let query_index: BTreeMap<&str, &QueryRecord> =
        queries.iter().map(|q| (q.query_id.as_str(), q)).collect();

    for response in &responses {
        let query = query_index[response.query_id.as_str()];
        let answer = response.answer.as_deref().unwrap_or(&response.raw_text);
        let push = |records: &mut Vec<FeatureRecord>, feature, value| -> Result<()> {
            records.push(
                FeatureRecord::new(response.model_id.clone(), &response.query_id, feature, value)
                    .with_context(|| {
                        format!("feature {feature} for {}/{}", response.model_id, response.query_id)
                    })?,
            );
            Ok(())
        };

        if needs_language {
            let probs = match detect_language(answer, &profiles) {
                Ok(probs) => Some(probs),
                Err(MetricsError::TextTooShort { .. }) => {
                    short_text += 1;
                    None
                }
                Err(err) => return Err(err.into()),
            };
            let (target, english) = match &probs {
                Some(probs) => (probs[&query.language], probs["en"]),
                None => (0.0, 0.0),
            };
            if member_set.contains(&FeatureName::LangTarget) {
                push(&mut records, FeatureName::LangTarget, target)?;
            }
            if member_set.contains(&FeatureName::LangEnglish) {
                push(&mut records, FeatureName::LangEnglish, english)?;
            }
        }

        if needs_citations {
            let scores = citation_metrics(&response.cited_ids, &query.passages, CITATION_K)?;
            if scores.no_relevant {
                no_relevant_skips += 1;
            } else {
                if member_set.contains(&FeatureName::CitationRecall10) {
                    push(&mut records, FeatureName::CitationRecall10, scores.recall)?;
                }
                if member_set.contains(&FeatureName::CitationMap10) {
                    push(&mut records, FeatureName::CitationMap10, scores.map)?;
                }
            }
        }

        if needs_overlap {
            match gold.get(&response.query_id) {
                Some(reference) => {
                    if member_set.contains(&FeatureName::AnswerRougeL) {
                        let value = ragrank_textmetrics::rouge_l(
                            answer,
                            reference,
                            TokenizerMode::Auto,
                        );
                        push(&mut records, FeatureName::AnswerRougeL, value)?;
                    }
                    if member_set.contains(&FeatureName::AnswerBleu) {
                        let value = bleu(answer, reference, BLEU_MAX_N, TokenizerMode::Auto);
                        push(&mut records, FeatureName::AnswerBleu, value)?;
                    }
                }
                None => missing_gold += 1,
            }
        }
    }

    let models: Vec<ModelId> = {
        let mut models: Vec<ModelId> =
            responses.iter().map(|r| r.model_id.clone()).collect();
        models.sort();
        models.dedup();
        models
    };

    let mut external_path = None;
    if !external_members.is_empty() {
        let path = config.paths.external_scores.as_deref().with_context(|| {
            format!(
                "subset selects {}, which are externally sourced; set paths.external_scores",
                names(external_members.iter().copied())
            )
        })?;
        external_path = Some(path);
        let rows: Vec<ExternalScoreRecord> = read_jsonl(path)?;
        let known_models: BTreeSet<&ModelId> = models.iter().collect();
        let external = ingest_external_scores(&rows)?;
        let mut stray = 0usize;
        for record in external {
            if !member_set.contains(&record.feature) || !kept_ids.contains(record.query_id.as_str())
            {
                continue;
            }
            if !known_models.contains(&record.model_id) {
                stray += 1;
                continue;
            }
            records.push(record);
        }
        if stray > 0 {
            eprintln!(
                "warning: {stray} external score(s) name models absent from the \
                 response file; ignored"
            );
        }
    }

    if short_text > 0 {
        eprintln!(
            "warning: {short_text} answer(s) too short for language detection; \
             their language features are 0.0"
        );
    }
    if no_relevant_skips > 0 {
        eprintln!(
            "note: {no_relevant_skips} citation cell(s) skipped (query has no \
             relevant passage)"
        );
    }
    if missing_gold > 0 {
        eprintln!(
            "warning: {missing_gold} answer(s) have no gold answer; their overlap \
             cells are skipped"
        );
    }

    let aggregation = aggregate_features(&records, &models, &subset)?;
    let missing: Vec<MissingCellRow> = aggregation
        .missing
        .iter()
        .map(|m| MissingCellRow {
            model_id: m.model_id.to_string(),
            query_id: m.query_id.clone(),
            feature: m.feature.as_str().to_string(),
        })
        .collect();
    if !missing.is_empty() {
        eprintln!(
            "note: {} (model, query, feature) cell(s) missing from the means",
            missing.len()
        );
    }

    write_jsonl(&ctx.artifact(FEATURE_RECORDS_JSONL), &records)?;
    let file = FeatureFile {
        subset: config.subset.clone(),
        feature_names: members.iter().map(|f| f.as_str().to_string()).collect(),
        vectors: aggregation.vectors.clone(),
        missing,
    };
    io::write_json_pretty(&ctx.artifact(FEATURES_JSON), &file)?;

    let mut header: Vec<&str> = vec!["model", "n_queries"];
    header.extend(members.iter().map(|f| f.as_str()));
    let rows: Vec<Vec<String>> = aggregation
        .vectors
        .iter()
        .map(|v| {
            let mut row = vec![v.model_id.to_string(), v.n_queries.to_string()];
            row.extend(members.iter().map(|f| csv_float(v.values[f])));
            row
        })
        .collect();
    write_csv(&ctx.artifact(FEATURES_CSV), &header, &rows)?;

    let mut meta = RunMeta::new("features", ctx.seed)
        .input(queries_path)?
        .input(responses_path)?;
    if needs_overlap {
        meta = meta.input(config.paths.gold_answers.as_deref().unwrap())?;
    }
    if let Some(path) = external_path {
        meta = meta.input(path)?;
    }
    meta.write(&ctx.out)?;

    println!(
        "features: {} models x {} features over {} queries -> {}",
        aggregation.vectors.len(),
        members.len(),
        queries.len(),
        ctx.out.display()
    );
    Ok(())
}

fn names(features: impl Iterator<Item = FeatureName>) -> String {
    features.map(|f| f.as_str()).collect::<Vec<_>>().join(", ")
}
