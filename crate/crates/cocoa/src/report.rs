//! Text and JSON renderings of statistics, per-sample metrics and scores.

use std::fmt::Write as _;

use cocoa_core::analytics::DatasetStats;
use cocoa_core::eval::{ScoreReport, ValidationReport};
use cocoa_core::query::Sample;
use serde_json::{json, Value};

fn cell_label((k, m): (usize, usize)) -> String {
    format!("({k},{m})")
}

fn fmt_pct(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |a| format!("{a:.2}"))
}

/// Aligned table: one column per `(slots, minterms)` cell plus a total.
pub fn stats_table(stats: &DatasetStats) -> String {
    let mut header = vec!["Statistic".to_string()];
    header.extend(stats.cells.keys().map(|&k| cell_label(k)));
    header.push("Total".to_string());
    let cells: Vec<_> = stats
        .cells
        .values()
        .chain(std::iter::once(&stats.total))
        .collect();
    let mut rows: Vec<Vec<String>> = vec![
        std::iter::once("Samples".to_string())
            .chain(cells.iter().map(|c| c.samples.to_string()))
            .collect(),
        std::iter::once("Unique Queries".to_string())
            .chain(cells.iter().map(|c| c.unique_queries.to_string()))
            .collect(),
        std::iter::once("Avg. Query Length".to_string())
            .chain(cells.iter().map(|c| format!("{:.2}", c.avg_query_length)))
            .collect(),
    ];
    let dash = |last: String| {
        let mut row = vec![String::new(); header.len()];
        row[header.len() - 1] = last;
        row
    };
    let mut context = dash(format!("{:.2}", stats.avg_context_length));
    context[0] = "Avg. Context Length".into();
    let mut vocab = dash(stats.vocab_size.to_string());
    vocab[0] = "Vocab Size".into();
    rows.push(context);
    rows.push(vocab);
    align(&header, &rows)
}

fn align(header: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].len())
                .chain(std::iter::once(header[i].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if i == 0 {
                    format!("{v:<w$}", w = widths[i])
                } else {
                    format!("{v:>w$}", w = widths[i])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

pub fn stats_json(stats: &DatasetStats) -> Value {
    let cell = |c: &cocoa_core::analytics::CellStats| json!({"samples": c.samples, "unique_queries": c.unique_queries, "avg_query_length": c.avg_query_length});
    json!({
        "cells": stats.cells.iter().map(|(&(k, m), c)| {
            let mut v = cell(c);
            v["slots"] = json!(k);
            v["minterms"] = json!(m);
            v
        }).collect::<Vec<_>>(),
        "total": cell(&stats.total),
        "avg_context_length": stats.avg_context_length,
        "vocab_size": stats.vocab_size,
    })
}

/// Per-sample metrics for external plotting.
pub fn analyze_csv(samples: &[Sample]) -> Result<String, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "sample_id",
        "sum_terms",
        "lcc",
        "max_degree",
        "components",
        "gold_entropy",
        "atypical",
    ])?;
    for s in samples {
        writer.write_record([
            s.sample_id.clone(),
            s.metrics.sum_terms.to_string(),
            s.metrics.lcc.to_string(),
            s.metrics.max_degree.to_string(),
            s.metrics.components.to_string(),
            s.gold_entropy.to_string(),
            s.query.atypical.to_string(),
        ])?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn score_table(report: &ScoreReport) -> String {
    let header: Vec<String> = ["Group", "Regular", "Atypical", "Total"]
        .map(String::from)
        .to_vec();
    let mut rows = vec![vec![
        "Accuracy (%)".to_string(),
        fmt_pct(report.accuracy_regular()),
        fmt_pct(report.accuracy_atypical()),
        fmt_pct(report.accuracy_total()),
    ]];
    rows.push(vec![
        "Scored".to_string(),
        report.regular.scored.to_string(),
        report.atypical.scored.to_string(),
        report.total.scored.to_string(),
    ]);
    let mut out = align(&header, &rows);
    let per_header: Vec<String> = ["Config", "Accuracy (%)", "Scored"]
        .map(String::from)
        .to_vec();
    let per_rows: Vec<Vec<String>> = report
        .per_config
        .iter()
        .map(|(&k, t)| vec![cell_label(k), fmt_pct(t.accuracy()), t.scored.to_string()])
        .collect();
    out.push('\n');
    out.push_str(&align(&per_header, &per_rows));
    let _ = writeln!(
        out,
        "\nscored {}, missing {}",
        report.n_scored, report.n_missing
    );
    out
}

pub fn score_json(report: &ScoreReport) -> Value {
    json!({
        "accuracy_total": report.accuracy_total(),
        "accuracy_regular": report.accuracy_regular(),
        "accuracy_atypical": report.accuracy_atypical(),
        "per_config": report.per_config.iter().map(|(&(k, m), t)| json!({
            "slots": k, "minterms": m, "accuracy": t.accuracy(), "scored": t.scored, "correct": t.correct,
        })).collect::<Vec<_>>(),
        "n_scored": report.n_scored,
        "n_missing": report.n_missing,
        "n_regular": report.regular.scored,
        "n_atypical": report.atypical.scored,
    })
}

/// One line per check, then offending ids (at most `limit` per check).
pub fn validation_text(report: &ValidationReport, limit: usize) -> String {
    let mut out = String::new();
    for check in &report.checks {
        let status = if check.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<22} {status:>4}  {} violations",
            check.name,
            check.failures.len()
        );
        for failure in check.failures.iter().take(limit) {
            let _ = writeln!(out, "    {failure}");
        }
        if check.failures.len() > limit {
            let _ = writeln!(out, "    ... {} more", check.failures.len() - limit);
        }
    }
    let _ = writeln!(
        out,
        "{} samples, {} violations",
        report.samples,
        report.failure_count()
    );
    out
}

pub fn validation_json(report: &ValidationReport) -> Value {
    json!({
        "passed": report.passed(),
        "samples": report.samples,
        "violations": report.failure_count(),
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name, "passed": c.passed(), "failures": c.failures,
        })).collect::<Vec<_>>(),
    })
}
