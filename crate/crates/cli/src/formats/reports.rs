//! Report writers. CSV reports carry a header row; text reports are
//! `key = value` lines. Probabilities and metrics use 6 decimals, other reals
//! 6 significant digits.

use std::fmt::Write as _;

use upset_core::betting::{BettingReport, FixedStrategyReport, PredictionSource};
use upset_core::features::{WindowPass, WINDOW_SECONDS};
use upset_core::learn::{CvReport, Metrics, NullReport};
use upset_core::odds::ScoredGame;
use upset_core::signals::{InteractionCounts, MinuteBucket};

use super::features::label_str;
use super::games::{game_fields, HEADER as GAME_HEADER};
use super::sig6;
use crate::error::{CliError, CliResult};

fn csv_err(e: csv::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<Vec<u8>> {
    w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn write_scored(rows: &[ScoredGame]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = GAME_HEADER.to_vec();
    header.extend(["pu", "u", "label"]);
    w.write_record(&header).map_err(csv_err)?;
    for s in rows {
        let mut rec = game_fields(&s.game).to_vec();
        rec.push(sig6(s.pu));
        rec.push(s.u.map(sig6).unwrap_or_default());
        rec.push(label_str(s.label).into());
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}

pub fn write_predictions(game_ids: &[String], cv: &CvReport, labels: &[upset_core::ClassLabel]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["game_id", "posterior_upset", "predicted", "label", "fold", "seed"])
        .map_err(csv_err)?;
    for (i, id) in game_ids.iter().enumerate() {
        w.write_record([
            id.clone(),
            format!("{:.6}", cv.posteriors[i]),
            cv.predictions[i].as_str().into(),
            labels[i].as_str().into(),
            cv.fold_assignment[i].to_string(),
            cv.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

fn push_metrics(out: &mut String, prefix: &str, m: &Metrics) {
    for (k, v) in [
        ("accuracy", m.accuracy),
        ("precision", m.precision),
        ("recall", m.recall),
        ("f1", m.f1),
        ("auroc", m.auroc),
    ] {
        let _ = writeln!(out, "{prefix}{k} = {v:.6}");
    }
}

pub fn cv_report_text(cv: &CvReport, n_upset: usize, n_baseline: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed = {}", cv.seed);
    let _ = writeln!(out, "k = {}", cv.k);
    let _ = writeln!(out, "n_games = {}", n_upset + n_baseline);
    let _ = writeln!(out, "n_upset = {n_upset}");
    let _ = writeln!(out, "n_baseline = {n_baseline}");
    push_metrics(&mut out, "", &cv.metrics);
    for (i, m) in cv.per_fold.iter().enumerate() {
        push_metrics(&mut out, &format!("fold{i}."), m);
    }
    out
}

pub fn null_report_text(null: &NullReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "null.seed = {}", null.seed);
    let _ = writeln!(out, "null.rounds = {}", null.rounds.len());
    push_metrics(&mut out, "null.mean.", &null.mean);
    push_metrics(&mut out, "null.std.", &null.std);
    out
}

fn source_name(source: PredictionSource) -> String {
    match source {
        PredictionSource::CrossValidated => "cross-validated".into(),
        PredictionSource::Oracle => "oracle".into(),
        PredictionSource::Always(label) => format!("always-{}", label.as_str()),
    }
}

/// `key = value` summary, fixed-strategy results, the configuration echo, a blank
/// line, then the per-round CSV.
pub fn betting_report_text(
    report: &BettingReport,
    fixed: &[FixedStrategyReport],
    config_echo: &str,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "source = {}", source_name(report.source));
    let _ = writeln!(out, "odds_reshuffled = {}", report.odds_reshuffled);
    let _ = writeln!(out, "seed = {}", report.config.seed);
    let _ = writeln!(out, "rounds = {}", report.rounds.len());
    let _ = writeln!(out, "mean_profit = {:.6}", report.mean_profit);
    let _ = writeln!(out, "std_profit = {:.6}", report.std_profit);
    for f in fixed {
        let _ = writeln!(out, "fixed.{}.mean_profit = {:.6}", f.strategy.name(), f.mean_profit);
        let _ = writeln!(out, "fixed.{}.std_profit = {:.6}", f.strategy.name(), f.std_profit);
    }
    for line in config_echo.lines() {
        let _ = writeln!(out, "config.{line}");
    }
    out.push_str("\nround,seed,b,r,profit\n");
    for r in &report.rounds {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.round,
            r.seed,
            sig6(r.b),
            sig6(r.r),
            sig6(r.profit)
        );
    }
    out
}

pub fn write_significance(table: &[WindowPass], alpha: f64) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "window",
        "minutes_before_kickoff",
        "alpha",
        "upset_pass",
        "upset_total",
        "baseline_pass",
        "baseline_total",
    ])
    .map_err(csv_err)?;
    let n = table.len() as i64;
    for (i, row) in table.iter().enumerate() {
        let start_min = (n - i as i64) * WINDOW_SECONDS / 60;
        w.write_record([
            (i + 1).to_string(),
            format!("{start_min}-{}", start_min - WINDOW_SECONDS / 60),
            sig6(alpha),
            row.upset_pass.to_string(),
            row.upset_total.to_string(),
            row.baseline_pass.to_string(),
            row.baseline_total.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn write_signals(series: &[MinuteBucket]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "minute",
        "volume",
        "fav_count",
        "und_count",
        "match_count",
        "fav_mean",
        "und_mean",
        "events",
    ])
    .map_err(csv_err)?;
    for b in series {
        let events: Vec<String> = b
            .events
            .iter()
            .map(|e| format!("{}:{}", e.kind.as_str(), e.team))
            .collect();
        w.write_record([
            b.minute.to_string(),
            b.volume.to_string(),
            b.fav_count.to_string(),
            b.und_count.to_string(),
            b.match_count.to_string(),
            b.fav_mean.map(sig6).unwrap_or_default(),
            b.und_mean.map(sig6).unwrap_or_default(),
            events.join(";"),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn interactions_text(c: &InteractionCounts, n_fav: usize, n_und: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fav_users = {n_fav}");
    let _ = writeln!(out, "und_users = {n_und}");
    for (k, v) in [
        ("ffrt", c.ffrt),
        ("ffmt", c.ffmt),
        ("furt", c.furt),
        ("fumt", c.fumt),
        ("uurt", c.uurt),
        ("uumt", c.uumt),
        ("ufrt", c.ufrt),
        ("ufmt", c.ufmt),
    ] {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}
