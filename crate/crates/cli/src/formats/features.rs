//! Features file: CSV with header `game_id,p1..p12,nf1..nf12,nu1..nu12,label`.
//! P-values carry 6 significant digits; label is `upset`, `baseline` or empty.
//!
//! Excluded-games file: CSV `game_id,reason`.

use std::path::Path;

use upset_core::features::{FeatureVector, WINDOWS};
use upset_core::ClassLabel;

use super::{parse_f64, sig6};
use crate::error::{CliError, CliResult};

pub fn header() -> Vec<String> {
    let mut h = vec!["game_id".to_string()];
    h.extend((1..=WINDOWS).map(|i| format!("p{i}")));
    h.extend((1..=WINDOWS).map(|i| format!("nf{i}")));
    h.extend((1..=WINDOWS).map(|i| format!("nu{i}")));
    h.push("label".into());
    h
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

pub fn label_str(label: Option<ClassLabel>) -> &'static str {
    label.map_or("", ClassLabel::as_str)
}

pub fn write_features(rows: &[FeatureVector]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header()).map_err(csv_err)?;
    for fv in rows {
        let mut rec = vec![fv.game_id.clone()];
        rec.extend(fv.p.iter().map(|&p| sig6(p)));
        rec.extend(fv.counts_fav.iter().map(u32::to_string));
        rec.extend(fv.counts_und.iter().map(u32::to_string));
        rec.push(label_str(fv.label).into());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn parse_features(text: &str, origin: &Path) -> CliResult<Vec<FeatureVector>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let expected = header();
    let headers = reader
        .headers()
        .map_err(|e| CliError::parse(origin, 1, e.to_string()))?;
    if headers.iter().map(str::trim).ne(expected.iter().map(String::as_str)) {
        return Err(CliError::parse(origin, 1, "unexpected features header"));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            CliError::parse(origin, e.position().map_or(0, |p| p.line()), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let perr = |msg: String| CliError::parse(origin, line, msg);
        let mut p = [0.0; WINDOWS];
        let mut counts_fav = [0u32; WINDOWS];
        let mut counts_und = [0u32; WINDOWS];
        for i in 0..WINDOWS {
            p[i] = parse_f64(&record[1 + i], "p-value").map_err(perr)?;
            if !(0.0..=1.0).contains(&p[i]) {
                return Err(CliError::Validation(format!(
                    "{}:{line}: p-value {} outside [0, 1]",
                    origin.display(),
                    p[i]
                )));
            }
            counts_fav[i] = record[1 + WINDOWS + i]
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad count `{}`", &record[1 + WINDOWS + i])))?;
            counts_und[i] = record[1 + 2 * WINDOWS + i]
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad count `{}`", &record[1 + 2 * WINDOWS + i])))?;
        }
        let label = match record[1 + 3 * WINDOWS].trim() {
            "" => None,
            s => Some(ClassLabel::parse(s).ok_or_else(|| perr(format!("unknown label `{s}`")))?),
        };
        out.push(FeatureVector {
            game_id: record[0].trim().to_string(),
            p,
            counts_fav,
            counts_und,
            label,
        });
    }
    Ok(out)
}

pub fn read_features(path: &Path) -> CliResult<Vec<FeatureVector>> {
    parse_features(&crate::fsutil::read_to_string(path)?, path)
}

pub fn write_excluded(rows: &[(String, &'static str)]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["game_id", "reason"]).map_err(csv_err)?;
    for (id, reason) in rows {
        w.write_record([id.as_str(), reason]).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
}
