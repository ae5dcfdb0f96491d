//! Match events: CSV with header `minute,kind,team`; kind is one of
//! `goal`, `penalty`, `yellow`, `red`.

use std::path::Path;

use upset_core::signals::{EventKind, MatchEvent};

use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 3] = ["minute", "kind", "team"];

pub fn parse_events(text: &str, origin: &Path) -> CliResult<Vec<MatchEvent>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::parse(origin, 1, e.to_string()))?;
    if headers.iter().map(str::trim).ne(HEADER) {
        return Err(CliError::parse(origin, 1, format!("expected header `{}`", HEADER.join(","))));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            CliError::parse(origin, e.position().map_or(0, |p| p.line()), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let perr = |msg: String| CliError::parse(origin, line, msg);
        let minute: u32 = record[0]
            .trim()
            .parse()
            .map_err(|_| perr(format!("bad minute `{}`", &record[0])))?;
        let kind = EventKind::parse(record[1].trim())
            .ok_or_else(|| perr(format!("unknown event kind `{}`", &record[1])))?;
        out.push(MatchEvent {
            minute,
            kind,
            team: record[2].trim().to_string(),
        });
    }
    Ok(out)
}

pub fn read_events(path: &Path) -> CliResult<Vec<MatchEvent>> {
    parse_events(&crate::fsutil::read_to_string(path)?, path)
}
