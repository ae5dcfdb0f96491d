//! On-disk formats. Readers report the 1-based line of the first bad record.

pub mod events;
pub mod features;
pub mod games;
pub mod lexicon;
pub mod reports;
pub mod tags;
pub mod tweets;

use chrono::{DateTime, SecondsFormat, Utc};
use upset_core::Timestamp;

/// RFC 3339 with whole seconds and a `Z` suffix.
pub fn format_timestamp(t: Timestamp) -> String {
    DateTime::<Utc>::from_timestamp(t.seconds(), 0)
        .map(|d| d.to_rfc3339_opts(SecondsFormat::Secs, true))
        .unwrap_or_else(|| t.seconds().to_string())
}

pub fn parse_timestamp(s: &str) -> Result<Timestamp, String> {
    let dt = DateTime::parse_from_rfc3339(s.trim())
        .map_err(|e| format!("bad RFC 3339 timestamp `{s}`: {e}"))?;
    if dt.timestamp_subsec_nanos() != 0 {
        return Err(format!("timestamp `{s}` has sub-second precision"));
    }
    Ok(Timestamp(dt.timestamp()))
}

/// Six significant digits, in scientific notation (`1.23457e-5`).
pub fn sig6(x: f64) -> String {
    format!("{x:.5e}")
}

pub fn parse_f64(field: &str, what: &str) -> Result<f64, String> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| format!("{what}: cannot parse `{field}` as a number"))?;
    if v.is_nan() {
        return Err(format!("{what}: NaN"));
    }
    Ok(v)
}
