//! Lexicon files (`word<TAB>valence`, valence in `[-1, 1]`, `#` comments) and
//! labeled sentiment benchmark corpora (`label<TAB>text` with a
//! `label\ttext` header, label one of `negative`, `neutral`, `positive`).

use std::path::Path;

use upset_core::sentiment::{Lexicon, Polarity};

use super::parse_f64;
use crate::error::{CliError, CliResult};

const BUILTIN: &str = include_str!("../../data/lexicon.tsv");
pub const BUILTIN_BENCH: &str = include_str!("../../data/bench_sentiment.tsv");

pub fn parse_lexicon(text: &str, origin: &Path) -> CliResult<Lexicon> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |msg: String| CliError::parse(origin, i as u64 + 1, msg);
        let (word, valence) = line
            .split_once('\t')
            .ok_or_else(|| perr("expected `word<TAB>valence`".into()))?;
        entries.push((word.trim().to_string(), parse_f64(valence, "valence").map_err(perr)?));
    }
    Ok(Lexicon::new(entries)?)
}

pub fn read_lexicon(path: &Path) -> CliResult<Lexicon> {
    parse_lexicon(&crate::fsutil::read_to_string(path)?, path)
}

/// The lexicon shipped with the tool.
pub fn builtin() -> CliResult<Lexicon> {
    parse_lexicon(BUILTIN, Path::new("<builtin lexicon>"))
}

pub fn parse_bench(text: &str, origin: &Path) -> CliResult<Vec<(String, Polarity)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if (i == 0 && line == "label\ttext") || line.trim().is_empty() {
            continue;
        }
        let perr = |msg: String| CliError::parse(origin, i as u64 + 1, msg);
        let (label, body) = line
            .split_once('\t')
            .ok_or_else(|| perr("expected `label<TAB>text`".into()))?;
        let label = Polarity::parse(label.trim())
            .ok_or_else(|| perr(format!("unknown label `{label}`")))?;
        out.push((body.to_string(), label));
    }
    Ok(out)
}

pub fn read_bench(path: &Path) -> CliResult<Vec<(String, Polarity)>> {
    parse_bench(&crate::fsutil::read_to_string(path)?, path)
}
