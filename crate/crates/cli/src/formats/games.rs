//! Games file: UTF-8 CSV with header
//! `game_id,tournament,favorite,underdog,kickoff_utc,odds_fav,odds_draw,odds_und,outcome`.
//! Kickoff is RFC 3339, odds carry at most 4 decimals, outcome is `F`, `D`, `U`
//! or empty when unknown.

use std::path::Path;

use upset_core::{validate_game, GameRecord, OutcomeKind};

use super::{format_timestamp, parse_f64, parse_timestamp};
use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 9] = [
    "game_id",
    "tournament",
    "favorite",
    "underdog",
    "kickoff_utc",
    "odds_fav",
    "odds_draw",
    "odds_und",
    "outcome",
];

pub fn parse_games(text: &str, origin: &Path) -> CliResult<Vec<GameRecord>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::parse(origin, 1, e.to_string()))?
        .clone();
    if headers.iter().map(str::trim).ne(HEADER) {
        return Err(CliError::parse(
            origin,
            1,
            format!("expected header `{}`", HEADER.join(",")),
        ));
    }
    let mut games = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::parse(origin, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let perr = |msg: String| CliError::parse(origin, line, msg);
        let field = |i: usize| record.get(i).unwrap_or("").trim();
        let kickoff = parse_timestamp(field(4)).map_err(perr)?;
        let odds = [
            parse_f64(field(5), "odds_fav").map_err(perr)?,
            parse_f64(field(6), "odds_draw").map_err(perr)?,
            parse_f64(field(7), "odds_und").map_err(perr)?,
        ];
        let outcome = match field(8) {
            "" | "∅" => None,
            code => Some(
                OutcomeKind::from_code(code)
                    .ok_or_else(|| perr(format!("outcome `{code}` is not F, D, U or empty")))?,
            ),
        };
        let game = validate_game(field(0), field(1), field(2), field(3), kickoff, odds, outcome)
            .map_err(|e| CliError::Validation(format!("{}:{line}: {e}", origin.display())))?;
        games.push(game);
    }
    Ok(games)
}

pub fn read_games(path: &Path) -> CliResult<Vec<GameRecord>> {
    parse_games(&crate::fsutil::read_to_string(path)?, path)
}

pub fn game_fields(g: &GameRecord) -> [String; 9] {
    [
        g.game_id.clone(),
        g.tournament.clone(),
        g.favorite.clone(),
        g.underdog.clone(),
        format_timestamp(g.kickoff),
        format!("{:.4}", g.odds.fav()),
        format!("{:.4}", g.odds.draw()),
        format!("{:.4}", g.odds.und()),
        g.outcome.map(|o| o.code().to_string()).unwrap_or_default(),
    ]
}

pub fn write_games(games: &[GameRecord]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Runtime(e.to_string());
    w.write_record(HEADER).map_err(csv_err)?;
    for g in games {
        w.write_record(game_fields(g)).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
}
