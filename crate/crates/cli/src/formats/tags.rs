//! Tags file: tab-separated `kind  key  hashtags` after a header line.
//!
//! * `team  <team name>  <tag;tag;...>` lists a team's hashtags.
//! * `match  <game_id>  <tag;tag;...>` adds match hashtags for one game.
//!
//! Every combination `{fav_tag}vs{und_tag}` and `{und_tag}vs{fav_tag}` is a match
//! hashtag automatically.

use std::collections::BTreeMap;
use std::path::Path;

use upset_core::ingest::TeamTags;
use upset_core::GameRecord;

use crate::error::{CliError, CliResult};

pub const HEADER: &str = "kind\tkey\thashtags";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TagsFile {
    pub teams: BTreeMap<String, Vec<String>>,
    pub matches: BTreeMap<String, Vec<String>>,
}

impl TagsFile {
    /// Hashtag sets for `game`; a team without a `team` row is a validation error.
    pub fn for_game(&self, game: &GameRecord) -> CliResult<TeamTags> {
        let side = |team: &str| {
            self.teams.get(team).ok_or_else(|| {
                CliError::Validation(format!("no hashtags for team `{team}` (game {})", game.game_id))
            })
        };
        let fav = side(&game.favorite)?;
        let und = side(&game.underdog)?;
        let mut combined: Vec<String> = self.matches.get(&game.game_id).cloned().unwrap_or_default();
        for f in fav {
            for u in und {
                combined.push(format!("{f}vs{u}"));
                combined.push(format!("{u}vs{f}"));
            }
        }
        Ok(TeamTags::new(fav, und, combined)?)
    }
}

pub fn parse_tags(text: &str, origin: &Path) -> CliResult<TagsFile> {
    let mut out = TagsFile::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if (i == 0 && line == HEADER) || line.trim().is_empty() {
            continue;
        }
        let perr = |msg: String| CliError::parse(origin, i as u64 + 1, msg);
        let fields: Vec<&str> = line.split('\t').collect();
        let [kind, key, tags] = fields[..] else {
            return Err(perr(format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(perr("empty key".into()));
        }
        let tags: Vec<String> = tags
            .split(';')
            .map(upset_core::domain::normalize_hashtag)
            .filter(|t| !t.is_empty())
            .collect();
        let target = match kind.trim() {
            "team" => &mut out.teams,
            "match" => &mut out.matches,
            other => return Err(perr(format!("kind `{other}` is not team or match"))),
        };
        target.entry(key.to_string()).or_default().extend(tags);
    }
    Ok(out)
}

pub fn read_tags(path: &Path) -> CliResult<TagsFile> {
    parse_tags(&crate::fsutil::read_to_string(path)?, path)
}

pub fn write_tags(tags: &TagsFile) -> Vec<u8> {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (kind, map) in [("team", &tags.teams), ("match", &tags.matches)] {
        for (key, list) in map {
            out.push_str(&format!("{kind}\t{key}\t{}\n", list.join(";")));
        }
    }
    out.into_bytes()
}
