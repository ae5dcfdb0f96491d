//! Validated domain types shared by the whole pipeline.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// UTC instant at second resolution (seconds since the Unix epoch).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub const MINUTE: i64 = 60;
    pub const HOUR: i64 = 3600;

    pub fn seconds(self) -> i64 {
        self.0
    }

    pub fn offset(self, seconds: i64) -> Timestamp {
        Timestamp(self.0 + seconds)
    }
}

/// Decimal odds for the three outcomes of a match. A winning stake `s` at odds
/// `o` returns `s * o`, stake included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddsTriple {
    fav: f64,
    draw: f64,
    und: f64,
}

impl OddsTriple {
    pub fn new(fav: f64, draw: f64, und: f64) -> Result<Self> {
        for value in [fav, draw, und] {
            // NaN fails this comparison too
            if !(value > 1.0) || !value.is_finite() {
                return Err(Error::OddsOutOfRange { value });
            }
        }
        Ok(OddsTriple { fav, draw, und })
    }

    pub fn fav(&self) -> f64 {
        self.fav
    }

    pub fn draw(&self) -> f64 {
        self.draw
    }

    pub fn und(&self) -> f64 {
        self.und
    }

    pub fn max(&self) -> f64 {
        self.fav.max(self.draw).max(self.und)
    }

    pub fn min(&self) -> f64 {
        self.fav.min(self.draw).min(self.und)
    }

    /// Odds of the given outcome.
    pub fn of(&self, outcome: OutcomeKind) -> f64 {
        match outcome {
            OutcomeKind::FavoriteWin => self.fav,
            OutcomeKind::Draw => self.draw,
            OutcomeKind::UnderdogWin => self.und,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.fav, self.draw, self.und]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    FavoriteWin,
    Draw,
    UnderdogWin,
}

impl OutcomeKind {
    pub const ALL: [OutcomeKind; 3] = [
        OutcomeKind::FavoriteWin,
        OutcomeKind::Draw,
        OutcomeKind::UnderdogWin,
    ];

    /// Single-letter code used by the games file (`F`, `D`, `U`).
    pub fn code(self) -> char {
        match self {
            OutcomeKind::FavoriteWin => 'F',
            OutcomeKind::Draw => 'D',
            OutcomeKind::UnderdogWin => 'U',
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "F" => Some(OutcomeKind::FavoriteWin),
            "D" => Some(OutcomeKind::Draw),
            "U" => Some(OutcomeKind::UnderdogWin),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    Baseline,
    Upset,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Baseline => "baseline",
            ClassLabel::Upset => "upset",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "baseline" => Some(ClassLabel::Baseline),
            "upset" => Some(ClassLabel::Upset),
            _ => None,
        }
    }

    pub fn is_upset(self) -> bool {
        self == ClassLabel::Upset
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One match, with the favorite carrying the minimum odds.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub game_id: String,
    pub tournament: String,
    pub favorite: String,
    pub underdog: String,
    pub kickoff: Timestamp,
    pub odds: OddsTriple,
    pub outcome: Option<OutcomeKind>,
}

/// Builds a [`GameRecord`] from raw fields, enforcing the record invariants.
///
/// Ties between the favorite odds and another component are accepted: the input
/// decides which side is the favorite. Only a favorite priced strictly above
/// another outcome is rejected.
#[allow(clippy::too_many_arguments)]
pub fn validate_game(
    game_id: impl Into<String>,
    tournament: impl Into<String>,
    favorite: impl Into<String>,
    underdog: impl Into<String>,
    kickoff: Timestamp,
    odds: [f64; 3],
    outcome: Option<OutcomeKind>,
) -> Result<GameRecord> {
    let [fav, draw, und] = odds;
    let odds = OddsTriple::new(fav, draw, und)?;
    if fav > draw || fav > und {
        return Err(Error::FavoriteNotMinimum { fav, draw, und });
    }
    let favorite = favorite.into();
    let underdog = underdog.into();
    if favorite == underdog {
        return Err(Error::SameTeams(favorite));
    }
    Ok(GameRecord {
        game_id: game_id.into(),
        tournament: tournament.into(),
        favorite,
        underdog,
        kickoff,
        odds,
        outcome,
    })
}

/// One social-media message.
#[derive(Debug, Clone, PartialEq)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub timestamp: Timestamp,
    pub user_id: String,
    pub text: String,
    pub hashtags: Vec<String>,
    pub retweeted_user: Option<String>,
    pub mentioned_users: Vec<String>,
    pub precomputed_sentiment: Option<f64>,
}

impl TweetRecord {
    /// Creates a tweet, normalizing hashtags to lowercase without the leading `#`.
    pub fn new(
        tweet_id: impl Into<String>,
        timestamp: Timestamp,
        user_id: impl Into<String>,
        text: impl Into<String>,
        hashtags: impl IntoIterator<Item = impl AsRef<str>>,
    ) -> Self {
        TweetRecord {
            tweet_id: tweet_id.into(),
            timestamp,
            user_id: user_id.into(),
            text: text.into(),
            hashtags: hashtags
                .into_iter()
                .map(|h| normalize_hashtag(h.as_ref()))
                .filter(|h| !h.is_empty())
                .collect(),
            retweeted_user: None,
            mentioned_users: Vec::new(),
            precomputed_sentiment: None,
        }
    }

    pub fn with_sentiment(mut self, score: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::ScoreOutOfRange(score));
        }
        self.precomputed_sentiment = Some(score);
        Ok(self)
    }

    pub fn with_retweet_of(mut self, user: impl Into<String>) -> Self {
        self.retweeted_user = Some(user.into());
        self
    }

    pub fn with_mentions(mut self, users: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.mentioned_users = users.into_iter().map(Into::into).collect();
        self
    }
}

pub fn normalize_hashtag(tag: &str) -> String {
    tag.trim().trim_start_matches('#').to_lowercase()
}
