//! Attribution of tweets to fan factions and pre-game slicing.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::domain::{normalize_hashtag, GameRecord, Timestamp, TweetRecord};
use crate::error::{Error, Result};

/// Length of the pre-game period, in seconds.
pub const PREGAME_SECONDS: i64 = 6 * Timestamp::HOUR;
pub const PREGAME_HOURS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attribution {
    FavoriteFans,
    UnderdogFans,
    MatchBoth,
    Unrelated,
}

/// Hashtags identifying each side of one game, plus tags naming the match itself.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TeamTags {
    favorite: BTreeSet<String>,
    underdog: BTreeSet<String>,
    combined: BTreeSet<String>,
}

impl TeamTags {
    pub fn new(
        favorite: impl IntoIterator<Item = impl AsRef<str>>,
        underdog: impl IntoIterator<Item = impl AsRef<str>>,
        combined: impl IntoIterator<Item = impl AsRef<str>>,
    ) -> Result<Self> {
        let norm = |it: &mut dyn Iterator<Item = String>| -> BTreeSet<String> {
            it.filter(|t| !t.is_empty()).collect()
        };
        let favorite = norm(&mut favorite.into_iter().map(|t| normalize_hashtag(t.as_ref())));
        let underdog = norm(&mut underdog.into_iter().map(|t| normalize_hashtag(t.as_ref())));
        let combined = norm(&mut combined.into_iter().map(|t| normalize_hashtag(t.as_ref())));
        if let Some(shared) = favorite.intersection(&underdog).next() {
            return Err(Error::InvalidConfig(format!(
                "hashtag `{shared}` assigned to both teams"
            )));
        }
        if let Some(shared) = combined
            .iter()
            .find(|t| favorite.contains(*t) || underdog.contains(*t))
        {
            return Err(Error::InvalidConfig(format!(
                "match hashtag `{shared}` is also a team hashtag"
            )));
        }
        Ok(TeamTags {
            favorite,
            underdog,
            combined,
        })
    }

    /// Tags from two team abbreviations: each abbreviation for its side and
    /// `favvsund` / `undvsfav` for the match.
    pub fn from_abbreviations(favorite: &str, underdog: &str) -> Result<Self> {
        let f = normalize_hashtag(favorite);
        let u = normalize_hashtag(underdog);
        TeamTags::new(
            [f.clone()],
            [u.clone()],
            [format!("{f}vs{u}"), format!("{u}vs{f}")],
        )
    }

    pub fn favorite(&self) -> &BTreeSet<String> {
        &self.favorite
    }

    pub fn underdog(&self) -> &BTreeSet<String> {
        &self.underdog
    }

    pub fn combined(&self) -> &BTreeSet<String> {
        &self.combined
    }
}

pub fn attribute_tweet(tweet: &TweetRecord, tags: &TeamTags) -> Attribution {
    let mut fav = false;
    let mut und = false;
    for tag in &tweet.hashtags {
        if tags.combined.contains(tag) {
            return Attribution::MatchBoth;
        }
        fav |= tags.favorite.contains(tag);
        und |= tags.underdog.contains(tag);
    }
    match (fav, und) {
        (true, true) => Attribution::MatchBoth,
        (true, false) => Attribution::FavoriteFans,
        (false, true) => Attribution::UnderdogFans,
        (false, false) => Attribution::Unrelated,
    }
}

/// Tweets in `[kickoff - 6h, kickoff)`, ascending by timestamp (stable).
pub fn pregame_slice(tweets: &[TweetRecord], kickoff: Timestamp) -> Vec<TweetRecord> {
    let start = kickoff.offset(-PREGAME_SECONDS);
    let mut out: Vec<TweetRecord> = tweets
        .iter()
        .filter(|t| t.timestamp >= start && t.timestamp < kickoff)
        .cloned()
        .collect();
    out.sort_by_key(|t| t.timestamp);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VolumeMode {
    /// Average rate over the whole pre-game period.
    #[default]
    Average,
    /// Every one-hour bucket must reach the rate on its own.
    EveryHour,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeConfig {
    pub min_rate: f64,
    pub mode: VolumeMode,
}

impl Default for VolumeConfig {
    fn default() -> Self {
        VolumeConfig {
            min_rate: 40.0,
            mode: VolumeMode::Average,
        }
    }
}

/// Tweets of one game's pre-game period, split by faction.
#[derive(Debug, Clone, PartialEq)]
pub struct GameCorpus {
    pub game_id: String,
    pub kickoff: Timestamp,
    pub favorite_tweets: Vec<TweetRecord>,
    pub underdog_tweets: Vec<TweetRecord>,
    pub match_tweets: Vec<TweetRecord>,
    volume_passed: Option<bool>,
}

impl GameCorpus {
    pub fn empty(game_id: impl Into<String>, kickoff: Timestamp) -> Self {
        GameCorpus {
            game_id: game_id.into(),
            kickoff,
            favorite_tweets: Vec::new(),
            underdog_tweets: Vec::new(),
            match_tweets: Vec::new(),
            volume_passed: None,
        }
    }

    /// `[start, end)` of the pre-game window.
    pub fn window(&self) -> (Timestamp, Timestamp) {
        (self.kickoff.offset(-PREGAME_SECONDS), self.kickoff)
    }

    /// Runs [`volume_filter`] and remembers the verdict.
    pub fn apply_volume_filter(&mut self, cfg: &VolumeConfig) -> bool {
        let pass = volume_filter(self, cfg);
        self.volume_passed = Some(pass);
        pass
    }

    /// `None` until [`GameCorpus::apply_volume_filter`] has run.
    pub fn volume_passed(&self) -> Option<bool> {
        self.volume_passed
    }

    pub fn len(&self) -> usize {
        self.favorite_tweets.len() + self.underdog_tweets.len() + self.match_tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn volume_filter(corpus: &GameCorpus, cfg: &VolumeConfig) -> bool {
    let side_ok = |tweets: &[TweetRecord]| match cfg.mode {
        VolumeMode::Average => tweets.len() as f64 >= cfg.min_rate * PREGAME_HOURS as f64,
        VolumeMode::EveryHour => {
            let (start, _) = corpus.window();
            let mut buckets = [0usize; PREGAME_HOURS as usize];
            for t in tweets {
                let h = (t.timestamp.0 - start.0).div_euclid(Timestamp::HOUR);
                if (0..PREGAME_HOURS as i64).contains(&h) {
                    buckets[h as usize] += 1;
                }
            }
            buckets.iter().all(|&n| n as f64 >= cfg.min_rate)
        }
    };
    side_ok(&corpus.favorite_tweets) && side_ok(&corpus.underdog_tweets)
}

/// Slices, attributes and partitions `tweets` for one game. Unrelated tweets are
/// dropped; each list is ordered by `(timestamp, tweet_id)`.
pub fn build_corpus(
    game: &GameRecord,
    tweets: &[TweetRecord],
    tags: &TeamTags,
) -> Result<GameCorpus> {
    let mut seen = BTreeSet::new();
    for t in tweets {
        if !seen.insert(t.tweet_id.as_str()) {
            return Err(Error::DuplicateTweetId(t.tweet_id.clone()));
        }
    }
    let mut sliced = pregame_slice(tweets, game.kickoff);
    sliced.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.tweet_id.cmp(&b.tweet_id))
    });

    let mut corpus = GameCorpus::empty(game.game_id.clone(), game.kickoff);
    for t in sliced {
        match attribute_tweet(&t, tags) {
            Attribution::FavoriteFans => corpus.favorite_tweets.push(t),
            Attribution::UnderdogFans => corpus.underdog_tweets.push(t),
            Attribution::MatchBoth => corpus.match_tweets.push(t),
            Attribution::Unrelated => {}
        }
    }
    Ok(corpus)
}
