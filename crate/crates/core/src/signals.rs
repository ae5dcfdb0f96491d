//! In-game signals: per-minute volume and mean sentiment per faction, event
//! annotation, and retweet/mention flows within and between fan groups.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::domain::{Timestamp, TweetRecord};
use crate::error::{Error, Result};
use crate::ingest::Attribution;

pub const GAME_MINUTES: u32 = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    GoalScored,
    PenaltyScored,
    YellowCard,
    RedCard,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::GoalScored => "goal",
            EventKind::PenaltyScored => "penalty",
            EventKind::YellowCard => "yellow",
            EventKind::RedCard => "red",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "goal" | "goal scored" | "goal_scored" => Some(EventKind::GoalScored),
            "penalty" | "penalty scored" | "penalty_scored" => Some(EventKind::PenaltyScored),
            "yellow" | "yellow card" | "yellow_card" => Some(EventKind::YellowCard),
            "red" | "red card" | "red_card" => Some(EventKind::RedCard),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchEvent {
    pub minute: u32,
    pub kind: EventKind,
    pub team: String,
}

/// A scored, attributed in-game tweet.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTweet {
    pub timestamp: Timestamp,
    pub side: Attribution,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MinuteBucket {
    pub minute: u32,
    pub volume: u32,
    pub fav_count: u32,
    pub und_count: u32,
    pub match_count: u32,
    /// `None` when the faction posted nothing that minute.
    pub fav_mean: Option<f64>,
    pub und_mean: Option<f64>,
    pub events: Vec<MatchEvent>,
}

/// One bucket per minute over `[kickoff, kickoff + duration)`.
pub fn minute_series(tweets: &[SignalTweet], kickoff: Timestamp, duration: u32) -> Vec<MinuteBucket> {
    let mut buckets: Vec<MinuteBucket> = (0..duration)
        .map(|minute| MinuteBucket { minute, ..Default::default() })
        .collect();
    let mut sums = alloc::vec![(0.0, 0.0); duration as usize];
    let end = kickoff.offset(duration as i64 * Timestamp::MINUTE);
    for t in tweets {
        if t.timestamp < kickoff || t.timestamp >= end {
            continue;
        }
        let m = ((t.timestamp.0 - kickoff.0) / Timestamp::MINUTE) as usize;
        let b = &mut buckets[m];
        b.volume += 1;
        match t.side {
            Attribution::FavoriteFans => {
                b.fav_count += 1;
                sums[m].0 += t.score;
            }
            Attribution::UnderdogFans => {
                b.und_count += 1;
                sums[m].1 += t.score;
            }
            Attribution::MatchBoth => b.match_count += 1,
            Attribution::Unrelated => {}
        }
    }
    for (b, (fs, us)) in buckets.iter_mut().zip(sums) {
        b.fav_mean = (b.fav_count > 0).then(|| fs / b.fav_count as f64);
        b.und_mean = (b.und_count > 0).then(|| us / b.und_count as f64);
    }
    buckets
}

/// Attaches each event to its minute bucket, keeping input order within a bucket.
/// Minute 120 (the end of the window) lands in the last bucket.
pub fn annotate_events(series: &mut [MinuteBucket], events: &[MatchEvent]) -> Result<()> {
    if let Some(bad) = events.iter().find(|e| e.minute > GAME_MINUTES) {
        return Err(Error::EventOutOfRange(bad.minute));
    }
    if series.is_empty() {
        return Ok(());
    }
    let last = series.len() - 1;
    for e in events {
        series[(e.minute as usize).min(last)].events.push(e.clone());
    }
    Ok(())
}

/// Retweet (RT) and mention (MT) counts between Favorite (F) and Underdog (U) fans;
/// the first letter is the acting group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InteractionCounts {
    pub ffrt: u64,
    pub ffmt: u64,
    pub furt: u64,
    pub fumt: u64,
    pub uurt: u64,
    pub uumt: u64,
    pub ufrt: u64,
    pub ufmt: u64,
}

impl InteractionCounts {
    pub fn total(&self) -> u64 {
        self.ffrt + self.ffmt + self.furt + self.fumt + self.uurt + self.uumt + self.ufrt + self.ufmt
    }

    fn bump(&mut self, from_fav: bool, to_fav: bool, retweet: bool) {
        let slot = match (from_fav, to_fav, retweet) {
            (true, true, true) => &mut self.ffrt,
            (true, true, false) => &mut self.ffmt,
            (true, false, true) => &mut self.furt,
            (true, false, false) => &mut self.fumt,
            (false, false, true) => &mut self.uurt,
            (false, false, false) => &mut self.uumt,
            (false, true, true) => &mut self.ufrt,
            (false, true, false) => &mut self.ufmt,
        };
        *slot += 1;
    }
}

/// Users whose attributed tweets are all on the favorite side, and those whose
/// tweets are all on the underdog side. Anyone else belongs to neither group.
pub fn fan_groups<'a>(
    tweets: impl IntoIterator<Item = (&'a TweetRecord, Attribution)>,
) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut seen: BTreeMap<&str, (bool, bool)> = BTreeMap::new();
    for (t, side) in tweets {
        let entry = seen.entry(t.user_id.as_str()).or_default();
        match side {
            Attribution::FavoriteFans => entry.0 = true,
            Attribution::UnderdogFans => entry.1 = true,
            Attribution::MatchBoth => {
                entry.0 = true;
                entry.1 = true;
            }
            Attribution::Unrelated => {}
        }
    }
    let mut fav = BTreeSet::new();
    let mut und = BTreeSet::new();
    for (user, flags) in seen {
        match flags {
            (true, false) => {
                fav.insert(String::from(user));
            }
            (false, true) => {
                und.insert(String::from(user));
            }
            _ => {}
        }
    }
    (fav, und)
}

/// Counts retweets once per tweet and mentions once per mentioned user. Flows
/// touching a user outside both groups are ignored.
pub fn interaction_counts(
    tweets: &[TweetRecord],
    fav_users: &BTreeSet<String>,
    und_users: &BTreeSet<String>,
) -> Result<InteractionCounts> {
    if let Some(both) = fav_users.intersection(und_users).next() {
        return Err(Error::OverlappingGroups(both.clone()));
    }
    let group = |u: &str| {
        if fav_users.contains(u) {
            Some(true)
        } else if und_users.contains(u) {
            Some(false)
        } else {
            None
        }
    };
    let mut counts = InteractionCounts::default();
    for t in tweets {
        let Some(from) = group(&t.user_id) else { continue };
        if let Some(to) = t.retweeted_user.as_deref().and_then(group) {
            counts.bump(from, to, true);
        }
        for m in &t.mentioned_users {
            if let Some(to) = group(m) {
                counts.bump(from, to, false);
            }
        }
    }
    Ok(counts)
}
