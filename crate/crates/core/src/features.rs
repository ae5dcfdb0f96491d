//! Per-window sentiment-gap features.
//!
//! The six hours before kickoff are cut into twelve 30-minute windows. In each
//! window the favorite-fan and underdog-fan sentiment scores are compared with a
//! two-sided Mann-Whitney U test, and the twelve p-values form the game's feature
//! vector. Match-level tweets (naming both teams) are not used.

use alloc::string::String;
use alloc::vec::Vec;

use crate::domain::{ClassLabel, Timestamp, TweetRecord};
use crate::error::{Error, Result};
use crate::ingest::GameCorpus;
use crate::sentiment::ScorerSpec;
use crate::stats::{mann_whitney_u, UTestConfig};

pub const WINDOWS: usize = 12;
pub const WINDOW_SECONDS: i64 = 30 * Timestamp::MINUTE;

/// Window `index` (1-based) covering `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowIndex {
    pub index: usize,
    pub start: Timestamp,
    pub end: Timestamp,
}

impl WindowIndex {
    pub fn contains(&self, t: Timestamp) -> bool {
        t >= self.start && t < self.end
    }
}

pub fn window_partition(kickoff: Timestamp) -> [WindowIndex; WINDOWS] {
    core::array::from_fn(|k| {
        let i = k as i64 + 1;
        WindowIndex {
            index: k + 1,
            start: kickoff.offset(-(13 - i) * WINDOW_SECONDS),
            end: kickoff.offset(-(12 - i) * WINDOW_SECONDS),
        }
    })
}

/// Zero-based window slot of `t`, if it falls in the pre-game period.
pub fn window_slot(kickoff: Timestamp, t: Timestamp) -> Option<usize> {
    let before = kickoff.0 - t.0;
    if before <= 0 || before > WINDOWS as i64 * WINDOW_SECONDS {
        return None;
    }
    // before in (0, 6h]; the window ending at kickoff holds before in (0, 30min]
    let from_end = (before - 1) / WINDOW_SECONDS;
    Some(WINDOWS - 1 - from_end as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureConfig {
    pub utest: UTestConfig,
    /// Windows where either side has fewer tweets get `p = 1`.
    pub min_per_window: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            utest: UTestConfig::default(),
            min_per_window: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub game_id: String,
    pub p: [f64; WINDOWS],
    pub counts_fav: [u32; WINDOWS],
    pub counts_und: [u32; WINDOWS],
    pub label: Option<ClassLabel>,
}

impl FeatureVector {
    /// Windows where a side had fewer than `min_per_window` tweets.
    pub fn degenerate(&self, min_per_window: usize) -> [bool; WINDOWS] {
        core::array::from_fn(|i| {
            (self.counts_fav[i] as usize) < min_per_window
                || (self.counts_und[i] as usize) < min_per_window
        })
    }
}

fn scores_by_window(
    kickoff: Timestamp,
    tweets: &[TweetRecord],
    scorer: &ScorerSpec,
) -> Result<[Vec<f64>; WINDOWS]> {
    let mut out: [Vec<f64>; WINDOWS] = Default::default();
    for t in tweets {
        if let Some(slot) = window_slot(kickoff, t.timestamp) {
            out[slot].push(scorer.score_tweet(t)?.value());
        }
    }
    Ok(out)
}

pub fn feature_vector(
    corpus: &GameCorpus,
    scorer: &ScorerSpec,
    cfg: &FeatureConfig,
) -> Result<FeatureVector> {
    if corpus.volume_passed() != Some(true) {
        return Err(Error::CorpusNotFiltered(corpus.game_id.clone()));
    }
    let fav = scores_by_window(corpus.kickoff, &corpus.favorite_tweets, scorer)?;
    let und = scores_by_window(corpus.kickoff, &corpus.underdog_tweets, scorer)?;
    let mut p = [1.0; WINDOWS];
    for i in 0..WINDOWS {
        if fav[i].len() >= cfg.min_per_window.max(1) && und[i].len() >= cfg.min_per_window.max(1)
        {
            p[i] = mann_whitney_u(&fav[i], &und[i], &cfg.utest)?.p_value;
        }
    }
    Ok(FeatureVector {
        game_id: corpus.game_id.clone(),
        p,
        counts_fav: core::array::from_fn(|i| fav[i].len() as u32),
        counts_und: core::array::from_fn(|i| und[i].len() as u32),
        label: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WindowPass {
    pub upset_pass: usize,
    pub upset_total: usize,
    pub baseline_pass: usize,
    pub baseline_total: usize,
}

/// Per window, how many upset and baseline games reach `p < alpha`.
pub fn significance_table(
    features: &[FeatureVector],
    alpha: f64,
) -> Result<[WindowPass; WINDOWS]> {
    let mut table = [WindowPass::default(); WINDOWS];
    for fv in features {
        let label = fv
            .label
            .ok_or_else(|| Error::UnlabeledGame(fv.game_id.clone()))?;
        for (row, &p) in table.iter_mut().zip(&fv.p) {
            let pass = usize::from(p < alpha);
            match label {
                ClassLabel::Upset => {
                    row.upset_total += 1;
                    row.upset_pass += pass;
                }
                ClassLabel::Baseline => {
                    row.baseline_total += 1;
                    row.baseline_pass += pass;
                }
            }
        }
    }
    Ok(table)
}
