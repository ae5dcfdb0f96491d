//! Seeded synthetic corpora with a controllable pre-game sentiment gap.
//!
//! Baseline games get a favorite-minus-underdog shift of `gap_effect` in the
//! configured windows; upset games get none. Outcomes follow the labels (baseline
//! games are won by the favorite, upsets end in a draw or an underdog win in equal
//! numbers) and the odds are priced from the population outcome frequencies plus a
//! bookmaker margin, so the pricing itself carries no information about a game.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::domain::{validate_game, ClassLabel, GameRecord, OutcomeKind, Timestamp, TweetRecord};
use crate::error::{Error, Result};
use crate::features::{window_partition, WINDOWS};
use crate::odds::{potential_upset_score, upset_score};
use crate::rng;

/// 2014-10-25T18:00:00Z
pub const DEFAULT_FIRST_KICKOFF: Timestamp = Timestamp(1_414_260_000);

const ODDS_JITTER: f64 = 0.05;
const MAX_ODDS_DRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddsModel {
    /// Every generated game has `PU > pu_min`.
    pub pu_min: f64,
    /// Implied probabilities sum to `1 + margin`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_games: usize,
    pub upset_fraction: f64,
    /// 1-based window indices carrying the baseline sentiment gap.
    pub gap_windows: Vec<usize>,
    pub gap_effect: f64,
    pub tweets_per_side_per_window: usize,
    pub match_tweets_per_window: usize,
    pub score_noise_sd: f64,
    pub odds_model: OddsModel,
    /// Labeling threshold the outcomes must be consistent with.
    pub theta: f64,
    pub first_kickoff: Timestamp,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_games: 60,
            upset_fraction: 0.33,
            gap_windows: alloc::vec![10, 11],
            gap_effect: 0.3,
            tweets_per_side_per_window: 200,
            match_tweets_per_window: 2,
            score_noise_sd: 0.15,
            odds_model: OddsModel {
                pu_min: 6.0,
                margin: 0.05,
            },
            theta: 5.0,
            first_kickoff: DEFAULT_FIRST_KICKOFF,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_games == 0 {
            return bad("n_games must be positive".into());
        }
        if !(self.upset_fraction > 0.0 && self.upset_fraction < 1.0) {
            return bad(format!("upset_fraction {} outside (0, 1)", self.upset_fraction));
        }
        if let Some(w) = self.gap_windows.iter().find(|&&w| !(1..=WINDOWS).contains(&w)) {
            return bad(format!("gap window {w} outside 1..={WINDOWS}"));
        }
        if !(self.gap_effect >= 0.0 && self.gap_effect.is_finite()) {
            return bad(format!("gap_effect {} must be >= 0", self.gap_effect));
        }
        if self.tweets_per_side_per_window == 0 {
            return bad("tweets_per_side_per_window must be positive".into());
        }
        if !(self.score_noise_sd > 0.0 && self.score_noise_sd.is_finite()) {
            return bad(format!("score_noise_sd {} must be > 0", self.score_noise_sd));
        }
        if !(self.theta > 1.0) {
            return bad(format!("theta {} must exceed 1", self.theta));
        }
        if !(self.odds_model.pu_min > self.theta) {
            return bad(format!(
                "pu_min {} must exceed theta {}",
                self.odds_model.pu_min, self.theta
            ));
        }
        if !(0.0..0.2).contains(&self.odds_model.margin) {
            return bad(format!("margin {} outside [0, 0.2)", self.odds_model.margin));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub games: Vec<GameRecord>,
    /// All tweets, ordered by `(timestamp, tweet_id)`.
    pub tweets: Vec<TweetRecord>,
    pub labels: Vec<ClassLabel>,
    /// `(team, hashtags)` for every team.
    pub team_tags: Vec<(String, Vec<String>)>,
    /// Scores moved by clamping to `[0, 1]`, and the largest such move.
    pub clamped: usize,
    pub max_clamp_shift: f64,
}

fn quantize(x: f64, decimals: i32) -> f64 {
    let scale = libm::pow(10.0, decimals as f64);
    libm::round(x * scale) / scale
}

fn draw_odds(cfg: &SynthConfig, rng: &mut rng::Rng) -> Result<[f64; 3]> {
    let base_fav = 1.0 - cfg.upset_fraction;
    let vig = 1.0 + cfg.odds_model.margin;
    for _ in 0..MAX_ODDS_DRAWS {
        let p_fav = base_fav * (1.0 + ODDS_JITTER * (2.0 * rng.random::<f64>() - 1.0));
        let split = 0.5 + ODDS_JITTER * (2.0 * rng.random::<f64>() - 1.0);
        let p_draw = (1.0 - p_fav) * split;
        let p_und = (1.0 - p_fav) * (1.0 - split);
        let odds = [p_fav, p_draw, p_und].map(|p| quantize(1.0 / (p * vig), 4));
        let Ok(triple) = crate::domain::OddsTriple::new(odds[0], odds[1], odds[2]) else {
            continue;
        };
        let fav_is_min = odds[0] <= odds[1] && odds[0] <= odds[2];
        // both upset outcomes must label as upsets
        let min_upset = upset_score(&triple, OutcomeKind::Draw)
            .min(upset_score(&triple, OutcomeKind::UnderdogWin));
        if fav_is_min
            && min_upset > cfg.theta
            && potential_upset_score(&triple) > cfg.odds_model.pu_min
        {
            return Ok(odds);
        }
    }
    Err(Error::InvalidConfig(format!(
        "odds model cannot reach PU > {} with upset_fraction {}",
        cfg.odds_model.pu_min, cfg.upset_fraction
    )))
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthCorpus> {
    cfg.validate()?;
    let mut rng = rng::seeded(cfg.seed);
    let n = cfg.n_games;

    let n_upsets = (libm::round(cfg.upset_fraction * n as f64) as usize).min(n);
    let mut labels: Vec<ClassLabel> = (0..n)
        .map(|i| if i < n_upsets { ClassLabel::Upset } else { ClassLabel::Baseline })
        .collect();
    labels.shuffle(&mut rng);

    // upsets split evenly between draws and underdog wins
    let mut upset_outcomes: Vec<OutcomeKind> = (0..n_upsets)
        .map(|i| if i % 2 == 0 { OutcomeKind::Draw } else { OutcomeKind::UnderdogWin })
        .collect();
    upset_outcomes.shuffle(&mut rng);
    let mut upset_outcomes = upset_outcomes.into_iter();

    let noise = Normal::new(0.0, cfg.score_noise_sd)
        .map_err(|e| Error::InvalidConfig(format!("score noise: {e}")))?;

    let mut games = Vec::with_capacity(n);
    let mut tweets = Vec::new();
    let mut team_tags = Vec::with_capacity(2 * n);
    let mut clamped = 0usize;
    let mut max_clamp_shift: f64 = 0.0;

    for (g, &label) in labels.iter().enumerate() {
        let outcome = match label {
            ClassLabel::Baseline => OutcomeKind::FavoriteWin,
            ClassLabel::Upset => upset_outcomes.next().unwrap_or(OutcomeKind::Draw),
        };
        let odds = draw_odds(cfg, &mut rng)?;
        let favorite = format!("F{g:03}");
        let underdog = format!("U{g:03}");
        let fav_tag = favorite.to_lowercase();
        let und_tag = underdog.to_lowercase();
        let kickoff = cfg.first_kickoff.offset(g as i64 * 24 * Timestamp::HOUR);
        let game = validate_game(
            format!("G{g:03}"),
            "synthetic",
            favorite.clone(),
            underdog.clone(),
            kickoff,
            odds,
            Some(outcome),
        )?;

        let base_mean = 0.4 + 0.2 * rng.random::<f64>();
        let mut serial = 0usize;
        let mut push = |tweets: &mut Vec<TweetRecord>, ts: Timestamp, user: String, tag: &str, score: f64| {
            serial += 1;
            let t = TweetRecord::new(format!("G{g:03}-{serial:06}"), ts, user, "", [tag])
                .with_sentiment(score)?;
            tweets.push(t);
            Ok::<(), Error>(())
        };
        for window in window_partition(kickoff) {
            let gap = if label == ClassLabel::Baseline && cfg.gap_windows.contains(&window.index) {
                cfg.gap_effect / 2.0
            } else {
                0.0
            };
            let span = window.end.0 - window.start.0;
            for (side_mean, tag, prefix) in [
                (base_mean + gap, fav_tag.as_str(), 'f'),
                (base_mean - gap, und_tag.as_str(), 'u'),
            ] {
                for _ in 0..cfg.tweets_per_side_per_window {
                    let ts = window.start.offset(rng.random_range(0..span));
                    let raw = side_mean + noise.sample(&mut rng);
                    let score = quantize(raw.clamp(0.0, 1.0), 6);
                    if !(0.0..=1.0).contains(&raw) {
                        clamped += 1;
                        max_clamp_shift = max_clamp_shift.max((raw - raw.clamp(0.0, 1.0)).abs());
                    }
                    let user = format!("{prefix}{g:03}-{}", rng.random_range(0..50u32));
                    push(&mut tweets, ts, user, tag, score)?;
                }
            }
            let match_tag = format!("{fav_tag}vs{und_tag}");
            for _ in 0..cfg.match_tweets_per_window {
                let ts = window.start.offset(rng.random_range(0..span));
                let score = quantize(rng.random::<f64>(), 6);
                let user = format!("m{g:03}-{}", rng.random_range(0..50u32));
                push(&mut tweets, ts, user, &match_tag, score)?;
            }
        }
        team_tags.push((favorite, alloc::vec![fav_tag]));
        team_tags.push((underdog, alloc::vec![und_tag]));
        games.push(game);
    }
    tweets.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.tweet_id.cmp(&b.tweet_id))
    });

    Ok(SynthCorpus {
        games,
        tweets,
        labels,
        team_tags,
        clamped,
        max_clamp_shift,
    })
}
