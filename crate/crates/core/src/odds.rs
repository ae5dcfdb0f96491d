//! Upset scoring from decimal odds.
//!
//! The potential upset score `PU = (O_max - 1) / (O_min - 1)` measures how lopsided
//! the bookmakers consider a game; the upset score `U = (O_realized - 1) / (O_min - 1)`
//! measures how unexpected the realized outcome was. Both use net returns, so a
//! game whose minimum-odds outcome materializes scores exactly 1.

use alloc::vec::Vec;

use crate::domain::{ClassLabel, GameRecord, OddsTriple, OutcomeKind};
use crate::error::{Error, Result};

/// Potential-upset threshold used by the selection and labeling steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionConfig {
    theta: f64,
}

impl SelectionConfig {
    pub const DEFAULT_THETA: f64 = 5.0;

    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 1.0) || !theta.is_finite() {
            return Err(Error::InvalidConfig(alloc::format!(
                "theta must be a finite value > 1, got {theta}"
            )));
        }
        Ok(SelectionConfig { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            theta: Self::DEFAULT_THETA,
        }
    }
}

/// A potential upset with its scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredGame {
    pub game: GameRecord,
    pub pu: f64,
    /// Present iff the game outcome is known.
    pub u: Option<f64>,
    pub label: Option<ClassLabel>,
}

impl ScoredGame {
    pub fn score(game: GameRecord) -> Self {
        let pu = potential_upset_score(&game.odds);
        let u = game.outcome.map(|o| upset_score(&game.odds, o));
        ScoredGame {
            game,
            pu,
            u,
            label: None,
        }
    }
}

pub fn potential_upset_score(odds: &OddsTriple) -> f64 {
    (odds.max() - 1.0) / (odds.min() - 1.0)
}

pub fn upset_score(odds: &OddsTriple, outcome: OutcomeKind) -> f64 {
    (odds.of(outcome) - 1.0) / (odds.min() - 1.0)
}

/// Games with `PU > theta`, scored, in input order.
pub fn select_potential_upsets(games: &[GameRecord], cfg: &SelectionConfig) -> Vec<ScoredGame> {
    games
        .iter()
        .filter(|g| potential_upset_score(&g.odds) > cfg.theta)
        .cloned()
        .map(ScoredGame::score)
        .collect()
}

/// `Upset` iff `U > theta` (strict).
pub fn label_game(scored: &ScoredGame, cfg: &SelectionConfig) -> Result<ClassLabel> {
    let u = scored
        .u
        .ok_or_else(|| Error::MissingOutcome(scored.game.game_id.clone()))?;
    Ok(label_from_upset_score(u, cfg))
}

pub fn label_from_upset_score(u: f64, cfg: &SelectionConfig) -> ClassLabel {
    if u > cfg.theta {
        ClassLabel::Upset
    } else {
        ClassLabel::Baseline
    }
}

/// Selects potential upsets and labels those with a known outcome.
pub fn select_and_label(games: &[GameRecord], cfg: &SelectionConfig) -> Vec<ScoredGame> {
    let mut scored = select_potential_upsets(games, cfg);
    for s in &mut scored {
        s.label = s.u.map(|u| label_from_upset_score(u, cfg));
    }
    scored
}

/// Component-wise mean of several bookmakers' odds.
pub fn average_odds(per_bookmaker: &[OddsTriple]) -> Result<OddsTriple> {
    if per_bookmaker.is_empty() {
        return Err(Error::EmptyList);
    }
    let n = per_bookmaker.len() as f64;
    let mut sum = [0.0; 3];
    for odds in per_bookmaker {
        for (acc, v) in sum.iter_mut().zip(odds.as_array()) {
            *acc += v;
        }
    }
    OddsTriple::new(sum[0] / n, sum[1] / n, sum[2] / n)
}
