//! Betting backtests driven by upset predictions.
//!
//! A game predicted as baseline stakes the whole unit on the favorite; a game
//! predicted as an upset splits it between the draw and the underdog. Returns are
//! decimal-odds payoffs and the marginal profit of a set of bets is
//! `(returned - staked) / staked`.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::domain::{ClassLabel, OddsTriple, OutcomeKind};
use crate::error::{Error, Result};
use crate::learn::cross_validate;
use crate::rng;
use crate::stats::mean_std;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StakeAllocation {
    pub on_fav: f64,
    pub on_draw: f64,
    pub on_und: f64,
}

impl StakeAllocation {
    pub fn total(&self) -> f64 {
        self.on_fav + self.on_draw + self.on_und
    }

    pub fn on(&self, outcome: OutcomeKind) -> f64 {
        match outcome {
            OutcomeKind::FavoriteWin => self.on_fav,
            OutcomeKind::Draw => self.on_draw,
            OutcomeKind::UnderdogWin => self.on_und,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetSettlement {
    /// Money staked.
    pub b: f64,
    /// Money returned, stake included.
    pub r: f64,
    pub profit: f64,
}

/// How an upset prediction spreads the unit over draw and underdog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StakeMode {
    /// Half on each.
    #[default]
    Split,
    /// In proportion to the two decimal odds.
    Proportional,
}

pub fn strategy_allocate(prediction: ClassLabel, unit: f64) -> StakeAllocation {
    match prediction {
        ClassLabel::Baseline => StakeAllocation {
            on_fav: unit,
            ..Default::default()
        },
        ClassLabel::Upset => StakeAllocation {
            on_fav: 0.0,
            on_draw: unit / 2.0,
            on_und: unit / 2.0,
        },
    }
}

pub fn allocate(
    prediction: ClassLabel,
    unit: f64,
    mode: StakeMode,
    odds: &OddsTriple,
) -> StakeAllocation {
    match (prediction, mode) {
        (ClassLabel::Upset, StakeMode::Proportional) => {
            let total = odds.draw() + odds.und();
            StakeAllocation {
                on_fav: 0.0,
                on_draw: unit * odds.draw() / total,
                on_und: unit * odds.und() / total,
            }
        }
        _ => strategy_allocate(prediction, unit),
    }
}

/// Marginal profit `(r - b) / b`.
pub fn marginal_profit(r: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::ZeroTotalStake);
    }
    Ok((r - b) / b)
}

pub fn settle(
    alloc: &StakeAllocation,
    odds: &OddsTriple,
    outcome: OutcomeKind,
) -> Result<BetSettlement> {
    let b = alloc.total();
    let r = alloc.on(outcome) * odds.of(outcome);
    Ok(BetSettlement {
        b,
        r,
        profit: marginal_profit(r, b)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BettingConfig {
    pub unit_stake: f64,
    pub rounds: usize,
    pub k: usize,
    pub seed: u64,
    /// Minimum return multiple of an upset bet over a favorite bet. Recorded for
    /// reports only.
    pub sigma: f64,
    pub stake_mode: StakeMode,
}

impl Default for BettingConfig {
    fn default() -> Self {
        BettingConfig {
            unit_stake: 1.0,
            rounds: 100,
            k: 3,
            seed: 0,
            sigma: 5.0,
            stake_mode: StakeMode::Split,
        }
    }
}

impl BettingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be at least 1".into()));
        }
        if !(self.unit_stake > 0.0 && self.unit_stake.is_finite()) {
            return Err(Error::InvalidConfig("unit stake must be positive".into()));
        }
        Ok(())
    }
}

/// Everything needed to bet on one game.
#[derive(Debug, Clone, PartialEq)]
pub struct BetGame {
    pub game_id: String,
    pub odds: OddsTriple,
    pub outcome: OutcomeKind,
    pub label: ClassLabel,
    pub features: Vec<f64>,
}

/// Where each round's predictions come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionSource {
    /// Out-of-fold predictions of a fresh stratified cross-validation per round.
    CrossValidated,
    /// The true labels.
    Oracle,
    Always(ClassLabel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddsPermutation {
    Random,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundResult {
    pub round: usize,
    pub seed: u64,
    pub b: f64,
    pub r: f64,
    pub profit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BettingReport {
    pub rounds: Vec<RoundResult>,
    pub mean_profit: f64,
    pub std_profit: f64,
    pub config: BettingConfig,
    pub source: PredictionSource,
    pub odds_reshuffled: bool,
}

fn predictions_for(
    games: &[BetGame],
    source: PredictionSource,
    k: usize,
    seed: u64,
) -> Result<Vec<ClassLabel>> {
    Ok(match source {
        PredictionSource::CrossValidated => {
            let x: Vec<&[f64]> = games.iter().map(|g| g.features.as_slice()).collect();
            let y: Vec<ClassLabel> = games.iter().map(|g| g.label).collect();
            cross_validate(&x, &y, k, seed)?.predictions
        }
        PredictionSource::Oracle => games.iter().map(|g| g.label).collect(),
        PredictionSource::Always(label) => alloc::vec![label; games.len()],
    })
}

fn run_rounds(
    games: &[BetGame],
    cfg: &BettingConfig,
    source: PredictionSource,
    odds_perm: Option<OddsPermutation>,
) -> Result<BettingReport> {
    cfg.validate()?;
    if games.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut rounds = Vec::with_capacity(cfg.rounds);
    for round in 0..cfg.rounds {
        let seed = rng::derive_seed(cfg.seed, round as u64);
        let predictions = predictions_for(games, source, cfg.k, seed)?;
        let mut order: Vec<usize> = (0..games.len()).collect();
        if odds_perm == Some(OddsPermutation::Random) {
            order.shuffle(&mut rng::stream(seed, 2));
        }
        let (mut b, mut r) = (0.0, 0.0);
        for (i, game) in games.iter().enumerate() {
            let odds = &games[order[i]].odds;
            let alloc = allocate(predictions[i], cfg.unit_stake, cfg.stake_mode, odds);
            let s = settle(&alloc, odds, game.outcome)?;
            b += s.b;
            r += s.r;
        }
        rounds.push(RoundResult {
            round,
            seed,
            b,
            r,
            profit: marginal_profit(r, b)?,
        });
    }
    let profits: Vec<f64> = rounds.iter().map(|r| r.profit).collect();
    let (mean_profit, std_profit) = mean_std(&profits).ok_or(Error::EmptyAggregate)?;
    Ok(BettingReport {
        rounds,
        mean_profit,
        std_profit,
        config: *cfg,
        source,
        odds_reshuffled: odds_perm.is_some(),
    })
}

/// Bets one unit per game per round; round profit applies the marginal-profit
/// formula to the round's summed stakes and returns.
pub fn betting_rounds(
    games: &[BetGame],
    cfg: &BettingConfig,
    source: PredictionSource,
) -> Result<BettingReport> {
    run_rounds(games, cfg, source, None)
}

/// As [`betting_rounds`], but each round first permutes which game gets which
/// odds triple. Outcomes, labels and features stay with their game.
pub fn odds_reshuffle_experiment(
    games: &[BetGame],
    cfg: &BettingConfig,
    source: PredictionSource,
    permutation: OddsPermutation,
) -> Result<BettingReport> {
    run_rounds(games, cfg, source, Some(permutation))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedStrategy {
    /// Everything on the favorite.
    FavWins,
    /// Half on the draw, half on the underdog.
    FavNotWin,
    /// Everything on the underdog.
    FavLoses,
    /// Everything on the draw.
    Tie,
}

impl FixedStrategy {
    pub const ALL: [FixedStrategy; 4] = [
        FixedStrategy::FavWins,
        FixedStrategy::FavNotWin,
        FixedStrategy::FavLoses,
        FixedStrategy::Tie,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixedStrategy::FavWins => "fav-wins",
            FixedStrategy::FavNotWin => "fav-not-win",
            FixedStrategy::FavLoses => "fav-loses",
            FixedStrategy::Tie => "tie",
        }
    }

    pub fn allocation(self, unit: f64) -> StakeAllocation {
        let zero = StakeAllocation::default();
        match self {
            FixedStrategy::FavWins => StakeAllocation { on_fav: unit, ..zero },
            FixedStrategy::FavNotWin => StakeAllocation {
                on_draw: unit / 2.0,
                on_und: unit / 2.0,
                ..zero
            },
            FixedStrategy::FavLoses => StakeAllocation { on_und: unit, ..zero },
            FixedStrategy::Tie => StakeAllocation { on_draw: unit, ..zero },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedStrategyReport {
    pub strategy: FixedStrategy,
    pub per_game: Vec<f64>,
    pub mean_profit: f64,
    pub std_profit: f64,
}

/// Per-game marginal profit of a fixed strategy, then mean and std over games.
pub fn fixed_strategy_eval(
    games: &[(OddsTriple, OutcomeKind)],
    strategy: FixedStrategy,
    unit: f64,
) -> Result<FixedStrategyReport> {
    let alloc = strategy.allocation(unit);
    let per_game = games
        .iter()
        .map(|(odds, outcome)| settle(&alloc, odds, *outcome).map(|s| s.profit))
        .collect::<Result<Vec<_>>>()?;
    let (mean_profit, std_profit) = mean_std(&per_game).ok_or(Error::EmptyList)?;
    Ok(FixedStrategyReport {
        strategy,
        per_game,
        mean_profit,
        std_profit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odds::upset_score;
    use proptest::prelude::*;
    use ClassLabel::{Baseline as B, Upset as U};
    use OutcomeKind::{Draw, FavoriteWin, UnderdogWin};

    fn odds(f: f64, d: f64, u: f64) -> OddsTriple {
        OddsTriple::new(f, d, u).unwrap()
    }

    #[test]
    fn allocation_examples() {
        assert_eq!(strategy_allocate(B, 1.0), StakeAllocation { on_fav: 1.0, on_draw: 0.0, on_und: 0.0 });
        assert_eq!(strategy_allocate(U, 1.0), StakeAllocation { on_fav: 0.0, on_draw: 0.5, on_und: 0.5 });
        assert_eq!(strategy_allocate(U, 2.0), StakeAllocation { on_fav: 0.0, on_draw: 1.0, on_und: 1.0 });
        let p = allocate(U, 1.0, StakeMode::Proportional, &odds(2.0, 6.0, 12.0));
        assert!((p.on_draw - 1.0 / 3.0).abs() < 1e-15 && (p.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn settlement_examples() {
        let o = odds(2.0, 7.0, 11.0);
        let s = settle(&strategy_allocate(B, 1.0), &o, FavoriteWin).unwrap();
        assert_eq!((s.b, s.r, s.profit), (1.0, 2.0, 1.0));
        let s = settle(&strategy_allocate(U, 1.0), &o, Draw).unwrap();
        assert_eq!((s.b, s.r, s.profit), (1.0, 3.5, 2.5));
        let s = settle(&strategy_allocate(B, 1.0), &o, Draw).unwrap();
        assert_eq!((s.r, s.profit), (0.0, -1.0));
        assert_eq!(settle(&StakeAllocation::default(), &o, Draw), Err(Error::ZeroTotalStake));
    }

    fn game(i: usize, o: OddsTriple, outcome: OutcomeKind, label: ClassLabel) -> BetGame {
        BetGame {
            game_id: alloc::format!("g{i}"),
            odds: o,
            outcome,
            label,
            features: alloc::vec![i as f64],
        }
    }

    #[test]
    fn always_baseline_with_winning_favorites() {
        let games: Vec<_> = (0..6).map(|i| game(i, odds(1.5, 8.0, 9.0), FavoriteWin, B)).collect();
        let cfg = BettingConfig { rounds: 5, ..Default::default() };
        let r = betting_rounds(&games, &cfg, PredictionSource::Always(B)).unwrap();
        assert!(r.rounds.iter().all(|x| x.profit == 0.5));
        assert_eq!((r.mean_profit, r.std_profit), (0.5, 0.0));
    }

    #[test]
    fn oracle_round_matches_hand_sum() {
        // 10 baselines, 5 upsets (3 draws, 2 underdog wins), all at (2, 7, 11)
        let o = odds(2.0, 7.0, 11.0);
        let mut games = Vec::new();
        for i in 0..10 {
            games.push(game(i, o, FavoriteWin, B));
        }
        for i in 10..13 {
            games.push(game(i, o, Draw, U));
        }
        for i in 13..15 {
            games.push(game(i, o, UnderdogWin, U));
        }
        // b = 15; r = 10*2 + 3*0.5*7 + 2*0.5*11 = 41.5
        let expected = (41.5 - 15.0) / 15.0;
        let cfg = BettingConfig { rounds: 3, ..Default::default() };
        let r = betting_rounds(&games, &cfg, PredictionSource::Oracle).unwrap();
        for round in &r.rounds {
            assert!((round.profit - expected).abs() < 1e-12);
            assert_eq!((round.b, round.r), (15.0, 41.5));
        }
        // identical odds everywhere: reshuffling is invisible
        let shuffled =
            odds_reshuffle_experiment(&games, &cfg, PredictionSource::Oracle, OddsPermutation::Random).unwrap();
        assert_eq!(shuffled.rounds, r.rounds);
    }

    #[test]
    fn identity_reshuffle_equals_plain_rounds() {
        let mut games = Vec::new();
        for i in 0..12 {
            let o = odds(1.3 + 0.05 * i as f64, 6.0 + i as f64, 9.0 + i as f64);
            let (outcome, label) = if i % 3 == 0 { (UnderdogWin, U) } else { (FavoriteWin, B) };
            games.push(game(i, o, outcome, label));
        }
        let cfg = BettingConfig { rounds: 4, seed: 42, ..Default::default() };
        let plain = betting_rounds(&games, &cfg, PredictionSource::CrossValidated).unwrap();
        let ident = odds_reshuffle_experiment(&games, &cfg, PredictionSource::CrossValidated, OddsPermutation::Identity)
            .unwrap();
        assert_eq!(plain.rounds, ident.rounds);
        let random = odds_reshuffle_experiment(&games, &cfg, PredictionSource::CrossValidated, OddsPermutation::Random)
            .unwrap();
        assert_ne!(plain.rounds, random.rounds);
    }

    #[test]
    fn config_validation() {
        let games = [game(0, odds(2.0, 7.0, 11.0), FavoriteWin, B)];
        let bad = BettingConfig { rounds: 0, ..Default::default() };
        assert!(betting_rounds(&games, &bad, PredictionSource::Oracle).is_err());
        let bad = BettingConfig { unit_stake: 0.0, ..Default::default() };
        assert!(betting_rounds(&games, &bad, PredictionSource::Oracle).is_err());
    }

    #[test]
    fn fixed_strategy_examples() {
        let o = odds(2.0, 7.0, 11.0);
        let r = fixed_strategy_eval(&[(o, UnderdogWin)], FixedStrategy::FavWins, 1.0).unwrap();
        assert_eq!(r.mean_profit, -1.0);
        let r = fixed_strategy_eval(&[(o, Draw)], FixedStrategy::Tie, 1.0).unwrap();
        assert_eq!(r.mean_profit, 6.0);
        let r = fixed_strategy_eval(&[(o, Draw), (o, FavoriteWin)], FixedStrategy::FavNotWin, 1.0).unwrap();
        assert_eq!(r.per_game, [2.5, -1.0]);
        assert_eq!((r.mean_profit, r.std_profit), (0.75, 1.75));
        assert!(fixed_strategy_eval(&[], FixedStrategy::Tie, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn profit_bounds_and_linearity(
            f in 1.01f64..3.0, d in 0.0f64..20.0, u in 0.0f64..20.0,
            pred in prop_oneof![Just(B), Just(U)],
            which in 0usize..3,
            unit in 0.01f64..100.0,
        ) {
            let o = odds(f, f + d, f + u);
            let outcome = OutcomeKind::ALL[which];
            let one = settle(&strategy_allocate(pred, 1.0), &o, outcome).unwrap();
            let scaled = settle(&strategy_allocate(pred, unit), &o, outcome).unwrap();
            prop_assert!(one.profit >= -1.0);
            prop_assert_eq!(one.profit == -1.0, one.r == 0.0);
            prop_assert!((one.profit - scaled.profit).abs() < 1e-9);
            prop_assert!((scaled.b - unit).abs() < 1e-12);
        }

        #[test]
        fn upset_bet_outearns_favorite_bet(
            f in 1.01f64..3.0, d in 0.0f64..40.0, u in 0.0f64..40.0, which in 1usize..3,
        ) {
            let o = odds(f, f + d, f + u);
            let outcome = OutcomeKind::ALL[which];
            prop_assume!(upset_score(&o, outcome) > 5.0);
            // a full unit on the realized upset nets more than 5x a winning favorite bet
            let full = settle(&StakeAllocation { on_draw: f64::from(u8::from(which == 1)), on_und: f64::from(u8::from(which == 2)), on_fav: 0.0 }, &o, outcome).unwrap();
            let fav = settle(&strategy_allocate(B, 1.0), &o, OutcomeKind::FavoriteWin).unwrap();
            prop_assert!(full.r - full.b > 5.0 * (fav.r - fav.b));
        }
    }
}
