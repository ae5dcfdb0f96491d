//! Subcommand implementations. Each `cmd_*` reads its inputs, delegates to
//! `upset-core`, writes its outputs atomically and returns the text printed on
//! stdout.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use upset_core::betting::{
    betting_rounds, fixed_strategy_eval, odds_reshuffle_experiment, BetGame, FixedStrategy,
    OddsPermutation, PredictionSource,
};
use upset_core::features::{feature_vector, significance_table, FeatureVector};
use upset_core::ingest::{attribute_tweet, build_corpus, Attribution, PREGAME_SECONDS};
use upset_core::learn::{cross_validate, reshuffle_labels_experiment};
use upset_core::odds::{potential_upset_score, select_and_label, ScoredGame};
use upset_core::sentiment::{benchmark_scorer, ScorerSpec};
use upset_core::signals::{
    annotate_events, fan_groups, interaction_counts, minute_series, SignalTweet, GAME_MINUTES,
};
use upset_core::synth::{generate, OddsModel, SynthConfig};
use upset_core::{ClassLabel, GameRecord, Timestamp, TweetRecord};

use crate::config::{PipelineConfig, ScorerChoice};
use crate::error::{CliError, CliResult};
use crate::formats::{events, features, games, lexicon, reports, tags, tweets};
use crate::fsutil::write_atomic;

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    /// Games CSV.
    #[arg(long)]
    pub games: PathBuf,
    /// Scored-games CSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_select(args: &SelectArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let games = games::read_games(&args.games)?;
    let scored = select_and_label(&games, &cfg.selection()?);
    write_atomic(&args.out, &reports::write_scored(&scored)?)?;
    let count = |l: Option<ClassLabel>| scored.iter().filter(|s| s.label == l).count();
    Ok(format!(
        "games = {}\npotential_upsets = {}\nupsets = {}\nbaselines = {}\nunlabeled = {}\n",
        games.len(),
        scored.len(),
        count(Some(ClassLabel::Upset)),
        count(Some(ClassLabel::Baseline)),
        count(None),
    ))
}

#[derive(Debug, Clone, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub games: PathBuf,
    /// Tweets TSV.
    #[arg(long)]
    pub tweets: PathBuf,
    /// Tags TSV.
    #[arg(long)]
    pub tags: PathBuf,
    /// Features CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Excluded-games CSV; defaults to the output path with extension `excluded.csv`.
    #[arg(long)]
    pub excluded: Option<PathBuf>,
}

pub const REASON_VOLUME: &str = "volume";
pub const REASON_NOT_POTENTIAL_UPSET: &str = "not-potential-upset";

#[derive(Debug, Clone, PartialEq)]
pub struct Featurized {
    /// In games-file order.
    pub features: Vec<FeatureVector>,
    pub excluded: Vec<(String, &'static str)>,
}

/// Features of every potential upset that passes the volume filter.
pub fn featurize(
    games: &[GameRecord],
    tweets: &[TweetRecord],
    tag_file: &tags::TagsFile,
    cfg: &PipelineConfig,
) -> CliResult<Featurized> {
    let mut seen = HashSet::with_capacity(tweets.len());
    for t in tweets {
        if !seen.insert(t.tweet_id.as_str()) {
            return Err(upset_core::Error::DuplicateTweetId(t.tweet_id.clone()).into());
        }
    }
    let mut sorted: Vec<&TweetRecord> = tweets.iter().collect();
    sorted.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));

    let selection = cfg.selection()?;
    let feature_cfg = cfg.feature_config()?;
    let volume = cfg.volume();
    let scorer = cfg.scorer()?;
    let labels: std::collections::HashMap<String, Option<ClassLabel>> = select_and_label(games, &selection)
        .into_iter()
        .map(|s| (s.game.game_id, s.label))
        .collect();

    let mut out = Featurized { features: Vec::new(), excluded: Vec::new() };
    for game in games {
        if potential_upset_score(&game.odds) <= selection.theta() {
            out.excluded.push((game.game_id.clone(), REASON_NOT_POTENTIAL_UPSET));
            continue;
        }
        let team_tags = tag_file.for_game(game)?;
        let start = game.kickoff.offset(-PREGAME_SECONDS);
        let lo = sorted.partition_point(|t| t.timestamp < start);
        let hi = sorted.partition_point(|t| t.timestamp < game.kickoff);
        let window: Vec<TweetRecord> = sorted[lo..hi].iter().map(|t| (*t).clone()).collect();
        let mut corpus = build_corpus(game, &window, &team_tags)?;
        if !corpus.apply_volume_filter(&volume) {
            out.excluded.push((game.game_id.clone(), REASON_VOLUME));
            continue;
        }
        let mut fv = feature_vector(&corpus, &scorer, &feature_cfg)?;
        fv.label = labels.get(&game.game_id).copied().flatten();
        out.features.push(fv);
    }
    Ok(out)
}

pub fn cmd_featurize(args: &FeaturizeArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let games = games::read_games(&args.games)?;
    let tweets = tweets::read_tweets(&args.tweets)?;
    let tag_file = tags::read_tags(&args.tags)?;
    let result = featurize(&games, &tweets, &tag_file, cfg)?;
    let excluded_path = args
        .excluded
        .clone()
        .unwrap_or_else(|| args.out.with_extension("excluded.csv"));
    write_atomic(&args.out, &features::write_features(&result.features)?)?;
    write_atomic(&excluded_path, &features::write_excluded(&result.excluded)?)?;
    Ok(format!(
        "featurized = {}\nexcluded = {}\nexcluded_file = {}\n",
        result.features.len(),
        result.excluded.len(),
        excluded_path.display()
    ))
}

fn labeled(rows: &[FeatureVector]) -> CliResult<(Vec<Vec<f64>>, Vec<ClassLabel>)> {
    rows.iter()
        .map(|fv| {
            let label = fv
                .label
                .ok_or_else(|| CliError::Validation(format!("game {} has no label", fv.game_id)))?;
            Ok((fv.p.to_vec(), label))
        })
        .collect::<CliResult<Vec<_>>>()
        .map(|v| v.into_iter().unzip())
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Features CSV; every row must be labeled.
    #[arg(long)]
    pub features: PathBuf,
    /// Cross-validation report to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Per-game predictions CSV.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Also run this many label-reshuffle rounds and append the null report.
    #[arg(long, default_value_t = 0)]
    pub null_rounds: usize,
}

pub fn cmd_evaluate(args: &EvaluateArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let rows = features::read_features(&args.features)?;
    let (x, y) = labeled(&rows)?;
    let cv = cross_validate(&x, &y, cfg.cv_k, cfg.seed)?;
    let n_upset = y.iter().filter(|l| l.is_upset()).count();
    let mut report = reports::cv_report_text(&cv, n_upset, y.len() - n_upset);
    if args.null_rounds > 0 {
        let null = reshuffle_labels_experiment(&x, &y, cfg.cv_k, args.null_rounds, cfg.seed)?;
        report.push_str(&reports::null_report_text(&null));
    }
    write_atomic(&args.out, report.as_bytes())?;
    if let Some(path) = &args.predictions {
        let ids: Vec<String> = rows.iter().map(|r| r.game_id.clone()).collect();
        write_atomic(path, &reports::write_predictions(&ids, &cv, &y)?)?;
    }
    Ok(format!(
        "seed = {}\naccuracy = {:.6}\nauroc = {:.6}\n",
        cfg.seed, cv.metrics.accuracy, cv.metrics.auroc
    ))
}

#[derive(Debug, Clone, Args)]
pub struct BetArgs {
    /// Labeled features CSV.
    #[arg(long)]
    pub features: PathBuf,
    /// Games CSV supplying odds and outcomes.
    #[arg(long)]
    pub games: PathBuf,
    /// Betting report to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Bet on the true labels instead of cross-validated predictions.
    #[arg(long)]
    pub oracle: bool,
    /// Permute odds triples across games in every round.
    #[arg(long)]
    pub odds_reshuffle: bool,
}

/// Joins labeled feature rows with their games.
pub fn bet_games(rows: &[FeatureVector], games: &[GameRecord]) -> CliResult<Vec<BetGame>> {
    let by_id: std::collections::HashMap<&str, &GameRecord> =
        games.iter().map(|g| (g.game_id.as_str(), g)).collect();
    let (_, labels) = labeled(rows)?;
    rows.iter()
        .zip(labels)
        .map(|(fv, label)| {
            let game = by_id
                .get(fv.game_id.as_str())
                .ok_or_else(|| CliError::Validation(format!("game {} not in games file", fv.game_id)))?;
            let outcome = game
                .outcome
                .ok_or_else(|| CliError::Validation(format!("game {} has no outcome", fv.game_id)))?;
            Ok(BetGame {
                game_id: fv.game_id.clone(),
                odds: game.odds,
                outcome,
                label,
                features: fv.p.to_vec(),
            })
        })
        .collect()
}

pub fn cmd_bet(args: &BetArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let rows = features::read_features(&args.features)?;
    let games = games::read_games(&args.games)?;
    let bet = bet_games(&rows, &games)?;
    let betting = cfg.betting(0)?;
    let source = if args.oracle {
        PredictionSource::Oracle
    } else {
        PredictionSource::CrossValidated
    };
    let report = if args.odds_reshuffle {
        odds_reshuffle_experiment(&bet, &betting, source, OddsPermutation::Random)?
    } else {
        betting_rounds(&bet, &betting, source)?
    };
    let pairs: Vec<_> = bet.iter().map(|g| (g.odds, g.outcome)).collect();
    let fixed = FixedStrategy::ALL
        .iter()
        .map(|&s| fixed_strategy_eval(&pairs, s, cfg.unit_stake))
        .collect::<Result<Vec<_>, _>>()?;
    let text = reports::betting_report_text(&report, &fixed, &cfg.echo());
    write_atomic(&args.out, text.as_bytes())?;
    let mut summary = format!(
        "seed = {}\nmean_profit = {:.6}\nstd_profit = {:.6}\n",
        cfg.seed, report.mean_profit, report.std_profit
    );
    for f in &fixed {
        let _ = writeln!(summary, "fixed.{} = {:.6}", f.strategy.name(), f.mean_profit);
    }
    Ok(summary)
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Directory receiving games.csv, tweets.tsv and tags.tsv.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 60)]
    pub n_games: usize,
    #[arg(long, default_value_t = 0.33)]
    pub upset_fraction: f64,
    /// 1-based windows where baseline games get a sentiment gap.
    #[arg(long, value_delimiter = ',', default_value = "10,11")]
    pub gap_windows: Vec<usize>,
    #[arg(long, default_value_t = 0.3)]
    pub gap_effect: f64,
    #[arg(long, default_value_t = 0.15)]
    pub noise_sd: f64,
    #[arg(long, default_value_t = 200)]
    pub tweets_per_window: usize,
    #[arg(long, default_value_t = 2)]
    pub match_tweets: usize,
    /// Bookmaker margin.
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
    /// Every game's potential-upset score exceeds this.
    #[arg(long, default_value_t = 6.0)]
    pub pu_min: f64,
}

impl SynthArgs {
    pub fn synth_config(&self, cfg: &PipelineConfig) -> SynthConfig {
        SynthConfig {
            n_games: self.n_games,
            upset_fraction: self.upset_fraction,
            gap_windows: self.gap_windows.clone(),
            gap_effect: self.gap_effect,
            tweets_per_side_per_window: self.tweets_per_window,
            match_tweets_per_window: self.match_tweets,
            score_noise_sd: self.noise_sd,
            odds_model: OddsModel { pu_min: self.pu_min, margin: self.margin },
            theta: cfg.theta,
            first_kickoff: upset_core::synth::DEFAULT_FIRST_KICKOFF,
            seed: cfg.seed,
        }
    }

    /// Defaults with the given output directory.
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        SynthArgs {
            out_dir: out_dir.into(),
            n_games: 60,
            upset_fraction: 0.33,
            gap_windows: vec![10, 11],
            gap_effect: 0.3,
            noise_sd: 0.15,
            tweets_per_window: 200,
            match_tweets: 2,
            margin: 0.05,
            pu_min: 6.0,
        }
    }
}

pub const SYNTH_GAMES: &str = "games.csv";
pub const SYNTH_TWEETS: &str = "tweets.tsv";
pub const SYNTH_TAGS: &str = "tags.tsv";

pub fn cmd_synth(args: &SynthArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let corpus = generate(&args.synth_config(cfg))?;
    let mut tag_file = tags::TagsFile::default();
    for (team, list) in &corpus.team_tags {
        tag_file.teams.insert(team.clone(), list.clone());
    }
    write_atomic(&args.out_dir.join(SYNTH_GAMES), &games::write_games(&corpus.games)?)?;
    write_atomic(&args.out_dir.join(SYNTH_TWEETS), &tweets::write_tweets(&corpus.tweets))?;
    write_atomic(&args.out_dir.join(SYNTH_TAGS), &tags::write_tags(&tag_file))?;
    let upsets = corpus.labels.iter().filter(|l| l.is_upset()).count();
    Ok(format!(
        "seed = {}\ngames = {}\nupsets = {}\nbaselines = {}\ntweets = {}\nclamped_scores = {}\n",
        cfg.seed,
        corpus.games.len(),
        upsets,
        corpus.games.len() - upsets,
        corpus.tweets.len(),
        corpus.clamped,
    ))
}

#[derive(Debug, Clone, Args)]
pub struct SignalsArgs {
    #[arg(long)]
    pub games: PathBuf,
    #[arg(long)]
    pub tweets: PathBuf,
    #[arg(long)]
    pub tags: PathBuf,
    /// Game to trace.
    #[arg(long)]
    pub game: String,
    /// Match events CSV.
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Per-minute signal CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Fan interaction counts to write.
    #[arg(long)]
    pub interactions: Option<PathBuf>,
}

pub fn cmd_signals(args: &SignalsArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let games = games::read_games(&args.games)?;
    let game = games
        .iter()
        .find(|g| g.game_id == args.game)
        .ok_or_else(|| CliError::Validation(format!("game {} not in games file", args.game)))?;
    let all = tweets::read_tweets(&args.tweets)?;
    let team_tags = tags::read_tags(&args.tags)?.for_game(game)?;
    let scorer = cfg.scorer()?;
    let end = game.kickoff.offset(GAME_MINUTES as i64 * Timestamp::MINUTE);
    let in_game: Vec<(&TweetRecord, Attribution)> = all
        .iter()
        .filter(|t| t.timestamp >= game.kickoff && t.timestamp < end)
        .map(|t| (t, attribute_tweet(t, &team_tags)))
        .filter(|(_, side)| *side != Attribution::Unrelated)
        .collect();
    let signal: Vec<SignalTweet> = in_game
        .iter()
        .map(|(t, side)| {
            Ok(SignalTweet { timestamp: t.timestamp, side: *side, score: scorer.score_tweet(t)?.value() })
        })
        .collect::<CliResult<_>>()?;
    let mut series = minute_series(&signal, game.kickoff, GAME_MINUTES);
    if let Some(path) = &args.events {
        annotate_events(&mut series, &events::read_events(path)?)?;
    }
    write_atomic(&args.out, &reports::write_signals(&series)?)?;
    if let Some(path) = &args.interactions {
        let (fav, und) = fan_groups(in_game.iter().copied());
        let tweets: Vec<TweetRecord> = in_game.iter().map(|(t, _)| (*t).clone()).collect();
        let counts = interaction_counts(&tweets, &fav, &und)?;
        write_atomic(path, reports::interactions_text(&counts, fav.len(), und.len()).as_bytes())?;
    }
    Ok(format!("game = {}\ntweets = {}\n", game.game_id, signal.len()))
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Labeled corpus (`label<TAB>text`); defaults to the bundled corpus.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

/// Scores with the configured lexicon, or the bundled one when the configured
/// scorer is passthrough.
pub fn cmd_bench_sentiment(args: &BenchArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let corpus = match &args.corpus {
        Some(path) => lexicon::read_bench(path)?,
        None => lexicon::parse_bench(lexicon::BUILTIN_BENCH, Path::new("<builtin corpus>"))?,
    };
    let spec = match cfg.scorer {
        ScorerChoice::Passthrough => ScorerSpec::Lexicon(lexicon::builtin()?),
        _ => cfg.scorer()?,
    };
    let accuracy = benchmark_scorer(&corpus, &spec, &cfg.band()?)?;
    Ok(format!("n = {}\naccuracy = {accuracy:.6}\n", corpus.len()))
}

#[derive(Debug, Clone, Args)]
pub struct SignificanceArgs {
    /// Labeled features CSV.
    #[arg(long)]
    pub features: PathBuf,
    /// Per-window table CSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_significance(args: &SignificanceArgs, cfg: &PipelineConfig) -> CliResult<String> {
    let rows = features::read_features(&args.features)?;
    let table = significance_table(&rows, cfg.alpha)?;
    let bytes = reports::write_significance(&table, cfg.alpha)?;
    write_atomic(&args.out, &bytes)?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// Scored rows for in-memory callers.
pub fn scored_games(games: &[GameRecord], cfg: &PipelineConfig) -> CliResult<Vec<ScoredGame>> {
    Ok(select_and_label(games, &cfg.selection()?))
}
