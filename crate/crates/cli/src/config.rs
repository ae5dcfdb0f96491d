//! Pipeline configuration: a flat `key = value` file, overridable from the
//! command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use upset_core::betting::{BettingConfig, StakeMode};
use upset_core::features::FeatureConfig;
use upset_core::ingest::{VolumeConfig, VolumeMode};
use upset_core::odds::SelectionConfig;
use upset_core::sentiment::{NeutralBand, ScorerSpec};
use upset_core::stats::UTestConfig;

use crate::error::{CliError, CliResult};
use crate::formats::lexicon;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScorerChoice {
    Passthrough,
    /// Lexicon scorer; `None` uses the bundled lexicon.
    Lexicon(Option<PathBuf>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub theta: f64,
    pub exact_cutoff: usize,
    pub tie_correction: bool,
    pub min_per_window: usize,
    pub volume_min_rate: f64,
    pub volume_mode: VolumeMode,
    pub neutral_low: f64,
    pub neutral_high: f64,
    pub scorer: ScorerChoice,
    pub cv_k: usize,
    pub rounds: usize,
    pub seed: u64,
    pub unit_stake: f64,
    pub stake_mode: StakeMode,
    pub alpha: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            theta: 5.0,
            exact_cutoff: 20,
            tie_correction: true,
            min_per_window: 3,
            volume_min_rate: 40.0,
            volume_mode: VolumeMode::Average,
            neutral_low: 0.3,
            neutral_high: 0.7,
            scorer: ScorerChoice::Passthrough,
            cv_k: 3,
            rounds: 100,
            seed: 0,
            unit_stake: 1.0,
            stake_mode: StakeMode::Split,
            alpha: 1e-4,
        }
    }
}

/// Keys accepted in config files and `--set`.
pub const KEYS: &[&str] = &[
    "theta",
    "exact_cutoff",
    "tie_correction",
    "min_per_window",
    "volume_min_rate",
    "volume_mode",
    "neutral_low",
    "neutral_high",
    "scorer",
    "lexicon_path",
    "cv_k",
    "rounds",
    "seed",
    "unit_stake",
    "stake_mode",
    "alpha",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("`{key}`: cannot parse `{value}`"))
}

impl PipelineConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key.trim() {
            "theta" => self.theta = parse_num(key, value)?,
            "exact_cutoff" => self.exact_cutoff = parse_num(key, value)?,
            "tie_correction" => self.tie_correction = parse_num(key, value)?,
            "min_per_window" => self.min_per_window = parse_num(key, value)?,
            "volume_min_rate" => self.volume_min_rate = parse_num(key, value)?,
            "volume_mode" => {
                self.volume_mode = match value {
                    "average" => VolumeMode::Average,
                    "every-hour" => VolumeMode::EveryHour,
                    _ => return Err(format!("`volume_mode`: expected average|every-hour, got `{value}`")),
                }
            }
            "neutral_low" => self.neutral_low = parse_num(key, value)?,
            "neutral_high" => self.neutral_high = parse_num(key, value)?,
            "scorer" => {
                self.scorer = match value {
                    "passthrough" => ScorerChoice::Passthrough,
                    "lexicon" => match &self.scorer {
                        ScorerChoice::Lexicon(p) => ScorerChoice::Lexicon(p.clone()),
                        ScorerChoice::Passthrough => ScorerChoice::Lexicon(None),
                    },
                    _ => return Err(format!("`scorer`: expected passthrough|lexicon, got `{value}`")),
                }
            }
            "lexicon_path" => {
                let path = (!value.is_empty()).then(|| PathBuf::from(value));
                self.scorer = ScorerChoice::Lexicon(path);
            }
            "cv_k" => self.cv_k = parse_num(key, value)?,
            "rounds" => self.rounds = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "unit_stake" => self.unit_stake = parse_num(key, value)?,
            "stake_mode" => {
                self.stake_mode = match value {
                    "split" => StakeMode::Split,
                    "proportional" => StakeMode::Proportional,
                    _ => return Err(format!("`stake_mode`: expected split|proportional, got `{value}`")),
                }
            }
            "alpha" => self.alpha = parse_num(key, value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`. Blank lines and `#` comments
    /// are skipped.
    pub fn apply_text(&mut self, text: &str, origin: &Path) -> CliResult<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::parse(origin, i as u64 + 1, "expected `key = value`"))?;
            self.set(key, value)
                .map_err(|msg| CliError::parse(origin, i as u64 + 1, msg))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let mut cfg = PipelineConfig::default();
        cfg.apply_text(&crate::fsutil::read_to_string(path)?, path)?;
        Ok(cfg)
    }

    /// `key=value` overrides from the command line.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> CliResult<()> {
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("override `{o}` is not key=value")))?;
            self.set(k, v).map_err(CliError::Validation)?;
        }
        Ok(())
    }

    /// Re-checks every component invariant.
    pub fn validate(&self) -> CliResult<()> {
        self.selection()?;
        self.feature_config()?;
        self.band()?;
        self.betting(0)?;
        if self.volume_min_rate.is_nan() || self.volume_min_rate < 0.0 {
            return Err(CliError::Validation("volume_min_rate must be >= 0".into()));
        }
        if self.cv_k < 2 {
            return Err(CliError::Validation("cv_k must be at least 2".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(CliError::Validation("alpha must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn selection(&self) -> CliResult<SelectionConfig> {
        Ok(SelectionConfig::new(self.theta)?)
    }

    pub fn feature_config(&self) -> CliResult<FeatureConfig> {
        let utest = UTestConfig {
            exact_cutoff: self.exact_cutoff,
            tie_correction: self.tie_correction,
        };
        utest.validate()?;
        Ok(FeatureConfig {
            utest,
            min_per_window: self.min_per_window,
        })
    }

    pub fn volume(&self) -> VolumeConfig {
        VolumeConfig {
            min_rate: self.volume_min_rate,
            mode: self.volume_mode,
        }
    }

    pub fn band(&self) -> CliResult<NeutralBand> {
        Ok(NeutralBand::new(self.neutral_low, self.neutral_high)?)
    }

    pub fn betting(&self, seed_offset: u64) -> CliResult<BettingConfig> {
        let cfg = BettingConfig {
            unit_stake: self.unit_stake,
            rounds: self.rounds,
            k: self.cv_k,
            seed: self.seed.wrapping_add(seed_offset),
            sigma: 5.0,
            stake_mode: self.stake_mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn scorer(&self) -> CliResult<ScorerSpec> {
        match &self.scorer {
            ScorerChoice::Passthrough => Ok(ScorerSpec::Passthrough),
            ScorerChoice::Lexicon(None) => Ok(ScorerSpec::Lexicon(lexicon::builtin()?)),
            ScorerChoice::Lexicon(Some(path)) => Ok(ScorerSpec::Lexicon(lexicon::read_lexicon(path)?)),
        }
    }

    /// The configuration as `key = value` lines, in [`KEYS`] order.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let (scorer, lexicon_path) = match &self.scorer {
            ScorerChoice::Passthrough => ("passthrough", String::new()),
            ScorerChoice::Lexicon(p) => (
                "lexicon",
                p.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            ),
        };
        let volume_mode = match self.volume_mode {
            VolumeMode::Average => "average",
            VolumeMode::EveryHour => "every-hour",
        };
        let stake_mode = match self.stake_mode {
            StakeMode::Split => "split",
            StakeMode::Proportional => "proportional",
        };
        let pairs: [(&str, String); 16] = [
            ("theta", self.theta.to_string()),
            ("exact_cutoff", self.exact_cutoff.to_string()),
            ("tie_correction", self.tie_correction.to_string()),
            ("min_per_window", self.min_per_window.to_string()),
            ("volume_min_rate", self.volume_min_rate.to_string()),
            ("volume_mode", volume_mode.into()),
            ("neutral_low", self.neutral_low.to_string()),
            ("neutral_high", self.neutral_high.to_string()),
            ("scorer", scorer.into()),
            ("lexicon_path", lexicon_path),
            ("cv_k", self.cv_k.to_string()),
            ("rounds", self.rounds.to_string()),
            ("seed", self.seed.to_string()),
            ("unit_stake", self.unit_stake.to_string()),
            ("stake_mode", stake_mode.into()),
            ("alpha", self.alpha.to_string()),
        ];
        for (k, v) in pairs {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
