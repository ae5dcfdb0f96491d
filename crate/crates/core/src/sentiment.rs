//! Tweet sentiment in `[0, 1]` and its three-way polarity.
//!
//! Two scorers are available: a lexicon scorer that averages token valences and
//! maps the mean from `[-1, 1]` onto `[0, 1]`, and a passthrough scorer that
//! returns a score computed upstream and stored on the tweet.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use crate::domain::TweetRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SentimentScore(f64);

impl SentimentScore {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(SentimentScore(value))
        } else {
            Err(Error::ScoreOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Negative,
    Neutral,
    Positive,
}

impl Polarity {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "negative" => Some(Polarity::Negative),
            "neutral" => Some(Polarity::Neutral),
            "positive" => Some(Polarity::Positive),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
            Polarity::Positive => "positive",
        }
    }
}

/// Closed interval of scores considered neutral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralBand {
    low: f64,
    high: f64,
}

impl NeutralBand {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(0.0 <= low && low < high && high <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "neutral band needs 0 <= low < high <= 1, got [{low}, {high}]"
            )));
        }
        Ok(NeutralBand { low, high })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }
}

impl Default for NeutralBand {
    fn default() -> Self {
        NeutralBand {
            low: 0.3,
            high: 0.7,
        }
    }
}

/// Token valences in `[-1, 1]`, keyed by lowercase token.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Lexicon {
    valences: BTreeMap<String, f64>,
}

impl Lexicon {
    pub fn new<S: AsRef<str>>(entries: impl IntoIterator<Item = (S, f64)>) -> Result<Self> {
        let mut valences = BTreeMap::new();
        for (token, valence) in entries {
            if !(-1.0..=1.0).contains(&valence) {
                return Err(Error::InvalidConfig(format!(
                    "valence {valence} for `{}` outside [-1, 1]",
                    token.as_ref()
                )));
            }
            valences.insert(token.as_ref().to_lowercase(), valence);
        }
        Ok(Lexicon { valences })
    }

    pub fn get(&self, token: &str) -> Option<f64> {
        self.valences.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.valences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valences.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScorerSpec {
    Lexicon(Lexicon),
    Passthrough,
}

impl ScorerSpec {
    /// Scores a text; `precomputed` is only consulted by the passthrough scorer.
    pub fn score(&self, text: &str, precomputed: Option<f64>) -> Result<SentimentScore> {
        match self {
            ScorerSpec::Lexicon(lexicon) => Ok(lexicon_score(text, lexicon)),
            ScorerSpec::Passthrough => match precomputed {
                Some(v) => SentimentScore::new(v),
                None => Err(Error::MissingPrecomputedScore(String::new())),
            },
        }
    }

    pub fn score_tweet(&self, tweet: &TweetRecord) -> Result<SentimentScore> {
        self.score(&tweet.text, tweet.precomputed_sentiment)
            .map_err(|e| match e {
                Error::MissingPrecomputedScore(_) => {
                    Error::MissingPrecomputedScore(tweet.tweet_id.clone())
                }
                other => other,
            })
    }
}

pub fn score_text(text: &str, spec: &ScorerSpec) -> Result<SentimentScore> {
    spec.score(text, None)
}

fn lexicon_score(text: &str, lexicon: &Lexicon) -> SentimentScore {
    let mut sum = 0.0;
    let mut hits = 0usize;
    for token in text.split(|c: char| !c.is_alphanumeric()) {
        if token.is_empty() {
            continue;
        }
        if let Some(v) = lexicon.get(&token.to_lowercase()) {
            sum += v;
            hits += 1;
        }
    }
    let mean = if hits == 0 { 0.0 } else { sum / hits as f64 };
    SentimentScore(((mean + 1.0) / 2.0).clamp(0.0, 1.0))
}

pub fn classify_polarity(score: SentimentScore, band: &NeutralBand) -> Polarity {
    let v = score.value();
    if v < band.low {
        Polarity::Negative
    } else if v > band.high {
        Polarity::Positive
    } else {
        Polarity::Neutral
    }
}

/// Fraction of labeled texts whose predicted polarity matches the gold label.
pub fn benchmark_scorer<S: AsRef<str>>(
    corpus: &[(S, Polarity)],
    spec: &ScorerSpec,
    band: &NeutralBand,
) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut correct = 0usize;
    for (text, gold) in corpus {
        let score = score_text(text.as_ref(), spec)?;
        if classify_polarity(score, band) == *gold {
            correct += 1;
        }
    }
    Ok(correct as f64 / corpus.len() as f64)
}
