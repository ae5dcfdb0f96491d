use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("odds component {value} is not greater than 1")]
    OddsOutOfRange { value: f64 },
    #[error("favorite odds {fav} are not the minimum of ({fav}, {draw}, {und})")]
    FavoriteNotMinimum { fav: f64, draw: f64, und: f64 },
    #[error("favorite and underdog are the same team `{0}`")]
    SameTeams(String),
    #[error("game `{0}` has no recorded outcome")]
    MissingOutcome(String),
    #[error("empty list")]
    EmptyList,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("duplicate tweet id `{0}`")]
    DuplicateTweetId(String),
    #[error("sentiment score {0} outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("tweet `{0}` has no precomputed sentiment score")]
    MissingPrecomputedScore(String),
    #[error("empty benchmark corpus")]
    EmptyCorpus,
    #[error("empty input")]
    EmptyInput,
    #[error("empty sample")]
    EmptySample,
    #[error("corpus for game `{0}` has not passed the volume filter")]
    CorpusNotFiltered(String),
    #[error("game `{0}` has no class label")]
    UnlabeledGame(String),
    #[error("training data has no example of class {0}")]
    MissingClass(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("k = {k} folds requested for {n} examples")]
    KTooLarge { k: usize, n: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("zero rounds requested")]
    EmptyAggregate,
    #[error("allocation stakes nothing")]
    ZeroTotalStake,
    #[error("event minute {0} outside [0, 120]")]
    EventOutOfRange(u32),
    #[error("user `{0}` belongs to both fan groups")]
    OverlappingGroups(String),
}
