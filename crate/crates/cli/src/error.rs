use std::path::PathBuf;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        msg: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for unparsable input, 3 for input that parses but breaks an invariant,
    /// 4 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Validation(_) => 3,
            CliError::Runtime(_) | CliError::Io { .. } => 4,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: u64, msg: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<upset_core::Error> for CliError {
    fn from(e: upset_core::Error) -> Self {
        use upset_core::Error as E;
        match e {
            E::OddsOutOfRange { .. }
            | E::FavoriteNotMinimum { .. }
            | E::SameTeams(_)
            | E::MissingOutcome(_)
            | E::InvalidConfig(_)
            | E::DuplicateTweetId(_)
            | E::ScoreOutOfRange(_)
            | E::MissingPrecomputedScore(_)
            | E::UnlabeledGame(_)
            | E::EventOutOfRange(_)
            | E::OverlappingGroups(_)
            | E::KTooLarge { .. }
            | E::MissingClass(_)
            | E::EmptyCorpus => CliError::Validation(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}
