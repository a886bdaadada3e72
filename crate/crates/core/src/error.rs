use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("prime table too small: need {needed}, limit is {limit}")]
    TableTooSmall { needed: u64, limit: u64 },
    #[error("illegal move {0}")]
    IllegalMove(u32),
    #[error("nothing to strip for n = {0}")]
    NothingToStrip(u32),
    #[error("position has no current number")]
    NotApplicable,
    #[error("the game is undefined for n = {0}")]
    UndefinedGame(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("n = {n} lies outside the script interval [{low}, {high}]")]
    OutOfInterval { n: u32, low: u32, high: u32 },
    #[error("n = {n} exceeds the supported maximum {max}")]
    TooLarge { n: u32, max: u32 },
}
