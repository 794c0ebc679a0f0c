use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid probability {0}: must lie strictly between 0 and 1")]
    InvalidProbability(String),
    #[error("parts sum to {sum}, expected {n}")]
    PartsMismatch { n: u64, sum: u64 },
    #[error("cannot exclude pushes from a wager that always pushes")]
    DegeneratePushOnly,
    #[error("the bet system is coherent; no Dutch book exists")]
    CoherentSystem,
    #[error("illegal roulette bet: {0}")]
    IllegalSubset(String),
    #[error("{0} is not a point number")]
    InvalidPoint(u8),
    #[error("invalid paytable: {0}")]
    InvalidPaytable(String),
    #[error("invalid keno ticket: {0}")]
    InvalidTicket(String),
    #[error("invalid way ticket: {0}")]
    InvalidWayTicket(String),
    #[error("no winners: prize pool carries over")]
    NoWinners,
    #[error("duplicate card {0}")]
    DuplicateCard(String),
    #[error("invalid denomination signature {0:?}")]
    InvalidSignature([u32; 5]),
    #[error("invalid total {0}")]
    InvalidTotal(u8),
    #[error("unreachable state: {0}")]
    UnreachableState(String),
    #[error("invalid commission {0}")]
    InvalidCommission(String),
    #[error("game could not be solved by 2x2 kernel search: {0}")]
    UnsolvedGame(String),
    #[error("inconsistent deck: {0}")]
    InconsistentDeck(String),
    #[error("illegal action: {0}")]
    IllegalAction(String),
    #[error("betting system has stopped")]
    SystemStopped,
    #[error("bet of {bet} exceeds the house limit {limit}")]
    LimitExceeded { bet: String, limit: String },
    #[error("{0} has no finite dyadic expansion within 40 digits")]
    NonDyadicInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
