use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Search functions distinguish honest resource exhaustion (`Exhausted`,
/// `BudgetExhausted`) from genuine refutations; exhaustion never claims
/// nonexistence.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("symbol {0:?} is not a letter of the alphabet (or the star where a letter is required)")]
    UnknownSymbol(char),
    #[error("operation requires a nonempty located word")]
    EmptyOperand,
    #[error("domains are not separated: {0}")]
    NotSeparated(String),
    #[error("word does not fit the window [0, {window}): position {pos}")]
    OutOfWindow { pos: u32, window: u32 },
    #[error("a positive natural number is required")]
    ZeroInput,
    #[error("a nonempty finite set is required")]
    EmptySet,
    #[error("stream budget exhausted after {pulled} pulls (says nothing about existence)")]
    BudgetExhausted { pulled: u64 },
    #[error("stream is not strictly increasing at value {0}")]
    NotIncreasing(u64),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("index {index} out of range for a sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("evaluation outside the coloring window: {0}")]
    WindowOverflow(String),
    #[error("search budget or window exhausted (says nothing about existence)")]
    Exhausted,
    #[error("no window up to {n_max} suffices")]
    ExceedsBound { n_max: u32 },
    #[error("block sequence is not weakly thin for color {color}: witness {witness}")]
    NotWeaklyThin { color: u64, witness: String },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("witness schedule has no entry for level {ell}")]
    ScheduleGap { ell: u32 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("more than one factor stabilizes on the refined tail")]
    AmbiguousLimit,
    #[error("certificate instance hash does not match the supplied coloring")]
    HashMismatch,
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
