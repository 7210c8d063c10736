use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Budget exhaustion is kept distinct from
/// wrong answers so callers can tell "too big to check" from "false".
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable {0} is not bound by the assignment")]
    UnboundVariable(String),
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("closure leaves sort {0} empty")]
    EmptySortUnreachable(String),
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("partition is not a congruence: {0}")]
    NotACongruence(String),
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` takes {expected} arguments, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("term is not a word term [w]y")]
    NotAWordTerm,
    #[error("algebra has no designated zero elements")]
    NotZeroAdjoined,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coset enumeration overflow at {0} cosets")]
    Overflow(usize),
    #[error("generator map does not extend: {0}")]
    NotExtendable(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("action does not match group: {0}")]
    ActionMismatch(String),
    #[error("partial map leaves its domain: {0}")]
    DomainViolation(String),
    #[error("witness check failed: {0}")]
    WitnessCheckFailed(String),
    #[error("algebra violates `{identity}` at {witness}")]
    NotInOmegaTauStar { identity: String, witness: String },
    #[error("{0} is not a union of cosets")]
    CosetDivisionFailure(String),
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
