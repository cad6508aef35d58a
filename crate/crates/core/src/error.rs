use alloc::string::String;

/// Errors raised by rule evaluation and property checks.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid apportionment instance: {0}")]
    InvalidInstance(String),
    #[error("invalid approval profile: {0}")]
    InvalidProfile(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("divisor d({index}) is undefined: weight w_{} is zero", index + 1)]
    UndefinedDivisor { index: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("more than {cap} tied outcomes")]
    TieExplosion { cap: usize },
    #[error("enumeration needs {required} evaluations, cap is {cap}")]
    EnumerationCap { required: u128, cap: usize },
    #[error("committee size {size} does not divide the number of voters {voters}")]
    Divisibility { voters: usize, size: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("{voters} voters exceed the brute-force cap of {cap}")]
    TooManyVoters { voters: usize, cap: usize },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
