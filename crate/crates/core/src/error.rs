use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Dynkin datum {series}{rank}: {reason}")]
    InvalidDatum {
        series: char,
        rank: usize,
        reason: String,
    },
    #[error("not a root: {0:?}")]
    NotARoot(Vec<i64>),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("mismatched universes: {0}")]
    Universe(String),
    #[error("singular point: denominator generator {gen} vanishes")]
    SingularPoint { gen: usize },
    #[error("derivation {label} not locally nilpotent on input (no termination after {cap} steps)")]
    NotNilpotent { label: String, cap: usize },
    #[error("slice condition failed for {label}: D(q) = {got}")]
    SliceCondition { label: String, got: String },
    #[error("triangularity violated: stage {earlier} ({earlier_label}) does not kill Q of stage {later} ({later_label}); residue {residue}")]
    Triangularity {
        earlier: usize,
        later: usize,
        earlier_label: String,
        later_label: String,
        residue: String,
    },
    #[error("no slice pair up to degree {cap}; raise degree_cap")]
    NoSlicePair { cap: usize },
    #[error("representation rejected: {0}")]
    Representation(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("cannot invert {0}")]
    NotInvertible(String),
}
