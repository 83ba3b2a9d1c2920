use thiserror::Error;

use crate::boxes::Party;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("entry P[{row}][{col}] is not a finite number")]
    NonFinite { row: usize, col: usize },

    #[error("entry P[{row}][{col}] = {value} lies outside [0, 1]")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("row {row} (setting {setting}) sums to {sum}, not 1")]
    RowNotNormalized {
        row: usize,
        setting: &'static str,
        sum: f64,
    },

    #[error(
        "signaling detected: {party:?}'s marginal for input {input}, outcome 0 differs by {deviation:e} across the other party's inputs"
    )]
    SignalingDetected {
        party: Party,
        input: u8,
        deviation: f64,
    },

    #[error("deterministic family must be 1..=4 and r a bit, got family {family}, r {r}")]
    BadFamily { family: u8, r: u8 },

    #[error("mixture weights sum to {sum}, not 1")]
    WeightsNotNormalized { sum: f64 },

    #[error("mixture weight {index} is negative ({weight})")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("box is not no-signaling (worst marginal mismatch {deviation:e})")]
    NotNoSignaling { deviation: f64 },

    #[error("linear program failed: {0}")]
    LpNumericalFailure(String),

    #[error("closed-form cases require an even copy count, got M = {0}")]
    OddM(usize),

    #[error("copy count must be at least 1")]
    ZeroCopies,

    #[error("threshold {t} outside 1..={m}")]
    BadThreshold { t: usize, m: usize },

    #[error("trace has {len} points but the window needs {window}")]
    TraceTooShort { len: usize, window: usize },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("information-causality report and F disagree: lhs - 1 = {lhs_minus_one:e}, F = {f:e}")]
    MismatchDetected { lhs_minus_one: f64, f: f64 },

    #[error("box format: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
