use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ratio {input:?}: {reason}")]
    ParseRatio { input: String, reason: String },

    #[error("split index {k} out of range 0..={n}")]
    SplitOutOfRange { k: usize, n: usize },

    #[error("segment index {k} out of range 1..={n}")]
    SegmentOutOfRange { k: usize, n: usize },

    #[error("profile field `{field}`: {reason}")]
    Profile { field: &'static str, reason: String },

    #[error("profile violates the non-half-integer convention: {}", list_violations(.0))]
    UnvalidatedProfile(Vec<Violation>),

    #[error("preference table covers {found} splits, expected {expected}")]
    MalformedPreferences { expected: usize, found: usize },

    #[error("preference table admits no protocol outcome")]
    NoOutcome,

    #[error("run does not belong to this profile: {0}")]
    MismatchedRun(String),

    #[error("grid field `{field}`: {reason}")]
    Grid { field: &'static str, reason: String },

    #[error("region of {cells} cells exceeds the brute-force cap of {cap}")]
    RegionTooLarge { cells: usize, cap: usize },

    #[error("region of {cells} cells is not divisible into districts of {d}")]
    RegionNotDivisible { cells: usize, d: usize },

    #[error("plan is invalid: {0}")]
    InvalidPlan(String),

    #[error("delta must be at least 1")]
    DeltaOutOfRange,

    #[error("invalid argument `{field}`: {reason}")]
    Argument { field: &'static str, reason: String },

    #[error("cannot read {path}: {reason}")]
    Input { path: String, reason: String },

    #[error("cannot write report: {0}")]
    Report(String),
}

fn list_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
