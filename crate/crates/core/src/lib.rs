//! A two-party redistricting protocol built on nested splits, computed exactly.
//!
//! Parties A and B are shown a sequence of nested splits of a state with `n`
//! districts. For each split each party says whether it would rather draw the
//! left or the right side; one of four outcome rules then decides who draws
//! what. This crate computes optimal play in closed form ([`strategy`]),
//! compares the result with the geometric target ([`targets`]), runs the
//! protocol ([`protocol`]) and rebuilds the grid construction on which the
//! protocol misses the target by an unbounded amount ([`grid`]).
//!
//! All arithmetic is exact: supports are [`Ratio`]s and targets are
//! half-integers.
//!
//! ```
//! use lry::builtin::two_gap_profile;
//! use lry::{optimal_preferences, resolve_protocol, OutcomeKind};
//!
//! let p = two_gap_profile().validate()?;
//! let run = resolve_protocol(&p, &optimal_preferences(&p), 3)?;
//! assert_eq!(run.outcome, OutcomeKind::CoinFlip);
//! assert_eq!((run.wins_a, run.wins_b), (2, 8));
//! # Ok::<(), lry::Error>(())
//! ```

pub mod builtin;
pub mod cli;
pub mod error;
pub mod grid;
pub mod model;
pub mod oracle;
pub mod protocol;
pub mod ratio;
pub mod report;
pub mod strategy;
pub mod targets;

pub use error::{Error, Result};
pub use model::{validate_profile, Party, Side, SideRef, SplitProfile, ValidProfile, Violation};
pub use protocol::{
    classify_outcome, coinflip_options, fairness_report, optimal_preferences, property_sweep, resolve_protocol,
    Assignment, FairnessReport, OutcomeKind, Preference, PreferenceTable, ProtocolRun, SplitOption,
};
pub use ratio::Ratio;
pub use strategy::{total_wins, wins_when_districting, wins_when_opponent_districts, SplitGame};
pub use targets::{geometric_target, k_split_target, TargetValue};
