//! Parties, sides and nested-split support profiles.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub const BOTH: [Party; 2] = [Party::A, Party::B];

    pub fn opponent(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::A => "A",
            Party::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

/// One side of the `k`-split: `L_k` holds the first `k` districts' worth of
/// population, `R_k` the remaining `n - k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SideRef {
    pub side: Side,
    pub k: usize,
}

impl SideRef {
    pub fn left(k: usize) -> Self {
        SideRef { side: Side::L, k }
    }

    pub fn right(k: usize) -> Self {
        SideRef { side: Side::R, k }
    }

    /// The other side of the same split.
    pub fn complement(self) -> Self {
        SideRef { side: self.side.other(), k: self.k }
    }

    /// Number of districts on this side of a state with `n` districts.
    pub fn size(self, n: usize) -> usize {
        match self.side {
            Side::L => self.k,
            Side::R => n - self.k,
        }
    }
}

impl fmt::Display for SideRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.side, self.k)
    }
}

/// A convention violation found by [`validate_profile`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `x_A(S_k)` is an integer multiple of 1/2.
    HalfIntegerSum { side: Side, k: usize, value: Ratio },
    /// `x_A(k)` lies outside `[0, 1]`.
    SegmentOutOfRange { k: usize, value: Ratio },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HalfIntegerSum { side, k, value } => {
                write!(f, "x_A({side}_{k}) = {value} is a multiple of 1/2")
            }
            Violation::SegmentOutOfRange { k, value } => {
                write!(f, "x_A({k}) = {value} is outside [0, 1]")
            }
        }
    }
}

/// Support for party A on each of `n` nested split segments.
///
/// Segment `k` (1-based) is the area between the `(k-1)`- and `k`-splits and
/// holds `x_A(k)`; party B's share is always `1 - x_A(k)`. Prefix sums are
/// cached at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitProfile {
    segments: Vec<Ratio>,
    prefix: Vec<Ratio>,
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    n: usize,
    segments_a: Vec<Ratio>,
}

impl SplitProfile {
    pub fn new(n: usize, segments: Vec<Ratio>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Profile { field: "n", reason: "must be positive".into() });
        }
        if segments.len() != n {
            return Err(Error::Profile {
                field: "segments_a",
                reason: format!("has {} entries, expected n = {n}", segments.len()),
            });
        }
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(Ratio::zero());
        for (i, s) in segments.iter().enumerate() {
            prefix.push(&prefix[i] + s);
        }
        Ok(SplitProfile { segments, prefix })
    }

    /// Parses segment strings such as `"0.38"` or `"19/50"`.
    pub fn parse(segments: &[&str]) -> Result<Self> {
        let segments = segments.iter().map(|s| s.parse()).collect::<Result<Vec<Ratio>>>()?;
        SplitProfile::new(segments.len(), segments)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProfileFile =
            serde_json::from_str(text).map_err(|e| Error::Profile { field: "json", reason: e.to_string() })?;
        SplitProfile::new(file.n, file.segments_a)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }

    pub fn n(&self) -> usize {
        self.segments.len()
    }

    pub fn segments_a(&self) -> &[Ratio] {
        &self.segments
    }

    /// Total support `x_P` across the whole state.
    pub fn total_support(&self, party: Party) -> Ratio {
        self.side_support(party, SideRef::left(self.n())).expect("L_n is in range")
    }

    /// `x_P(S_k)`.
    pub fn side_support(&self, party: Party, side: SideRef) -> Result<Ratio> {
        let n = self.n();
        if side.k > n {
            return Err(Error::SplitOutOfRange { k: side.k, n });
        }
        let a = match side.side {
            Side::L => self.prefix[side.k].clone(),
            Side::R => &self.prefix[n] - &self.prefix[side.k],
        };
        Ok(match party {
            Party::A => a,
            Party::B => Ratio::from(side.size(n)) - a,
        })
    }

    /// `x_P(k)` for `1 <= k <= n`.
    pub fn segment_support(&self, party: Party, k: usize) -> Result<Ratio> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::SegmentOutOfRange { k, n });
        }
        let a = &self.segments[k - 1];
        Ok(match party {
            Party::A => a.clone(),
            Party::B => Ratio::one() - a,
        })
    }

    pub fn validate(self) -> Result<ValidProfile> {
        match validate_profile(&self) {
            Ok(()) => Ok(ValidProfile(self)),
            Err(v) => Err(Error::UnvalidatedProfile(v)),
        }
    }
}

impl Serialize for SplitProfile {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileFile { n: self.n(), segments_a: self.segments.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SplitProfile {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = ProfileFile::deserialize(deserializer)?;
        SplitProfile::new(file.n, file.segments_a).map_err(serde::de::Error::custom)
    }
}

/// Checks segment ranges and the non-half-integer convention on every
/// prefix `x_A(L_k)`, `1 <= k <= n`, and every suffix `x_A(R_k)`,
/// `0 <= k <= n - 1`. The empty sides `L_0` and `R_n` are exempt.
///
/// Party B's side sums differ from A's by an integer, so checking A covers both.
pub fn validate_profile(profile: &SplitProfile) -> std::result::Result<(), Vec<Violation>> {
    let n = profile.n();
    let mut violations = Vec::new();
    for (i, value) in profile.segments.iter().enumerate() {
        if value.is_negative() || value > &Ratio::one() {
            violations.push(Violation::SegmentOutOfRange { k: i + 1, value: value.clone() });
        }
    }
    for k in 0..=n {
        for side in [SideRef::left(k), SideRef::right(k)] {
            if side.size(n) == 0 {
                continue;
            }
            let value = profile.side_support(Party::A, side).expect("k in range");
            if value.is_half_integer_multiple() {
                violations.push(Violation::HalfIntegerSum { side: side.side, k, value });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// A [`SplitProfile`] that has passed [`validate_profile`]. Strategy and
/// protocol operations only accept this type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidProfile(SplitProfile);

impl ValidProfile {
    pub fn into_inner(self) -> SplitProfile {
        self.0
    }
}

impl Deref for ValidProfile {
    type Target = SplitProfile;
    fn deref(&self) -> &SplitProfile {
        &self.0
    }
}

impl TryFrom<SplitProfile> for ValidProfile {
    type Error = Error;
    fn try_from(profile: SplitProfile) -> Result<Self> {
        profile.validate()
    }
}
