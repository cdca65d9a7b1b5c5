//! Geometric target and k-split geometric target.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{Party, SideRef, ValidProfile};
use crate::ratio::Ratio;
use crate::strategy::SplitGame;

/// A non-negative multiple of 1/2, stored as its double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetValue {
    halves: u64,
}

impl TargetValue {
    pub fn from_halves(halves: u64) -> Self {
        TargetValue { halves }
    }

    /// The average of two win counts.
    pub fn midpoint(a: u64, b: u64) -> Self {
        TargetValue { halves: a + b }
    }

    pub fn halves(self) -> u64 {
        self.halves
    }

    pub fn value(self) -> Ratio {
        Ratio::new(self.halves as i64, 2).expect("nonzero denominator")
    }

    /// `self - wins` as an exact half-integer.
    pub fn minus_wins(self, wins: u64) -> Ratio {
        self.value() - Ratio::from(wins)
    }
}

impl fmt::Display for TargetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value().fmt(f)
    }
}

impl Serialize for TargetValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `geo(P)` in closed form: `ceil(2 x_P) / 2` for a state-wide majority,
/// `floor(2 x_P) / 2` otherwise. A valid profile never has `x_P = n / 2`.
pub fn geometric_target(profile: &ValidProfile, party: Party) -> TargetValue {
    let x2 = profile.total_support(party).double();
    let n = Ratio::from(profile.n());
    let halves = if x2 > n { x2.ceil() } else { x2.floor() };
    TargetValue::from_halves(crate::ratio::clamp_count(halves))
}

/// `geo_k(P) = (P(L_k) + P(R_k)) / 2`.
pub fn k_split_target<G: SplitGame + ?Sized>(game: &G, party: Party, k: usize) -> Result<TargetValue> {
    let n = game.district_count();
    if k > n {
        return Err(Error::SplitOutOfRange { k, n });
    }
    Ok(TargetValue::midpoint(game.total_wins(party, SideRef::left(k)), game.total_wins(party, SideRef::right(k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::model::SplitProfile;
    use crate::strategy::{districter_wins, non_districter_wins};

    fn single(x: &str) -> ValidProfile {
        SplitProfile::parse(&[x]).unwrap().validate().unwrap()
    }

    #[test]
    fn two_gap_targets() {
        let p = builtin::two_gap_profile().validate().unwrap();
        assert_eq!(geometric_target(&p, Party::A), TargetValue::from_halves(8));
        assert_eq!(k_split_target(&p, Party::A, 5).unwrap().value(), "7/2".parse().unwrap());
        assert_eq!(k_split_target(&p, Party::A, 6).unwrap().value(), "7/2".parse().unwrap());
        assert_eq!(geometric_target(&p, Party::A).to_string(), "4");
        assert_eq!(geometric_target(&p, Party::B).to_string(), "6");
    }

    #[test]
    fn tiny_minority_targets_zero() {
        assert_eq!(geometric_target(&single("0.2"), Party::A), TargetValue::from_halves(0));
        assert_eq!(geometric_target(&single("0.2"), Party::B), TargetValue::from_halves(2));
    }

    #[test]
    fn majority_target_against_best_worst_average() {
        // n = 10, x_A = 5.3: segments 0.53 each keep every side sum off the half grid.
        let p = SplitProfile::parse(&["0.53"; 10]).unwrap().validate().unwrap();
        let x = "5.3".parse::<Ratio>().unwrap();
        let y = "4.7".parse::<Ratio>().unwrap();
        let best = districter_wins(&x, 10);
        let worst = non_districter_wins(&x, &y);
        assert_eq!((best, worst), (10, 1));
        assert_eq!(geometric_target(&p, Party::A), TargetValue::midpoint(best, worst));
        assert_eq!(geometric_target(&p, Party::A).to_string(), "11/2");
    }

    #[test]
    fn zero_split_matches_whole_state() {
        let p = builtin::two_gap_profile().validate().unwrap();
        for party in Party::BOTH {
            assert_eq!(k_split_target(&p, party, 0).unwrap(), geometric_target(&p, party));
            assert_eq!(k_split_target(&p, party, 10).unwrap(), geometric_target(&p, party));
        }
        assert!(k_split_target(&p, Party::A, 11).is_err());
    }

    #[test]
    fn minus_wins_is_signed() {
        let t = TargetValue::from_halves(7);
        assert_eq!(t.minus_wins(2).to_string(), "3/2");
        assert_eq!(t.minus_wins(5).to_string(), "-3/2");
    }
}
