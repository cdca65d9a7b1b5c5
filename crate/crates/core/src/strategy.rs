//! Optimal-play win counts on one side of a split.
//!
//! With no geometric constraints a party drawing a side with support `x` on
//! `s` districts wins `min(floor(2x), s)`: it either spreads a majority
//! evenly, or packs "just over half" into as many districts as it can. The
//! opponent keeps `max(ceil(x - y), 0)` of those districts.

use num::BigInt;

use crate::error::Result;
use crate::model::{Party, SideRef, ValidProfile};
use crate::ratio::{clamp_count, Ratio};
use crate::targets::TargetValue;

/// Wins for a party that draws `size` districts holding `support` of its voters.
pub fn districter_wins(support: &Ratio, size: usize) -> u64 {
    let packed = clamp_count(support.double().floor());
    packed.min(size as u64)
}

/// Wins for a party with `support` when the opponent, holding
/// `opponent_support`, draws the districts.
pub fn non_districter_wins(support: &Ratio, opponent_support: &Ratio) -> u64 {
    clamp_count((support - opponent_support).ceil().max(BigInt::from(0)))
}

/// `P(S_k, P)`: districts `party` wins on `side` when it draws them.
pub fn wins_when_districting(profile: &ValidProfile, party: Party, side: SideRef) -> Result<u64> {
    let x = profile.side_support(party, side)?;
    Ok(districter_wins(&x, side.size(profile.n())))
}

/// `P(S_k, P̄)`: districts `party` wins on `side` when its opponent draws them.
pub fn wins_when_opponent_districts(profile: &ValidProfile, party: Party, side: SideRef) -> Result<u64> {
    let x = profile.side_support(party, side)?;
    let y = profile.side_support(party.opponent(), side)?;
    Ok(non_districter_wins(&x, &y))
}

/// `P(S_k)`: total wins for `party` when it draws `side` and its opponent
/// draws the other side of the same split.
pub fn total_wins(profile: &ValidProfile, party: Party, side: SideRef) -> Result<u64> {
    Ok(wins_when_districting(profile, party, side)? + wins_when_opponent_districts(profile, party, side.complement())?)
}

/// A state with `n` districts and nested splits, seen only through the
/// optimal-play totals `P(S_k)` it induces. The protocol runs on any such game.
pub trait SplitGame {
    fn district_count(&self) -> usize;

    /// `P(S_k)`. Callers keep `side.k <= district_count()`.
    fn total_wins(&self, party: Party, side: SideRef) -> u64;

    /// Average of the party's best and worst whole-state outcomes.
    fn geometric_target(&self, party: Party) -> TargetValue;
}

impl SplitGame for ValidProfile {
    fn district_count(&self) -> usize {
        self.n()
    }

    fn total_wins(&self, party: Party, side: SideRef) -> u64 {
        total_wins(self, party, side).expect("split index within 0..=n")
    }

    fn geometric_target(&self, party: Party) -> TargetValue {
        crate::targets::geometric_target(self, party)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::model::SplitProfile;
    use proptest::prelude::*;

    fn r(s: &str) -> Ratio {
        s.parse().unwrap()
    }

    #[test]
    fn two_gap_side_values() {
        let p = builtin::two_gap_profile().validate().unwrap();
        assert_eq!(wins_when_districting(&p, Party::A, SideRef::left(5)).unwrap(), 3);
        assert_eq!(wins_when_districting(&p, Party::A, SideRef::left(6)).unwrap(), 5);
        assert_eq!(wins_when_districting(&p, Party::A, SideRef::right(5)).unwrap(), 4);
        assert_eq!(wins_when_districting(&p, Party::A, SideRef::right(6)).unwrap(), 2);
        assert_eq!(wins_when_opponent_districts(&p, Party::A, SideRef::right(6)).unwrap(), 0);
        assert_eq!(wins_when_opponent_districts(&p, Party::B, SideRef::left(5)).unwrap(), 2);
        for k in [5, 6] {
            for side in [SideRef::left(k), SideRef::right(k)] {
                assert_eq!(wins_when_opponent_districts(&p, Party::A, side).unwrap(), 0);
            }
        }
        assert_eq!(total_wins(&p, Party::A, SideRef::left(6)).unwrap(), 5);
        assert_eq!(total_wins(&p, Party::A, SideRef::right(6)).unwrap(), 2);
        assert_eq!(total_wins(&p, Party::A, SideRef::left(5)).unwrap(), 3);
        assert_eq!(total_wins(&p, Party::A, SideRef::right(5)).unwrap(), 4);
    }

    #[test]
    fn majority_sweeps_the_side() {
        assert_eq!(districter_wins(&r("2.6"), 5), 5);
        assert_eq!(districter_wins(&r("1.3"), 3), 2);
        assert_eq!(districter_wins(&r("0.4"), 3), 0);
        assert_eq!(districter_wins(&r("0"), 0), 0);
    }

    #[test]
    fn minority_erased_by_districter() {
        assert_eq!(non_districter_wins(&r("1.4"), &r("2.6")), 0);
        assert_eq!(non_districter_wins(&r("3.1"), &r("1.9")), 2);
        assert_eq!(non_districter_wins(&r("0.1"), &r("0.9")), 0);
    }

    #[test]
    fn full_state_total_is_whole_state_districting() {
        let p = builtin::two_gap_profile().validate().unwrap();
        let x = p.total_support(Party::A);
        assert_eq!(total_wins(&p, Party::A, SideRef::left(10)).unwrap(), districter_wins(&x, 10));
        assert_eq!(total_wins(&p, Party::A, SideRef::left(10)).unwrap(), 8);
    }

    #[test]
    fn out_of_range_split() {
        let p = builtin::two_gap_profile().validate().unwrap();
        assert!(total_wins(&p, Party::A, SideRef::left(11)).is_err());
    }

    fn arb_valid_profile() -> impl Strategy<Value = ValidProfile> {
        prop::collection::vec((0i64..=20, 1i64..=20), 1..=16)
            .prop_map(|raw| {
                let segs: Vec<Ratio> = raw.into_iter().map(|(p, q)| Ratio::new(p.min(q), q).unwrap()).collect();
                SplitProfile::new(segs.len(), segs).unwrap()
            })
            .prop_filter_map("half-integer side sum", |p| p.validate().ok())
    }

    proptest! {
        #[test]
        fn ceil_floor_identity(p in 0i64..4000, q in 1i64..100, k in 0i64..40) {
            // x + y = k for any rational x.
            let x = Ratio::new(p, q).unwrap();
            let y = Ratio::from(k) - &x;
            let lhs = districter_wins(&x, k as usize) as i64
                + (&y - &x).ceil().max(0.into()).to_string().parse::<i64>().unwrap();
            prop_assert_eq!(lhs, k);
        }

        #[test]
        fn conservation(p in arb_valid_profile()) {
            let n = p.n() as u64;
            for k in 0..=p.n() {
                for side in [SideRef::left(k), SideRef::right(k)] {
                    let a = total_wins(&p, Party::A, side).unwrap();
                    let b = total_wins(&p, Party::B, side.complement()).unwrap();
                    prop_assert_eq!(a + b, n);
                    let s = side.size(p.n()) as u64;
                    let mine = wins_when_districting(&p, Party::A, side).unwrap();
                    let theirs = wins_when_opponent_districts(&p, Party::B, side).unwrap();
                    prop_assert_eq!(mine + theirs, s);
                }
            }
        }
    }
}
