//! Exhaustive allocation oracle for the unconstrained win formulas.
//!
//! A side of `s` districts is modelled as `s` bins of `capacity` units each.
//! A party's support is spread over the bins in every possible way, and the
//! oracle records the best and worst number of bins it carries with a strict
//! majority. Only small sides are allowed; the search is exponential.
//!
//! Supports live on a `1/q` grid, but the bins are refined to `q * s` units
//! each. At the coarser `q` units per bin an even split such as 32 units over
//! three bins of 20 cannot be represented, and the oracle would undercount.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::Ratio;
use crate::strategy::{districter_wins, non_districter_wins};

/// Extremes over every allocation of a party's units into equal bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AllocationOutcome {
    /// Most bins the party can carry (it draws the districts).
    pub max_wins: u64,
    /// Fewest bins the party can be held to (the opponent draws).
    pub min_wins: u64,
    /// Most bins the opponent can carry.
    pub opponent_max_wins: u64,
    /// Allocations visited, up to permutation of bins.
    pub allocations: u64,
}

/// Enumerates every multiset of `districts` bin loads in `0..=capacity`
/// summing to `units`.
pub fn allocate(units: u64, districts: usize, capacity: u64) -> AllocationOutcome {
    let mut out = AllocationOutcome { max_wins: 0, min_wins: u64::MAX, opponent_max_wins: 0, allocations: 0 };
    let mut loads = Vec::with_capacity(districts);
    descend(units, districts, capacity, capacity, &mut loads, &mut out);
    if out.allocations == 0 {
        out.min_wins = 0;
    }
    out
}

fn descend(
    remaining: u64,
    districts_left: usize,
    ceiling: u64,
    capacity: u64,
    loads: &mut Vec<u64>,
    out: &mut AllocationOutcome,
) {
    if districts_left == 0 {
        if remaining == 0 {
            let wins = loads.iter().filter(|&&l| 2 * l > capacity).count() as u64;
            let losses = loads.iter().filter(|&&l| 2 * l < capacity).count() as u64;
            out.max_wins = out.max_wins.max(wins);
            out.min_wins = out.min_wins.min(wins);
            out.opponent_max_wins = out.opponent_max_wins.max(losses);
            out.allocations += 1;
        }
        return;
    }
    // Loads are non-increasing, so the rest can hold at most ceiling * districts_left.
    if remaining > ceiling * districts_left as u64 {
        return;
    }
    let lowest = remaining.div_ceil(districts_left as u64);
    for load in (lowest..=ceiling.min(remaining)).rev() {
        loads.push(load);
        descend(remaining - load, districts_left - 1, load, capacity, loads, out);
        loads.pop();
    }
}

/// Brute-force win extremes for a side with `support` on `size` districts.
#[derive(Debug, Clone, Copy)]
pub struct AllocationOracle {
    /// Supports must be multiples of `1 / granularity`.
    pub granularity: u64,
    pub max_districts: usize,
}

impl Default for AllocationOracle {
    fn default() -> Self {
        AllocationOracle { granularity: 20, max_districts: 4 }
    }
}

impl AllocationOracle {
    pub fn evaluate(&self, support: &Ratio, size: usize) -> Result<AllocationOutcome> {
        if size > self.max_districts {
            return Err(Error::Argument {
                field: "size",
                reason: format!("{size} districts exceeds the oracle limit of {}", self.max_districts),
            });
        }
        let scaled = support * Ratio::from(self.granularity);
        if !scaled.is_integer() || scaled.is_negative() || support > &Ratio::from(size) {
            return Err(Error::Argument {
                field: "support",
                reason: format!("{support} is not a multiple of 1/{} in [0, {size}]", self.granularity),
            });
        }
        let units: u64 = scaled.floor().try_into().expect("support fits in u64");
        let refine = size.max(1) as u64;
        Ok(allocate(units * refine, size, self.granularity * refine))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyMismatch {
    pub support: Ratio,
    pub size: usize,
    pub formula: (u64, u64),
    pub oracle: AllocationOutcome,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StrategyOracleReport {
    pub sides_checked: u64,
    pub allocations: u64,
    pub mismatches: Vec<StrategyMismatch>,
}

/// Compares both closed-form win counts with the oracle on every side of up
/// to `max_districts` districts whose support lies on the `1/granularity`
/// grid and is not a multiple of 1/2.
pub fn check_strategy_formulas(oracle: &AllocationOracle) -> StrategyOracleReport {
    let q = oracle.granularity;
    let mut report = StrategyOracleReport::default();
    for size in 1..=oracle.max_districts {
        for units in 0..=q * size as u64 {
            if (2 * units) % q == 0 {
                continue;
            }
            let x = Ratio::new(units as i64, q as i64).expect("q > 0");
            let y = Ratio::from(size) - &x;
            let found = oracle.evaluate(&x, size).expect("support on the grid");
            let formula = (districter_wins(&x, size), non_districter_wins(&x, &y));
            report.sides_checked += 1;
            report.allocations += found.allocations;
            let consistent = formula.0 == found.max_wins
                && formula.1 == found.min_wins
                && formula.1 == size as u64 - found.opponent_max_wins;
            if !consistent {
                report.mismatches.push(StrategyMismatch { support: x, size, formula, oracle: found });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_six_twentieths_over_three() {
        let coarse = allocate(26, 3, 20);
        assert_eq!(coarse.max_wins, 2);
        let x: Ratio = "1.3".parse().unwrap();
        assert_eq!(AllocationOracle::default().evaluate(&x, 3).unwrap().max_wins, 2);
        assert_eq!(districter_wins(&x, 3), 2);
    }

    #[test]
    fn coarse_bins_undercount_even_majorities() {
        // 1.6 over three districts: 0.5333 each wins all three, but 32 twentieths
        // cannot be split into three loads of at least 11.
        assert_eq!(allocate(32, 3, 20).max_wins, 2);
        let x: Ratio = "1.6".parse().unwrap();
        assert_eq!(AllocationOracle::default().evaluate(&x, 3).unwrap().max_wins, 3);
        assert_eq!(districter_wins(&x, 3), 3);
    }

    #[test]
    fn allocation_counts() {
        // Partitions of 4 into at most 2 parts of size <= 3: (3,1), (2,2).
        assert_eq!(allocate(4, 2, 3).allocations, 2);
        assert_eq!(allocate(7, 2, 3).allocations, 0);
        assert_eq!(allocate(0, 0, 20).allocations, 1);
    }

    #[test]
    fn rejects_off_grid_and_large_sides() {
        let o = AllocationOracle::default();
        assert!(o.evaluate(&"0.33".parse().unwrap(), 2).is_err());
        assert!(o.evaluate(&"0.35".parse().unwrap(), 5).is_err());
        assert!(o.evaluate(&"2.5".parse().unwrap(), 2).is_err());
    }

    #[test]
    fn formulas_match_on_small_sides() {
        let report = check_strategy_formulas(&AllocationOracle { granularity: 20, max_districts: 3 });
        assert!(report.mismatches.is_empty(), "{:?}", report.mismatches.first());
        // 18 supports per district stay off the half-integer grid.
        assert_eq!(report.sides_checked, 18 + 36 + 54);
    }
}
