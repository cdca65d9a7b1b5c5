//! Cross-checks of the brute-force search against plan validation, and of
//! the analytic group counting against brute force.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{count_wins, enumerate_plans, max_wins_bruteforce, shrunk_geodelta, validate_plan, GridState};
use crate::error::{Error, Result};
use crate::model::{Party, SideRef};
use crate::protocol::sub_seed;
use crate::ratio::Ratio;
use crate::strategy::SplitGame;

#[derive(Debug, Clone, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GridOracleReport {
    pub grids: u64,
    pub plans: u64,
    pub shrunk_sides: u64,
    pub mismatches: Vec<String>,
}

impl GridOracleReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// A random `m x m` grid with `m` in {2, 4}, `d` in {2, 4} and supports in
/// quarters, so ties and narrow majorities both occur.
pub fn random_grid(rng: &mut ChaCha8Rng, cap: usize) -> Result<GridState> {
    let sizes: Vec<usize> = [2usize, 4].into_iter().filter(|m| m * m <= cap).collect();
    if sizes.is_empty() {
        return Err(Error::Argument { field: "oracle-cap", reason: "must be at least 4 cells".into() });
    }
    let m = sizes[rng.gen_range(0..sizes.len())];
    let d = [2, 4][rng.gen_range(0..2)];
    let cells = (0..m * m).map(|_| Ratio::new(rng.gen_range(0..=4), 4).expect("nonzero denominator")).collect();
    GridState::from_row_major(m, d, cells)
}

fn check_grid(grid: &GridState, cap: usize, out: &mut GridOracleReport, label: &str) -> Result<()> {
    let region: Vec<_> = grid.cells().collect();
    let n = grid.district_count() as u64;
    let mut extremes = [(u64::MAX, 0u64); 2];
    let mut fail = Vec::new();
    let plans = enumerate_plans(grid, &region, cap, |plan| {
        if let Err(v) = validate_plan(grid, plan) {
            fail.push(format!("{label}: enumerated plan is invalid: {}", v[0]));
            return;
        }
        let a = count_wins(grid, plan, Party::A).expect("validated");
        let b = count_wins(grid, plan, Party::B).expect("validated");
        let ties = plan
            .districts()
            .iter()
            .filter(|d| grid.party_support(d.cells(), Party::A).double() == Ratio::from(grid.d()))
            .count() as u64;
        if a + b + ties != n {
            fail.push(format!("{label}: {a} + {b} + {ties} ties != {n} districts"));
        }
        for (slot, w) in extremes.iter_mut().zip([a, b]) {
            slot.0 = slot.0.min(w);
            slot.1 = slot.1.max(w);
        }
    })?;
    out.plans += plans;
    for (i, party) in Party::BOTH.into_iter().enumerate() {
        let bf = max_wins_bruteforce(grid, &region, party, cap)?;
        let (lo, hi) = extremes[i];
        if bf.plans != plans || bf.max_wins != hi || bf.min_wins != lo {
            fail.push(format!(
                "{label}: {party:?} brute force ({}, {}) over {} plans, enumeration ({lo}, {hi}) over {plans}",
                bf.min_wins, bf.max_wins, bf.plans
            ));
        }
        for (witness, claimed) in [(&bf.best, bf.max_wins), (&bf.worst, bf.min_wins)] {
            match count_wins(grid, witness, party) {
                Ok(w) if w == claimed => {}
                other => fail.push(format!("{label}: {party:?} witness gives {other:?}, claimed {claimed}")),
            }
        }
    }
    out.mismatches.extend(fail);
    Ok(())
}

/// Enumerates `count` random grids and the shrunk analogue, checking that
/// every plan found validates, that the reported extremes are realised by
/// their witnesses, and that analytic group counting equals brute force on
/// every side of the analogue.
pub fn check_grid_oracle(count: u64, seed: u64, cap: usize) -> Result<GridOracleReport> {
    let mut report = GridOracleReport::default();
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, i));
        let grid = random_grid(&mut rng, cap)?;
        check_grid(&grid, cap, &mut report, &format!("grid {i}"))?;
        report.grids += 1;
    }

    let shrunk = shrunk_geodelta(2)?;
    if shrunk.grid.m() * shrunk.grid.m() <= cap {
        check_grid(&shrunk.grid, cap, &mut report, "shrunk analogue")?;
        for k in 0..=shrunk.district_count() {
            for side in [SideRef::left(k), SideRef::right(k)] {
                let cells = shrunk.side_cells(side);
                if cells.is_empty() {
                    continue;
                }
                let bf = max_wins_bruteforce(&shrunk.grid, &cells, Party::A, cap)?;
                let analytic = shrunk.intact_groups(side);
                if bf.max_wins != analytic || bf.min_wins != 0 {
                    report.mismatches.push(format!(
                        "shrunk analogue {side}: analytic {analytic}, brute force max {} min {}",
                        bf.max_wins, bf.min_wins
                    ));
                }
                report.shrunk_sides += 1;
            }
        }
    }
    Ok(report)
}
