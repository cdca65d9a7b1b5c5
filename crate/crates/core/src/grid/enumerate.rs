//! Exhaustive enumeration of districtings of a small region.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{check_district, Cell, District, DistrictPlan, GridState};
use crate::error::{Error, Result};
use crate::model::Party;

/// Largest region enumerated unless the caller raises the cap.
pub const DEFAULT_CELL_CAP: usize = 16;

// Regions are indexed into a u64 bit set.
const HARD_CAP: usize = 64;

/// Extremes of a party's wins over every valid districting of a region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForce {
    pub party: Party,
    pub max_wins: u64,
    pub min_wins: u64,
    pub plans: u64,
    pub best: DistrictPlan,
    pub worst: DistrictPlan,
}

struct Region {
    cells: Vec<Cell>,
    /// Admissible districts, bucketed by their lowest cell index.
    by_anchor: Vec<Vec<u64>>,
}

impl Region {
    fn build(grid: &GridState, region: &[Cell], cap: usize) -> Result<Self> {
        let mut cells = region.to_vec();
        cells.sort_unstable();
        cells.dedup();
        if cells.len() != region.len() {
            return Err(Error::Grid { field: "region", reason: "repeated cell".into() });
        }
        if let Some(c) = cells.iter().find(|&&c| !grid.contains(c)) {
            return Err(Error::Grid { field: "region", reason: format!("{c} is outside the grid") });
        }
        if cells.len() > cap.min(HARD_CAP) {
            return Err(Error::RegionTooLarge { cells: cells.len(), cap: cap.min(HARD_CAP) });
        }
        if !cells.len().is_multiple_of(grid.d()) {
            return Err(Error::RegionNotDivisible { cells: cells.len(), d: grid.d() });
        }
        let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let adjacent: Vec<u64> = cells
            .iter()
            .map(|c| c.neighbors().iter().filter_map(|nb| index.get(nb)).fold(0u64, |m, &j| m | 1 << j))
            .collect();

        let d = grid.d();
        let mut by_anchor = vec![Vec::new(); cells.len()];
        for (anchor, bucket) in by_anchor.iter_mut().enumerate() {
            // Grow connected sets whose lowest index is `anchor`.
            let above = !((1u64 << anchor) - 1);
            let mut layer = HashSet::from([1u64 << anchor]);
            for _ in 1..d {
                let mut next = HashSet::new();
                for &set in &layer {
                    let mut frontier = bits(set).fold(0u64, |m, i| m | adjacent[i]) & !set & above;
                    while frontier != 0 {
                        let bit = frontier & frontier.wrapping_neg();
                        next.insert(set | bit);
                        frontier ^= bit;
                    }
                }
                layer = next;
            }
            let mut found: Vec<u64> = layer
                .into_iter()
                .filter(|&set| {
                    let members: Vec<Cell> = bits(set).map(|i| cells[i]).collect();
                    check_district(grid.m(), d, &members).is_empty()
                })
                .collect();
            found.sort_unstable();
            *bucket = found;
        }
        Ok(Region { cells, by_anchor })
    }

    fn plan(&self, chosen: &[u64]) -> DistrictPlan {
        DistrictPlan::new(chosen.iter().map(|&set| District::new(bits(set).map(|i| self.cells[i]).collect())).collect())
    }

    fn full(&self) -> u64 {
        if self.cells.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.cells.len()) - 1
        }
    }

    fn walk(&self, free: u64, chosen: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        if free == 0 {
            visit(chosen);
            return;
        }
        let anchor = free.trailing_zeros() as usize;
        for &set in &self.by_anchor[anchor] {
            if set & !free == 0 {
                chosen.push(set);
                self.walk(free & !set, chosen, visit);
                chosen.pop();
            }
        }
    }
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(i)
        }
    })
}

/// Calls `visit` once for every valid districting of `region`, and returns
/// how many there were.
pub fn enumerate_plans(
    grid: &GridState,
    region: &[Cell],
    cap: usize,
    mut visit: impl FnMut(&DistrictPlan),
) -> Result<u64> {
    let r = Region::build(grid, region, cap)?;
    let mut count = 0u64;
    r.walk(r.full(), &mut Vec::new(), &mut |chosen| {
        count += 1;
        visit(&r.plan(chosen));
    });
    Ok(count)
}

/// Best and worst win counts for `party` over all valid districtings of
/// `region`. Fails when the region exceeds `cap` cells or admits no plan.
pub fn max_wins_bruteforce(grid: &GridState, region: &[Cell], party: Party, cap: usize) -> Result<BruteForce> {
    let r = Region::build(grid, region, cap)?;
    let mut wins_of: HashMap<u64, u64> = HashMap::new();
    for &set in r.by_anchor.iter().flatten() {
        let members: Vec<Cell> = bits(set).map(|i| r.cells[i]).collect();
        wins_of.insert(set, grid.wins_district(&members, party) as u64);
    }
    let mut plans = 0u64;
    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut worst: Option<(u64, Vec<u64>)> = None;
    r.walk(r.full(), &mut Vec::new(), &mut |chosen| {
        plans += 1;
        let wins: u64 = chosen.iter().map(|s| wins_of[s]).sum();
        if best.as_ref().is_none_or(|(w, _)| wins > *w) {
            best = Some((wins, chosen.to_vec()));
        }
        if worst.as_ref().is_none_or(|(w, _)| wins < *w) {
            worst = Some((wins, chosen.to_vec()));
        }
    });
    match (best, worst) {
        (Some((max_wins, b)), Some((min_wins, w))) => {
            Ok(BruteForce { party, max_wins, min_wins, plans, best: r.plan(&b), worst: r.plan(&w) })
        }
        _ => Err(Error::Grid { field: "region", reason: "admits no valid districting".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{count_wins, validate_partition, validate_plan};
    use crate::ratio::Ratio;

    fn zeros(m: usize, d: usize) -> GridState {
        GridState::from_row_major(m, d, vec![Ratio::zero(); m * m]).unwrap()
    }

    fn all(grid: &GridState) -> Vec<Cell> {
        grid.cells().collect()
    }

    #[test]
    fn domino_tiling_counts() {
        // Domino tilings: 2 of 2x2, 36 of 4x4.
        let g = zeros(2, 2);
        assert_eq!(enumerate_plans(&g, &all(&g), 16, |_| {}).unwrap(), 2);
        let g = zeros(4, 2);
        assert_eq!(enumerate_plans(&g, &all(&g), 16, |_| {}).unwrap(), 36);
    }

    #[test]
    fn tetromino_tilings_of_four_by_four() {
        // 117 tilings of the 4x4 square by tetrominoes.
        let g = zeros(4, 4);
        let mut seen = HashSet::new();
        let n = enumerate_plans(&g, &all(&g), 16, |p| {
            assert_eq!(validate_plan(&g, p), Ok(()));
            let mut key: Vec<_> = p.districts().to_vec();
            key.sort_by(|a, b| a.cells().cmp(b.cells()));
            assert!(seen.insert(key));
        })
        .unwrap();
        assert_eq!(n, 117);
    }

    #[test]
    fn two_by_two_dominoes() {
        let top_row =
            GridState::new(2, 2, vec![vec![Ratio::one(), Ratio::one()], vec![Ratio::zero(), Ratio::zero()]]).unwrap();
        assert_eq!(max_wins_bruteforce(&top_row, &all(&top_row), Party::A, 16).unwrap().max_wins, 1);
        let g = zeros(2, 2);
        assert_eq!(max_wins_bruteforce(&g, &all(&g), Party::A, 16).unwrap().max_wins, 0);
        // A single 1 only ties its district.
        let corner =
            GridState::new(2, 2, vec![vec![Ratio::one(), Ratio::zero()], vec![Ratio::zero(), Ratio::zero()]]).unwrap();
        assert_eq!(max_wins_bruteforce(&corner, &all(&corner), Party::A, 16).unwrap().max_wins, 0);
    }

    #[test]
    fn region_limits() {
        let g = zeros(4, 2);
        let region = all(&g);
        assert!(matches!(max_wins_bruteforce(&g, &region, Party::A, 8), Err(Error::RegionTooLarge { .. })));
        assert!(matches!(max_wins_bruteforce(&g, &region[..3], Party::A, 16), Err(Error::RegionNotDivisible { .. })));
        // Two diagonal cells cannot form a domino.
        let diagonal = [Cell::new(1, 1), Cell::new(2, 2)];
        assert!(max_wins_bruteforce(&g, &diagonal, Party::A, 16).is_err());
    }

    #[test]
    fn witnesses_realise_the_extremes() {
        let mut cells = vec![Ratio::zero(); 16];
        for i in [0, 1, 2, 8, 9, 10] {
            cells[i] = Ratio::one();
        }
        let g = GridState::from_row_major(4, 4, cells).unwrap();
        let bf = max_wins_bruteforce(&g, &all(&g), Party::A, 16).unwrap();
        assert_eq!(count_wins(&g, &bf.best, Party::A).unwrap(), bf.max_wins);
        assert_eq!(count_wins(&g, &bf.worst, Party::A).unwrap(), bf.min_wins);
        assert_eq!((bf.max_wins, bf.min_wins), (2, 0));
    }

    #[test]
    fn partial_regions() {
        let g = zeros(4, 2);
        let region: Vec<Cell> = (1..=2).flat_map(|r| (1..=4).map(move |c| Cell::new(r, c))).collect();
        // 2x4 strip: 5 domino tilings.
        let n = enumerate_plans(&g, &region, 16, |p| assert_eq!(validate_partition(&g, &region, p), Ok(()))).unwrap();
        assert_eq!(n, 5);
    }
}
