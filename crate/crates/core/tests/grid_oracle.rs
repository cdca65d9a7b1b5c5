//! Grid enumeration against a naive set-partition oracle that shares no code
//! with the crate's validator. For `d` in {2, 4} every connected set of `d`
//! cells is hole-free and fits the `z x z` box, so connectivity is the only
//! constraint the oracle needs.

use lry::grid::{
    count_wins, enumerate_plans, max_wins_bruteforce, tiling_plan, validate_plan, Cell, GridState, DEFAULT_CELL_CAP,
};
use lry::{Party, Ratio};
use proptest::prelude::*;

fn connected(cells: &[Cell]) -> bool {
    let mut seen = vec![cells[0]];
    let mut i = 0;
    while i < seen.len() {
        let c = seen[i];
        for &o in cells {
            let adjacent = c.row.abs_diff(o.row) + c.col.abs_diff(o.col) == 1;
            if adjacent && !seen.contains(&o) {
                seen.push(o);
            }
        }
        i += 1;
    }
    seen.len() == cells.len()
}

/// All partitions of `cells` into connected blocks of `d`, as lists of blocks.
fn naive_partitions(cells: &[Cell], d: usize) -> Vec<Vec<Vec<Cell>>> {
    if cells.is_empty() {
        return vec![vec![]];
    }
    let first = cells[0];
    let rest = &cells[1..];
    let mut out = Vec::new();
    // Choose d - 1 companions for the first cell by bitmask over `rest`.
    for mask in 0u32..(1 << rest.len()) {
        if mask.count_ones() as usize != d - 1 {
            continue;
        }
        let mut block = vec![first];
        let mut remaining = Vec::new();
        for (i, &c) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(c);
            } else {
                remaining.push(c);
            }
        }
        if !connected(&block) {
            continue;
        }
        for mut tail in naive_partitions(&remaining, d) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

fn wins(grid: &GridState, blocks: &[Vec<Cell>], party: Party) -> u64 {
    blocks
        .iter()
        .filter(|b| {
            let a: Ratio = b.iter().map(|&c| grid.support(c).clone()).sum();
            let own = match party {
                Party::A => a,
                Party::B => Ratio::from(b.len()) - a,
            };
            own.double() > Ratio::from(grid.d())
        })
        .count() as u64
}

fn grid_from(m: usize, d: usize, quarters: &[u8]) -> GridState {
    GridState::from_row_major(m, d, quarters.iter().map(|&q| Ratio::new(q as i64, 4).unwrap()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bruteforce_matches_naive_partitions(
        quarters in proptest::collection::vec(0u8..=4, 16),
        region_bits in any::<u16>(),
        four in any::<bool>(),
    ) {
        let d = if four { 4 } else { 2 };
        let grid = grid_from(4, d, &quarters);
        // A region of at most 8 cells, truncated to a multiple of d.
        let mut region: Vec<Cell> = grid.cells().enumerate().filter(|(i, _)| region_bits & (1 << i) != 0).map(|(_, c)| c).collect();
        region.truncate(8);
        region.truncate(region.len() - region.len() % d);
        prop_assume!(!region.is_empty());

        let naive = naive_partitions(&region, d);
        let plans = enumerate_plans(&grid, &region, DEFAULT_CELL_CAP, |_| {}).unwrap();
        prop_assert_eq!(plans, naive.len() as u64);
        for party in Party::BOTH {
            let found = max_wins_bruteforce(&grid, &region, party, DEFAULT_CELL_CAP);
            if naive.is_empty() {
                prop_assert!(found.is_err());
                continue;
            }
            let found = found.unwrap();
            let max = naive.iter().map(|p| wins(&grid, p, party)).max().unwrap();
            let min = naive.iter().map(|p| wins(&grid, p, party)).min().unwrap();
            prop_assert_eq!((found.max_wins, found.min_wins), (max, min));
        }
    }

    #[test]
    fn tilings_split_districts_three_ways(quarters in proptest::collection::vec(0u8..=4, 16)) {
        let grid = grid_from(4, 4, &quarters);
        for (h, w) in [(1, 4), (4, 1), (2, 2)] {
            let plan = tiling_plan(4, h, w).unwrap();
            prop_assert!(validate_plan(&grid, &plan).is_ok());
            let a = count_wins(&grid, &plan, Party::A).unwrap();
            let b = count_wins(&grid, &plan, Party::B).unwrap();
            let ties = plan
                .districts()
                .iter()
                .filter(|d| grid.party_support(d.cells(), Party::A).double() == Ratio::from(4u64))
                .count() as u64;
            prop_assert_eq!(a + b + ties, 4);
        }
    }
}

#[test]
fn full_four_by_four_tilings_match() {
    let grid = grid_from(4, 4, &[0; 16]);
    // The naive oracle handles 16 cells for d = 4 in reasonable time.
    let all: Vec<Cell> = grid.cells().collect();
    let naive = naive_partitions(&all, 4);
    assert_eq!(naive.len(), 117);
    assert_eq!(enumerate_plans(&grid, &all, DEFAULT_CELL_CAP, |_| {}).unwrap(), 117);
}
