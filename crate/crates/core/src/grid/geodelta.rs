//! The grid family on which the protocol misses the geometric target by
//! `delta / 2`, plus a 4-cell-district analogue small enough to enumerate.
//!
//! The grid is `20 delta` cells wide with districts of 100. Each 20-row band
//! holds one group of 51 ones: a 5x10 block in its first five rows and a
//! single cell below the block's corner. Party A wins a district only by
//! swallowing a whole group, so A's best count on a side is the number of
//! groups lying wholly inside it. Splits `1..delta` cut a 20x5 strip off
//! each band in turn, severing its group; split `delta` takes the 10x10
//! block holding the last group intact.

use serde::Serialize;

use super::{count_wins, Cell, District, DistrictPlan, GridSplitSequence, GridState};
use crate::error::{Error, Result};
use crate::model::{Party, Side, SideRef};
use crate::protocol::{fairness_report, optimal_preferences, resolve_protocol, FairnessReport, ProtocolRun};
use crate::ratio::Ratio;
use crate::strategy::SplitGame;
use crate::targets::TargetValue;

const BAND: usize = 20;
const D: usize = 100;

/// A grid with a split sequence and groups of cells that A must keep
/// together to win. Implements [`SplitGame`] by counting intact groups.
#[derive(Debug, Clone)]
pub struct GridInstance {
    pub grid: GridState,
    pub splits: GridSplitSequence,
    groups: Vec<Vec<Cell>>,
    /// Per group, the first and last split index at which its cells join `L_k`.
    entry: Vec<(usize, usize)>,
}

impl GridInstance {
    pub fn new(grid: GridState, splits: GridSplitSequence, groups: Vec<Vec<Cell>>) -> Result<Self> {
        let entry_index = splits.entry_index(&grid)?;
        let mut entry = Vec::with_capacity(groups.len());
        for group in &groups {
            if group.is_empty() || group.iter().any(|&c| !grid.contains(c)) {
                return Err(Error::Grid { field: "groups", reason: "empty group or cell outside the grid".into() });
            }
            let ks = group.iter().map(|&c| entry_index[grid.index(c)]);
            entry.push((ks.clone().min().unwrap(), ks.max().unwrap()));
        }
        Ok(GridInstance { grid, splits, groups, entry })
    }

    pub fn groups(&self) -> &[Vec<Cell>] {
        &self.groups
    }

    pub fn side_cells(&self, side: SideRef) -> Vec<Cell> {
        let left = self.splits.left(side.k);
        match side.side {
            Side::L => left,
            Side::R => {
                let taken: std::collections::HashSet<Cell> = left.into_iter().collect();
                self.grid.cells().filter(|c| !taken.contains(c)).collect()
            }
        }
    }

    /// Groups lying wholly inside `side`.
    pub fn intact_groups(&self, side: SideRef) -> u64 {
        let k = side.k;
        self.entry
            .iter()
            .filter(|&&(first, last)| match side.side {
                Side::L => last <= k,
                Side::R => first > k,
            })
            .count() as u64
    }

    /// Wins of `districter` when it draws `side`: the intact groups for A,
    /// every district for B.
    pub fn districter_wins(&self, side: SideRef, districter: Party) -> u64 {
        match districter {
            Party::A => self.intact_groups(side),
            Party::B => side.size(self.district_count()) as u64,
        }
    }
}

impl SplitGame for GridInstance {
    fn district_count(&self) -> usize {
        self.grid.district_count()
    }

    fn total_wins(&self, party: Party, side: SideRef) -> u64 {
        // The non-districting side always goes entirely to B.
        match party {
            Party::A => self.intact_groups(side),
            Party::B => self.district_count() as u64 - self.intact_groups(side.complement()),
        }
    }

    fn geometric_target(&self, party: Party) -> TargetValue {
        let a = self.groups.len() as u64;
        match party {
            Party::A => TargetValue::from_halves(a),
            Party::B => TargetValue::from_halves(2 * self.district_count() as u64 - a),
        }
    }
}

fn rect(rows: std::ops::RangeInclusive<usize>, cols: std::ops::RangeInclusive<usize>) -> Vec<Cell> {
    rows.flat_map(|r| cols.clone().map(move |c| Cell::new(r, c))).collect()
}

/// Appends row-major chunks of `d` unused cells until the grid is covered.
fn extend_row_major(m: usize, d: usize, mut steps: Vec<Vec<Cell>>) -> GridSplitSequence {
    let used: std::collections::HashSet<Cell> = steps.iter().flatten().copied().collect();
    let rest: Vec<Cell> = rect(1..=m, 1..=m).into_iter().filter(|c| !used.contains(c)).collect();
    steps.extend(rest.chunks(d).map(<[Cell]>::to_vec));
    GridSplitSequence::new(steps)
}

fn grid_with_ones(m: usize, d: usize, groups: &[Vec<Cell>]) -> Result<GridState> {
    let mut cells = vec![Ratio::zero(); m * m];
    for c in groups.iter().flatten() {
        cells[(c.row - 1) * m + (c.col - 1)] = Ratio::one();
    }
    GridState::from_row_major(m, d, cells)
}

/// The construction for `delta >= 1`.
pub fn make_geodelta(delta: usize) -> Result<GridInstance> {
    if delta == 0 {
        return Err(Error::DeltaOutOfRange);
    }
    let m = BAND * delta;
    let groups: Vec<Vec<Cell>> = (0..delta)
        .map(|g| {
            let top = BAND * g;
            let mut cells = rect(top + 1..=top + 5, 1..=10);
            cells.push(Cell::new(top + 6, 1));
            cells
        })
        .collect();
    let mut steps: Vec<Vec<Cell>> = (1..delta).map(|k| rect(BAND * (k - 1) + 1..=BAND * k, 1..=5)).collect();
    let top = BAND * (delta - 1);
    steps.push(rect(top + 1..=top + 10, 1..=10));
    let grid = grid_with_ones(m, D, &groups)?;
    GridInstance::new(grid, extend_row_major(m, D, steps), groups)
}

/// Scaled-down analogue with `d = 4` on a `2 delta` grid, for `delta >= 2`.
///
/// Group `l` is three ones at row `2l - 1`, columns 1 to 3. Split `k < delta`
/// takes an L-tetromino holding only the group's first cell; split `delta`
/// takes row `2 delta - 1` whole.
pub fn shrunk_geodelta(delta: usize) -> Result<GridInstance> {
    if delta < 2 {
        return Err(Error::Argument { field: "delta", reason: "the shrunk analogue needs delta >= 2".into() });
    }
    let m = 2 * delta;
    let groups: Vec<Vec<Cell>> = (1..=delta).map(|l| rect(2 * l - 1..=2 * l - 1, 1..=3)).collect();
    let mut steps: Vec<Vec<Cell>> = (1..delta)
        .map(|k| vec![Cell::new(2 * k - 1, 1), Cell::new(2 * k, 1), Cell::new(2 * k, 2), Cell::new(2 * k, 3)])
        .collect();
    steps.push(rect(2 * delta - 1..=2 * delta - 1, 1..=4));
    let grid = grid_with_ones(m, 4, &groups)?;
    GridInstance::new(grid, extend_row_major(m, 4, steps), groups)
}

/// Wins of `districter` on one side of split `k` of [`make_geodelta`].
pub fn geodelta_side_wins(delta: usize, k: usize, side: Side, districter: Party) -> Result<u64> {
    let instance = make_geodelta(delta)?;
    let n = instance.district_count();
    if k > n {
        return Err(Error::SplitOutOfRange { k, n });
    }
    Ok(instance.districter_wins(SideRef { side, k }, districter))
}

/// Tiles an `m x m` grid with `height x width` rectangles, row-major.
pub fn tiling_plan(m: usize, height: usize, width: usize) -> Result<DistrictPlan> {
    if height == 0 || width == 0 || !m.is_multiple_of(height) || !m.is_multiple_of(width) {
        return Err(Error::Grid { field: "tiling", reason: format!("{height}x{width} does not tile {m}x{m}") });
    }
    let mut districts = Vec::new();
    for r in (1..=m).step_by(height) {
        for c in (1..=m).step_by(width) {
            districts.push(District::new(rect(r..=r + height - 1, c..=c + width - 1)));
        }
    }
    Ok(DistrictPlan::new(districts))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeodeltaReport {
    pub delta: usize,
    pub m: usize,
    pub d: usize,
    pub z: usize,
    pub districts: usize,
    pub total_support_a: Ratio,
    pub geo_a: TargetValue,
    pub run: ProtocolRun,
    pub fairness: FairnessReport,
    /// A's wins under each coin-flip candidate, in canonical order.
    pub candidate_wins_a: Vec<u64>,
    pub worst_candidate_wins_a: u64,
    /// `geo(A)` minus the worst candidate.
    pub worst_gap: Ratio,
    /// The largest gap possible without geometric constraints.
    pub unconstrained_bound: Ratio,
    pub exceeds_unconstrained_bound: bool,
    /// A's wins when the whole grid is tiled by 10x10 squares.
    pub square_plan_wins_a: u64,
    /// A's wins when the whole grid is tiled by 5x20 bands.
    pub band_plan_wins_a: u64,
    pub summary: String,
}

/// Runs the protocol on [`make_geodelta`] and measures the gap to `geo(A)`.
pub fn geodelta_report(delta: usize, seed: u64) -> Result<GeodeltaReport> {
    let instance = make_geodelta(delta)?;
    let prefs = optimal_preferences(&instance);
    let run = resolve_protocol(&instance, &prefs, seed)?;
    let fairness = fairness_report(&instance, &run)?;
    let geo_a = instance.geometric_target(Party::A);

    let candidate_wins_a: Vec<u64> = run.candidates.iter().map(|c| c.wins_a).collect();
    let worst_candidate_wins_a = candidate_wins_a.iter().copied().min().unwrap_or(run.wins_a);
    let worst_gap = geo_a.minus_wins(worst_candidate_wins_a);
    let unconstrained_bound = Ratio::from(2u64);
    let exceeds = worst_gap.abs() > unconstrained_bound;

    let m = instance.grid.m();
    let square_plan_wins_a = count_wins(&instance.grid, &tiling_plan(m, 10, 10)?, Party::A)?;
    let band_plan_wins_a = count_wins(&instance.grid, &tiling_plan(m, 5, 20)?, Party::A)?;

    let summary = format!(
        "worst candidate {worst_candidate_wins_a} wins, geo {}, gap {worst_gap} {} {unconstrained_bound}",
        geo_a,
        if exceeds { ">" } else { "<=" },
    );
    Ok(GeodeltaReport {
        delta,
        m,
        d: instance.grid.d(),
        z: instance.grid.z(),
        districts: instance.district_count(),
        total_support_a: instance.grid.total_support(),
        geo_a,
        run,
        fairness,
        candidate_wins_a,
        worst_candidate_wins_a,
        worst_gap,
        unconstrained_bound,
        exceeds_unconstrained_bound: exceeds,
        square_plan_wins_a,
        band_plan_wins_a,
        summary,
    })
}
