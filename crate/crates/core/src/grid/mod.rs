//! Square-grid states with contiguity and compactness constraints.
//!
//! Cells are addressed 1-based, row 1 at the top and column 1 at the left.
//! Each cell carries party A's share of support in `[0, 1]`; a district is
//! `d` cells, 4-connected, without holes, and fits in an axis-aligned
//! `z x z` box with `z = floor(2 sqrt d)`.

mod enumerate;
mod geodelta;
mod oracle;

pub use enumerate::{enumerate_plans, max_wins_bruteforce, BruteForce, DEFAULT_CELL_CAP};
pub use geodelta::{
    geodelta_report, geodelta_side_wins, make_geodelta, shrunk_geodelta, tiling_plan, GeodeltaReport, GridInstance,
};
pub use oracle::{check_grid_oracle, random_grid, GridOracleReport};

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::Party;
use crate::ratio::Ratio;

/// `floor(2 sqrt d)`, computed as the integer square root of `4d`.
pub fn compactness_bound(d: usize) -> usize {
    (4 * d).isqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    fn neighbors(self) -> [Cell; 4] {
        // Row/column 0 never belongs to a grid, so wrapping there is harmless.
        [
            Cell::new(self.row.wrapping_sub(1), self.col),
            Cell::new(self.row + 1, self.col),
            Cell::new(self.row, self.col.wrapping_sub(1)),
            Cell::new(self.row, self.col + 1),
        ]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.row, self.col].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [row, col] = <[usize; 2]>::deserialize(deserializer)?;
        Ok(Cell { row, col })
    }
}

/// An `m x m` grid of support values, to be cut into districts of `d` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridState {
    m: usize,
    d: usize,
    cells: Vec<Ratio>,
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    m: usize,
    d: usize,
    cells: Vec<Vec<Ratio>>,
}

impl GridState {
    /// `rows` is row-major, row 1 first.
    pub fn new(m: usize, d: usize, rows: Vec<Vec<Ratio>>) -> Result<Self> {
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::Grid { field: "cells", reason: format!("expected {m} rows of {m} values") });
        }
        Self::from_row_major(m, d, rows.into_iter().flatten().collect())
    }

    pub fn from_row_major(m: usize, d: usize, cells: Vec<Ratio>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Grid { field: "m", reason: "must be positive".into() });
        }
        if d == 0 || !(m * m).is_multiple_of(d) {
            return Err(Error::Grid { field: "d", reason: format!("must be a positive divisor of m^2 = {}", m * m) });
        }
        if cells.len() != m * m {
            return Err(Error::Grid { field: "cells", reason: format!("expected {} values", m * m) });
        }
        if let Some((i, v)) = cells.iter().enumerate().find(|(_, v)| v.is_negative() || *v > &Ratio::one()) {
            return Err(Error::Grid {
                field: "cells",
                reason: format!("a{} = {v} is outside [0, 1]", Cell::new(i / m + 1, i % m + 1)),
            });
        }
        let z = compactness_bound(d);
        if z * z < d {
            return Err(Error::Grid { field: "d", reason: format!("a district of {d} cells cannot fit in {z}x{z}") });
        }
        Ok(GridState { m, d, cells })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GridFile =
            serde_json::from_str(text).map_err(|e| Error::Grid { field: "json", reason: e.to_string() })?;
        GridState::new(file.m, file.d, file.cells)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn z(&self) -> usize {
        compactness_bound(self.d)
    }

    pub fn district_count(&self) -> usize {
        self.m * self.m / self.d
    }

    pub fn contains(&self, cell: Cell) -> bool {
        (1..=self.m).contains(&cell.row) && (1..=self.m).contains(&cell.col)
    }

    pub(crate) fn index(&self, cell: Cell) -> usize {
        (cell.row - 1) * self.m + (cell.col - 1)
    }

    /// `a_{i,j}`. Panics outside the grid.
    pub fn support(&self, cell: Cell) -> &Ratio {
        assert!(self.contains(cell), "{cell} is outside the {0}x{0} grid", self.m);
        &self.cells[self.index(cell)]
    }

    pub fn total_support(&self) -> Ratio {
        self.cells.iter().sum()
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (1..=self.m).flat_map(move |row| (1..=self.m).map(move |col| Cell::new(row, col)))
    }

    /// Support of `party` summed over `cells`.
    pub fn party_support(&self, cells: &[Cell], party: Party) -> Ratio {
        let a: Ratio = cells.iter().map(|&c| self.support(c)).sum();
        match party {
            Party::A => a,
            Party::B => Ratio::from(cells.len()) - a,
        }
    }

    /// Strict majority of `d / 2`; a tie goes to neither party.
    pub fn wins_district(&self, cells: &[Cell], party: Party) -> bool {
        self.party_support(cells, party).double() > Ratio::from(self.d)
    }
}

impl Serialize for GridState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let cells = self.cells.chunks(self.m).map(|r| r.to_vec()).collect();
        GridFile { m: self.m, d: self.d, cells }.serialize(serializer)
    }
}

/// A set of cells drawn as one district. Cells are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct District(Vec<Cell>);

impl District {
    pub fn new(mut cells: Vec<Cell>) -> Self {
        cells.sort_unstable();
        District(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DistrictPlan(Vec<District>);

impl DistrictPlan {
    pub fn new(districts: Vec<District>) -> Self {
        DistrictPlan(districts)
    }

    pub fn districts(&self) -> &[District] {
        &self.0
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Grid { field: "plan", reason: e.to_string() })
    }
}

/// Nested left regions, given as the increments `L_k \ L_{k-1}` for `k = 1..`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridSplitSequence(Vec<Vec<Cell>>);

impl GridSplitSequence {
    pub fn new(steps: Vec<Vec<Cell>>) -> Self {
        GridSplitSequence(steps)
    }

    pub fn steps(&self) -> &[Vec<Cell>] {
        &self.0
    }

    /// Number of districts, i.e. the last split index.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The cells of `L_k`.
    pub fn left(&self, k: usize) -> Vec<Cell> {
        self.0[..k].iter().flatten().copied().collect()
    }

    /// For each cell in row-major order, the split index at which it joins
    /// the left region. Fails unless the steps are `d`-cell pieces that
    /// partition the grid.
    pub fn entry_index(&self, grid: &GridState) -> Result<Vec<usize>> {
        let bad = |reason: String| Error::Grid { field: "splits", reason };
        if self.len() != grid.district_count() {
            return Err(bad(format!("{} steps for {} districts", self.len(), grid.district_count())));
        }
        let mut entry = vec![0usize; grid.m * grid.m];
        for (i, step) in self.0.iter().enumerate() {
            if step.len() != grid.d {
                return Err(bad(format!("step {} has {} cells, expected {}", i + 1, step.len(), grid.d)));
            }
            for &cell in step {
                if !grid.contains(cell) {
                    return Err(bad(format!("{cell} is outside the grid")));
                }
                let slot = &mut entry[grid.index(cell)];
                if *slot != 0 {
                    return Err(bad(format!("{cell} appears in steps {} and {}", slot, i + 1)));
                }
                *slot = i + 1;
            }
        }
        Ok(entry)
    }
}

/// Why a single district is not admissible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistrictProblem {
    WrongSize { cells: usize, expected: usize },
    OutsideGrid { cell: Cell },
    Disconnected,
    HasHole { cell: Cell },
    NotCompact { height: usize, width: usize, z: usize },
}

/// Why a plan is not a valid districting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanViolation {
    District { index: usize, problem: DistrictProblem },
    Overlap { cell: Cell },
    OutsideRegion { cell: Cell },
    Uncovered { cells: usize },
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanViolation::District { index, problem } => write!(f, "district {index}: {problem:?}"),
            PlanViolation::Overlap { cell } => write!(f, "{cell} is in more than one district"),
            PlanViolation::OutsideRegion { cell } => write!(f, "{cell} is outside the region"),
            PlanViolation::Uncovered { cells } => write!(f, "{cells} cells belong to no district"),
        }
    }
}

/// Checks one district: size `d`, inside an `m x m` grid, 4-connected, no
/// holes, and a bounding box at most `z x z`.
///
/// A hole is a 4-connected component of the complement that cannot reach
/// the outside of the district's bounding box.
pub fn check_district(m: usize, d: usize, cells: &[Cell]) -> Vec<DistrictProblem> {
    let mut problems = Vec::new();
    if cells.len() != d {
        problems.push(DistrictProblem::WrongSize { cells: cells.len(), expected: d });
    }
    let inside = |c: &Cell| (1..=m).contains(&c.row) && (1..=m).contains(&c.col);
    if let Some(&cell) = cells.iter().find(|c| !inside(c)) {
        problems.push(DistrictProblem::OutsideGrid { cell });
    }
    if cells.is_empty() {
        return problems;
    }
    let set: HashSet<Cell> = cells.iter().copied().collect();

    let mut seen = HashSet::from([cells[0]]);
    let mut queue = VecDeque::from([cells[0]]);
    while let Some(c) = queue.pop_front() {
        for nb in c.neighbors() {
            if set.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    if seen.len() != set.len() {
        problems.push(DistrictProblem::Disconnected);
    }

    let rmin = cells.iter().map(|c| c.row).min().unwrap();
    let rmax = cells.iter().map(|c| c.row).max().unwrap();
    let cmin = cells.iter().map(|c| c.col).min().unwrap();
    let cmax = cells.iter().map(|c| c.col).max().unwrap();
    let (height, width) = (rmax - rmin + 1, cmax - cmin + 1);
    let z = compactness_bound(d);
    if height > z || width > z {
        problems.push(DistrictProblem::NotCompact { height, width, z });
    }

    // Flood the complement inside the box grown by one cell on every side.
    // Coordinates are shifted by one so the margin stays non-negative.
    let (h, w) = (height + 2, width + 2);
    let local = |r: usize, c: usize| r * w + c;
    let mut blocked = vec![false; h * w];
    for cell in &set {
        blocked[local(cell.row - rmin + 1, cell.col - cmin + 1)] = true;
    }
    let mut reached = vec![false; h * w];
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    reached[0] = true;
    while let Some((r, c)) = queue.pop_front() {
        let steps = [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)];
        for (nr, nc) in steps {
            if nr < h && nc < w && !blocked[local(nr, nc)] && !reached[local(nr, nc)] {
                reached[local(nr, nc)] = true;
                queue.push_back((nr, nc));
            }
        }
    }
    let hole =
        (0..h).flat_map(|r| (0..w).map(move |c| (r, c))).find(|&(r, c)| !blocked[local(r, c)] && !reached[local(r, c)]);
    if let Some((r, c)) = hole {
        problems.push(DistrictProblem::HasHole { cell: Cell::new(r + rmin - 1, c + cmin - 1) });
    }
    problems
}

/// Validates `plan` as a districting of `region`: the districts are
/// pairwise disjoint, cover the region exactly, and each is admissible.
pub fn validate_partition(
    grid: &GridState,
    region: &[Cell],
    plan: &DistrictPlan,
) -> std::result::Result<(), Vec<PlanViolation>> {
    let mut violations = Vec::new();
    let region: HashSet<Cell> = region.iter().copied().collect();
    let mut covered = HashSet::new();
    for (index, district) in plan.districts().iter().enumerate() {
        for problem in check_district(grid.m, grid.d, district.cells()) {
            violations.push(PlanViolation::District { index, problem });
        }
        for &cell in district.cells() {
            if !region.contains(&cell) {
                violations.push(PlanViolation::OutsideRegion { cell });
            } else if !covered.insert(cell) {
                violations.push(PlanViolation::Overlap { cell });
            }
        }
    }
    let missing = region.len() - covered.len();
    if missing > 0 {
        violations.push(PlanViolation::Uncovered { cells: missing });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Validates `plan` as a districting of the whole grid.
pub fn validate_plan(grid: &GridState, plan: &DistrictPlan) -> std::result::Result<(), Vec<PlanViolation>> {
    let all: Vec<Cell> = grid.cells().collect();
    validate_partition(grid, &all, plan)
}

/// Districts in `plan` won by `party` with a strict majority of `d / 2`.
pub fn count_wins(grid: &GridState, plan: &DistrictPlan, party: Party) -> Result<u64> {
    if let Err(v) = validate_plan(grid, plan) {
        return Err(Error::InvalidPlan(v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")));
    }
    Ok(count_wins_unchecked(grid, plan, party))
}

pub(crate) fn count_wins_unchecked(grid: &GridState, plan: &DistrictPlan, party: Party) -> u64 {
    plan.districts().iter().filter(|d| grid.wins_district(d.cells(), party)).count() as u64
}
