//! The protocol: preferences, outcome classification, coin-flip
//! resolution and fairness reporting.
//!
//! Every operation works on a [`SplitGame`], so the same code drives the
//! unconstrained profiles and the constrained grid instances.

mod sweep;

pub use sweep::{check_instance, property_sweep, sub_seed, InstanceReport, SweepReport, SweepViolation};

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{Party, SideRef};
use crate::ratio::Ratio;
use crate::strategy::SplitGame;
use crate::targets::{k_split_target, TargetValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preference {
    Option1,
    Option2,
    Indifferent,
}

impl Preference {
    fn label(self) -> &'static str {
        match self {
            Preference::Option1 => "option1",
            Preference::Option2 => "option2",
            Preference::Indifferent => "indifferent",
        }
    }

    fn option(self) -> Option<SplitOption> {
        match self {
            Preference::Option1 => Some(SplitOption::Option1),
            Preference::Option2 => Some(SplitOption::Option2),
            Preference::Indifferent => None,
        }
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

impl Serialize for Preference {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// Which party draws which side of a split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitOption {
    /// A draws `L_k`, B draws `R_k`.
    Option1,
    /// B draws `L_k`, A draws `R_k`.
    Option2,
}

impl SplitOption {
    /// The side `party` draws under this option.
    pub fn side_of(self, party: Party, k: usize) -> SideRef {
        match (self, party) {
            (SplitOption::Option1, Party::A) | (SplitOption::Option2, Party::B) => SideRef::left(k),
            _ => SideRef::right(k),
        }
    }
}

impl fmt::Display for SplitOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            SplitOption::Option1 => "option1",
            SplitOption::Option2 => "option2",
        })
    }
}

impl Serialize for SplitOption {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Assignment {
    pub k: usize,
    pub option: SplitOption,
}

impl Assignment {
    /// `(wins for A, wins for B)` under optimal play on both sides.
    pub fn wins<G: SplitGame + ?Sized>(self, game: &G) -> (u64, u64) {
        let a = game.total_wins(Party::A, self.option.side_of(Party::A, self.k));
        (a, game.district_count() as u64 - a)
    }
}

/// Per-split `(A, B)` preferences for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PreferenceTable {
    entries: Vec<(Preference, Preference)>,
}

impl PreferenceTable {
    pub fn new(entries: Vec<(Preference, Preference)>) -> Self {
        PreferenceTable { entries }
    }

    pub fn get(&self, k: usize) -> Option<(Preference, Preference)> {
        self.entries.get(k).copied()
    }

    pub fn set(&mut self, k: usize, prefs: (Preference, Preference)) {
        self.entries[k] = prefs;
    }

    /// Number of splits covered (`n + 1` for a state of `n` districts).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Preference, Preference)> + '_ {
        self.entries.iter().enumerate().map(|(k, &(a, b))| (k, a, b))
    }
}

fn prefer(own_option1: u64, own_option2: u64) -> Preference {
    match own_option1.cmp(&own_option2) {
        std::cmp::Ordering::Greater => Preference::Option1,
        std::cmp::Ordering::Less => Preference::Option2,
        std::cmp::Ordering::Equal => Preference::Indifferent,
    }
}

/// Preferences of two district-maximizing parties that share one voting model.
///
/// At `k = 0` both parties ask for the (whole-state) right side, and at
/// `k = n` for the left side, whatever the counts say.
pub fn optimal_preferences<G: SplitGame + ?Sized>(game: &G) -> PreferenceTable {
    let n = game.district_count();
    let mut entries = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let entry = if k == 0 {
            (Preference::Option2, Preference::Option1)
        } else if k == n {
            (Preference::Option1, Preference::Option2)
        } else {
            let a = prefer(game.total_wins(Party::A, SideRef::left(k)), game.total_wins(Party::A, SideRef::right(k)));
            let b = prefer(game.total_wins(Party::B, SideRef::right(k)), game.total_wins(Party::B, SideRef::left(k)));
            (a, b)
        };
        entries.push(entry);
    }
    PreferenceTable::new(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    /// Outcome 1: both parties prefer the same option.
    Agreement,
    /// Outcome 2: one party is indifferent, the other is not.
    Deferred,
    /// Outcome 3: both parties are indifferent.
    BothIndifferent,
    /// Outcome 4: opposed preferences switch between the `(k-1)`- and `k`-splits.
    CoinFlip,
}

impl OutcomeKind {
    pub fn number(self) -> u8 {
        match self {
            OutcomeKind::Agreement => 1,
            OutcomeKind::Deferred => 2,
            OutcomeKind::BothIndifferent => 3,
            OutcomeKind::CoinFlip => 4,
        }
    }
}

/// Which outcome rule fires and at which split. For a coin flip `k` is the
/// later split of the pair `(k - 1, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub outcome: OutcomeKind,
    pub k: usize,
}

/// Applies the four outcome rules in order, each at the smallest qualifying `k`.
pub fn classify_outcome(prefs: &PreferenceTable) -> Result<Classification> {
    if prefs.is_empty() {
        return Err(Error::MalformedPreferences { expected: 1, found: 0 });
    }
    let found = |outcome: OutcomeKind, test: &dyn Fn(Preference, Preference) -> bool| {
        prefs.iter().find(|&(_, a, b)| test(a, b)).map(|(k, _, _)| Classification { outcome, k })
    };
    use Preference::*;
    if let Some(c) = found(OutcomeKind::Agreement, &|a, b| a == b && a != Indifferent) {
        return Ok(c);
    }
    if let Some(c) = found(OutcomeKind::Deferred, &|a, b| (a == Indifferent) != (b == Indifferent)) {
        return Ok(c);
    }
    if let Some(c) = found(OutcomeKind::BothIndifferent, &|a, b| a == Indifferent && b == Indifferent) {
        return Ok(c);
    }
    (1..prefs.len())
        .find(|&k| prefs.get(k - 1) == Some((Option2, Option1)) && prefs.get(k) == Some((Option1, Option2)))
        .map(|k| Classification { outcome: OutcomeKind::CoinFlip, k })
        .ok_or(Error::NoOutcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub assignment: Assignment,
    #[serde(rename = "winsA")]
    pub wins_a: u64,
    #[serde(rename = "winsB")]
    pub wins_b: u64,
}

/// The four coin-flip options for the `(k - 1, k)` pair, in canonical order:
/// Option 1 then Option 2 of the `(k-1)`-split, then of the `k`-split.
pub fn coinflip_options<G: SplitGame + ?Sized>(game: &G, k: usize) -> Result<[Candidate; 4]> {
    let n = game.district_count();
    if k == 0 || k > n {
        return Err(Error::SplitOutOfRange { k, n });
    }
    let make = |k, option| {
        let assignment = Assignment { k, option };
        let (wins_a, wins_b) = assignment.wins(game);
        Candidate { assignment, wins_a, wins_b }
    };
    Ok([
        make(k - 1, SplitOption::Option1),
        make(k - 1, SplitOption::Option2),
        make(k, SplitOption::Option1),
        make(k, SplitOption::Option2),
    ])
}

/// The result of one protocol run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProtocolRun {
    pub n: usize,
    pub outcome: OutcomeKind,
    pub outcome_number: u8,
    /// Split at which the outcome rule fired.
    pub k: usize,
    /// The four coin-flip options; empty for other outcomes.
    pub candidates: Vec<Candidate>,
    /// Index into `candidates` chosen by the seed.
    pub candidate_index: Option<usize>,
    pub assignment: Assignment,
    #[serde(rename = "winsA")]
    pub wins_a: u64,
    #[serde(rename = "winsB")]
    pub wins_b: u64,
    /// The seed, when the outcome consumed randomness.
    pub seed: Option<u64>,
}

/// Runs the protocol. Outcomes 1 and 2 are deterministic; Outcome 3 takes
/// Option 1 on an even seed and Option 2 on an odd one; Outcome 4 takes
/// candidate `seed % 4`.
pub fn resolve_protocol<G: SplitGame + ?Sized>(game: &G, prefs: &PreferenceTable, seed: u64) -> Result<ProtocolRun> {
    let n = game.district_count();
    if prefs.len() != n + 1 {
        return Err(Error::MalformedPreferences { expected: n + 1, found: prefs.len() });
    }
    let class = classify_outcome(prefs)?;
    let (a, b) = prefs.get(class.k).expect("classified k is in the table");
    let mut candidates = Vec::new();
    let mut candidate_index = None;
    let mut used_seed = None;
    let assignment = match class.outcome {
        OutcomeKind::Agreement => Assignment { k: class.k, option: a.option().expect("agreement is not indifferent") },
        OutcomeKind::Deferred => {
            let option = a.option().or(b.option()).expect("one party has a preference");
            Assignment { k: class.k, option }
        }
        OutcomeKind::BothIndifferent => {
            used_seed = Some(seed);
            let option = if seed.is_multiple_of(2) { SplitOption::Option1 } else { SplitOption::Option2 };
            Assignment { k: class.k, option }
        }
        OutcomeKind::CoinFlip => {
            used_seed = Some(seed);
            let options = coinflip_options(game, class.k)?;
            let index = (seed % 4) as usize;
            candidates = options.to_vec();
            candidate_index = Some(index);
            options[index].assignment
        }
    };
    let (wins_a, wins_b) = assignment.wins(game);
    Ok(ProtocolRun {
        n,
        outcome: class.outcome,
        outcome_number: class.outcome.number(),
        k: class.k,
        candidates,
        candidate_index,
        assignment,
        wins_a,
        wins_b,
        seed: used_seed,
    })
}

/// Largest `|geo_k(P) - wins|` allowed after a coin flip, in halves.
pub const SPLIT_TARGET_BOUND_HALVES: u64 = 3;
/// Largest `|geo(P) - wins|` allowed after a coin flip, in halves.
pub const TARGET_BOUND_HALVES: u64 = 4;

/// Spread of one party's deltas over the four coin-flip options.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateDeltas {
    pub min_delta_geo: Ratio,
    pub max_delta_geo: Ratio,
    pub min_delta_geo_split: Ratio,
    pub max_delta_geo_split: Ratio,
    /// Bounds hold for every candidate.
    pub all_within_bounds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PartyFairness {
    pub party: Party,
    pub wins: u64,
    pub geo: TargetValue,
    /// `geo_k(P)` for the split of the resolved assignment.
    pub geo_split: TargetValue,
    pub delta_geo: Ratio,
    pub delta_geo_split: Ratio,
    pub within_geo_bound: bool,
    pub within_split_bound: bool,
    pub candidates: Option<CandidateDeltas>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitTarget {
    pub k: usize,
    #[serde(rename = "geoA")]
    pub geo_a: TargetValue,
    #[serde(rename = "geoB")]
    pub geo_b: TargetValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FairnessReport {
    /// `geo_k` for the split(s) that triggered the outcome.
    pub split_targets: Vec<SplitTarget>,
    #[serde(rename = "A")]
    pub a: PartyFairness,
    #[serde(rename = "B")]
    pub b: PartyFairness,
}

impl FairnessReport {
    pub fn party(&self, party: Party) -> &PartyFairness {
        match party {
            Party::A => &self.a,
            Party::B => &self.b,
        }
    }

    /// Both parties stay within both coin-flip bounds, for the realized
    /// assignment and for every candidate.
    pub fn within_bounds(&self) -> bool {
        [&self.a, &self.b].iter().all(|p| {
            p.within_geo_bound && p.within_split_bound && p.candidates.as_ref().is_none_or(|c| c.all_within_bounds)
        })
    }
}

fn within(delta: &Ratio, halves: u64) -> bool {
    delta.abs().double() <= Ratio::from(halves)
}

fn party_wins(party: Party, wins_a: u64, wins_b: u64) -> u64 {
    match party {
        Party::A => wins_a,
        Party::B => wins_b,
    }
}

/// Exact deltas `geo - wins` and `geo_k - wins` for both parties.
pub fn fairness_report<G: SplitGame + ?Sized>(game: &G, run: &ProtocolRun) -> Result<FairnessReport> {
    let n = game.district_count();
    if run.n != n {
        return Err(Error::MismatchedRun(format!("run has {} districts, state has {n}", run.n)));
    }
    if run.assignment.k > n {
        return Err(Error::SplitOutOfRange { k: run.assignment.k, n });
    }
    if run.assignment.wins(game) != (run.wins_a, run.wins_b) {
        return Err(Error::MismatchedRun("recorded win counts differ from optimal play".into()));
    }
    for c in &run.candidates {
        if c.assignment.k > n || c.assignment.wins(game) != (c.wins_a, c.wins_b) {
            return Err(Error::MismatchedRun(format!("candidate {:?} does not match the state", c.assignment)));
        }
    }
    let splits: Vec<usize> = match run.outcome {
        OutcomeKind::CoinFlip => vec![run.k - 1, run.k],
        _ => vec![run.k],
    };
    let split_targets = splits
        .iter()
        .map(|&k| {
            Ok(SplitTarget { k, geo_a: k_split_target(game, Party::A, k)?, geo_b: k_split_target(game, Party::B, k)? })
        })
        .collect::<Result<Vec<_>>>()?;

    let per_party = |party: Party| -> Result<PartyFairness> {
        let geo = game.geometric_target(party);
        let wins = party_wins(party, run.wins_a, run.wins_b);
        let geo_split = k_split_target(game, party, run.assignment.k)?;
        let delta_geo = geo.minus_wins(wins);
        let delta_geo_split = geo_split.minus_wins(wins);
        let candidates = if run.candidates.is_empty() {
            None
        } else {
            let mut geo_deltas = Vec::new();
            let mut split_deltas = Vec::new();
            for c in &run.candidates {
                let w = party_wins(party, c.wins_a, c.wins_b);
                geo_deltas.push(geo.minus_wins(w));
                split_deltas.push(k_split_target(game, party, c.assignment.k)?.minus_wins(w));
            }
            let all_within_bounds = geo_deltas.iter().all(|d| within(d, TARGET_BOUND_HALVES))
                && split_deltas.iter().all(|d| within(d, SPLIT_TARGET_BOUND_HALVES));
            Some(CandidateDeltas {
                min_delta_geo: geo_deltas.iter().min().cloned().expect("four candidates"),
                max_delta_geo: geo_deltas.iter().max().cloned().expect("four candidates"),
                min_delta_geo_split: split_deltas.iter().min().cloned().expect("four candidates"),
                max_delta_geo_split: split_deltas.iter().max().cloned().expect("four candidates"),
                all_within_bounds,
            })
        };
        Ok(PartyFairness {
            party,
            wins,
            geo,
            geo_split,
            within_geo_bound: within(&delta_geo, TARGET_BOUND_HALVES),
            within_split_bound: within(&delta_geo_split, SPLIT_TARGET_BOUND_HALVES),
            delta_geo,
            delta_geo_split,
            candidates,
        })
    };

    Ok(FairnessReport { split_targets, a: per_party(Party::A)?, b: per_party(Party::B)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::model::{SplitProfile, ValidProfile};
    use Preference::*;

    fn two_gap() -> ValidProfile {
        builtin::two_gap_profile().validate().unwrap()
    }

    fn table(n: usize, fill: (Preference, Preference)) -> PreferenceTable {
        PreferenceTable::new(vec![fill; n + 1])
    }

    #[test]
    fn two_gap_preferences_switch_between_five_and_six() {
        let prefs = optimal_preferences(&two_gap());
        assert_eq!(prefs.get(5), Some((Option2, Option1)));
        assert_eq!(prefs.get(6), Some((Option1, Option2)));
        assert_eq!(prefs.get(0), Some((Option2, Option1)));
        assert_eq!(prefs.get(10), Some((Option1, Option2)));
        assert_eq!(classify_outcome(&prefs).unwrap(), Classification { outcome: OutcomeKind::CoinFlip, k: 6 });
    }

    #[test]
    fn symmetric_profile_makes_both_indifferent() {
        // A(L_1) = A(R_1) = 1 on a two-district state with 0.7 then 0.1.
        let p = SplitProfile::parse(&["0.7", "0.1"]).unwrap().validate().unwrap();
        assert_eq!(p.total_wins(Party::A, SideRef::left(1)), 1);
        assert_eq!(p.total_wins(Party::A, SideRef::right(1)), 1);
        let prefs = optimal_preferences(&p);
        assert_eq!(prefs.get(1), Some((Indifferent, Indifferent)));
        let run = resolve_protocol(&p, &prefs, 7).unwrap();
        assert_eq!(run.outcome, OutcomeKind::BothIndifferent);
        assert_eq!(run.assignment, Assignment { k: 1, option: SplitOption::Option2 });
        assert_eq!(run.seed, Some(7));
        let even = resolve_protocol(&p, &prefs, 8).unwrap();
        assert_eq!(even.assignment.option, SplitOption::Option1);
        assert_eq!((even.wins_a, run.wins_a), (1, 1));
    }

    #[test]
    fn agreement_wins_over_everything() {
        let mut prefs = table(4, (Option2, Option1));
        prefs.set(2, (Indifferent, Indifferent));
        prefs.set(3, (Option1, Option1));
        assert_eq!(classify_outcome(&prefs).unwrap(), Classification { outcome: OutcomeKind::Agreement, k: 3 });
    }

    #[test]
    fn deferral_adopts_the_decided_party() {
        let mut prefs = table(4, (Option2, Option1));
        prefs.set(1, (Indifferent, Indifferent));
        prefs.set(2, (Indifferent, Option2));
        assert_eq!(classify_outcome(&prefs).unwrap(), Classification { outcome: OutcomeKind::Deferred, k: 2 });
        let p = SplitProfile::parse(&["0.3", "0.3", "0.3", "0.3"]).unwrap().validate().unwrap();
        let run = resolve_protocol(&p, &prefs, 5).unwrap();
        assert_eq!(run.assignment, Assignment { k: 2, option: SplitOption::Option2 });
        assert_eq!(run.seed, None);
    }

    #[test]
    fn agreement_ignores_the_seed() {
        let p = two_gap();
        let mut prefs = optimal_preferences(&p);
        prefs.set(3, (Option1, Option1));
        let runs: Vec<_> = (0..8).map(|s| resolve_protocol(&p, &prefs, s).unwrap()).collect();
        assert!(runs.iter().all(|r| r == &runs[0]));
        assert_eq!(runs[0].outcome, OutcomeKind::Agreement);
        assert_eq!(runs[0].k, 3);
    }

    #[test]
    fn malformed_and_outcomeless_tables() {
        assert!(matches!(classify_outcome(&PreferenceTable::new(vec![])), Err(Error::MalformedPreferences { .. })));
        assert_eq!(classify_outcome(&table(3, (Option2, Option1))), Err(Error::NoOutcome));
        let p = two_gap();
        assert_eq!(
            resolve_protocol(&p, &table(3, (Option1, Option1)), 0),
            Err(Error::MalformedPreferences { expected: 11, found: 4 })
        );
    }

    #[test]
    fn coinflip_candidates() {
        let p = two_gap();
        let c = coinflip_options(&p, 6).unwrap();
        let a: Vec<u64> = c.iter().map(|c| c.wins_a).collect();
        let b: Vec<u64> = c.iter().map(|c| c.wins_b).collect();
        assert_eq!(a, vec![3, 4, 5, 2]);
        assert_eq!(b, vec![7, 6, 5, 8]);
        assert!(coinflip_options(&p, 0).is_err());
        assert!(coinflip_options(&p, 11).is_err());
    }

    #[test]
    fn seeds_pick_candidates_in_order() {
        let p = two_gap();
        let prefs = optimal_preferences(&p);
        let three = resolve_protocol(&p, &prefs, 3).unwrap();
        assert_eq!((three.wins_a, three.wins_b), (2, 8));
        assert_eq!(three.assignment, Assignment { k: 6, option: SplitOption::Option2 });
        let two = resolve_protocol(&p, &prefs, 2).unwrap();
        assert_eq!((two.wins_a, two.wins_b), (5, 5));
        assert_eq!(resolve_protocol(&p, &prefs, 6).unwrap().assignment, two.assignment);
    }

    #[test]
    fn worst_candidate_meets_both_bounds_exactly() {
        let p = two_gap();
        let run = resolve_protocol(&p, &optimal_preferences(&p), 3).unwrap();
        let report = fairness_report(&p, &run).unwrap();
        assert_eq!(report.a.delta_geo.to_string(), "2");
        assert_eq!(report.a.delta_geo_split.to_string(), "3/2");
        assert!(report.a.within_geo_bound && report.a.within_split_bound);
        assert!(report.within_bounds());
        let spread = report.a.candidates.as_ref().unwrap();
        assert_eq!(spread.max_delta_geo.to_string(), "2");
        assert_eq!(spread.min_delta_geo.to_string(), "-1");
        assert_eq!(report.split_targets.len(), 2);
        assert_eq!(report.split_targets[0].geo_a.to_string(), "7/2");
    }

    #[test]
    fn four_wins_hits_the_target() {
        let p = two_gap();
        let run = resolve_protocol(&p, &optimal_preferences(&p), 1).unwrap();
        assert_eq!(run.wins_a, 4);
        let report = fairness_report(&p, &run).unwrap();
        assert!(report.a.delta_geo.is_zero());
    }

    #[test]
    fn mismatched_run_is_rejected() {
        let p = two_gap();
        let mut run = resolve_protocol(&p, &optimal_preferences(&p), 0).unwrap();
        let other = SplitProfile::parse(&["0.3", "0.3", "0.3"]).unwrap().validate().unwrap();
        assert!(matches!(fairness_report(&other, &run), Err(Error::MismatchedRun(_))));
        run.wins_a += 1;
        assert!(matches!(fairness_report(&p, &run), Err(Error::MismatchedRun(_))));
    }
}
