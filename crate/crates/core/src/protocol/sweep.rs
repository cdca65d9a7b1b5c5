//! Randomized sweep over valid profiles checking every bound on optimal play
//! and on the protocol's outcome.
//!
//! Instance `i` of a sweep draws from its own ChaCha8 stream seeded with
//! [`sub_seed`]`(seed, i)`, so instances can be evaluated in any order or in
//! parallel and the report is the same.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    classify_outcome, fairness_report, optimal_preferences, resolve_protocol, Classification, OutcomeKind, Preference,
};
use crate::error::{Error, Result};
use crate::model::{Party, SideRef, SplitProfile, ValidProfile};
use crate::ratio::Ratio;
use crate::strategy::{districter_wins, wins_when_districting, wins_when_opponent_districts, SplitGame};
use crate::targets::{geometric_target, k_split_target, TargetValue};

/// Largest denominator used for random segment supports.
const MAX_DENOMINATOR: i64 = 12;
const MAX_ATTEMPTS: usize = 100_000;
const MAX_REPORTED: usize = 50;

/// SplitMix64 finalizer applied to `seed + (index + 1) * golden_gamma`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Default)]
pub struct InstanceReport {
    pub checks: BTreeMap<&'static str, u64>,
    pub violations: Vec<(&'static str, String)>,
    pub classification: Option<Classification>,
}

impl InstanceReport {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(name).or_default() += 1;
        if !ok {
            self.violations.push((name, detail()));
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

struct PartyTable {
    /// `P(L_k, P)`
    draw_left: Vec<u64>,
    /// `P(R_k, P̄)`
    kept_right: Vec<u64>,
    /// `P(L_k)`
    total_left: Vec<u64>,
    /// `P(R_k)`
    total_right: Vec<u64>,
}

impl PartyTable {
    fn new(p: &ValidProfile, party: Party) -> Self {
        let n = p.n();
        let draw_left = (0..=n).map(|k| wins_when_districting(p, party, SideRef::left(k)).unwrap()).collect();
        let kept_right = (0..=n).map(|k| wins_when_opponent_districts(p, party, SideRef::right(k)).unwrap()).collect();
        let total_left = (0..=n).map(|k| p.total_wins(party, SideRef::left(k))).collect();
        let total_right = (0..=n).map(|k| p.total_wins(party, SideRef::right(k))).collect();
        PartyTable { draw_left, kept_right, total_left, total_right }
    }
}

/// Checks every per-profile invariant, running the protocol with `seed`.
pub fn check_instance(p: &ValidProfile, seed: u64) -> InstanceReport {
    let mut rep = InstanceReport::default();
    let n = p.n();
    let half = Ratio::half();

    for k in 0..=n {
        for side in [SideRef::left(k), SideRef::right(k)] {
            let a = p.total_wins(Party::A, side);
            let b = p.total_wins(Party::B, side.complement());
            rep.check("conservation", a + b == n as u64, || format!("A({side}) + B(other) = {} at n = {n}", a + b));
        }
    }

    for party in Party::BOTH {
        let t = PartyTable::new(p, party);
        let geo = geometric_target(p, party);
        let best_worst = TargetValue::midpoint(t.total_left[n], t.total_left[0]);
        rep.check("geo_closed_form", geo == best_worst, || {
            format!("geo({party}) = {geo}, best/worst average = {best_worst}")
        });

        for k in 1..=n {
            let seg = p.segment_support(party, k).unwrap();
            let dl = t.draw_left[k] as i64 - t.draw_left[k - 1] as i64;
            let dr = t.kept_right[k] as i64 - t.kept_right[k - 1] as i64;
            if seg < half {
                rep.check("minority_left_step", (0..=1).contains(&dl), || {
                    format!("{party}: x({k}) = {seg}, P(L_k,P) step {dl}")
                });
                rep.check("minority_right_step", (0..=1).contains(&dr), || {
                    format!("{party}: x({k}) = {seg}, P(R_k,P̄) step {dr}")
                });
            } else if seg > half {
                rep.check("majority_left_step", (1..=2).contains(&dl), || {
                    format!("{party}: x({k}) = {seg}, P(L_k,P) step {dl}")
                });
                rep.check("majority_right_step", (-1..=0).contains(&dr), || {
                    format!("{party}: x({k}) = {seg}, P(R_k,P̄) step {dr}")
                });
            }
            let (l0, l1) = (t.total_left[k - 1], t.total_left[k]);
            rep.check("left_totals_step", l0 <= l1 && l1 <= l0 + 2, || {
                format!("{party}: P(L_{}) = {l0}, P(L_{k}) = {l1}", k - 1)
            });
            let (r0, r1) = (t.total_right[k - 1], t.total_right[k]);
            rep.check("right_totals_step", r1 <= r0 && r0 <= r1 + 2, || {
                format!("{party}: P(R_{}) = {r0}, P(R_{k}) = {r1}", k - 1)
            });
            let crossing = l0 > r0 && l1 < r1;
            rep.check("crossing_direction", !crossing, || format!("{party}: prefers L at {} and R at {k}", k - 1));
        }

        for k in 0..=n {
            let gk = k_split_target(p, party, k).unwrap();
            let gap = geo.value() - gk.value();
            rep.check("split_target_gap", gap.abs() <= half, || format!("{party}: geo = {geo}, geo_{k} = {gk}"));
            let best = t.total_left[k].max(t.total_right[k]);
            rep.check("good_choice", TargetValue::midpoint(best, best) >= gk, || {
                format!("{party}: best option {best} < geo_{k} = {gk}")
            });
        }
    }

    for k in 0..=n {
        let sum = k_split_target(p, Party::A, k).unwrap().halves() + k_split_target(p, Party::B, k).unwrap().halves();
        rep.check("split_target_sum", sum == 2 * n as u64, || format!("geo_{k}(A) + geo_{k}(B) = {sum}/2"));
    }

    let prefs = optimal_preferences(p);
    for (k, a, b) in prefs.iter() {
        let same = a == b && a != Preference::Indifferent;
        rep.check("shared_model_opposition", !same, || format!("both prefer {a:?} at k = {k}"));
    }

    let class = classify_outcome(&prefs);
    rep.check("outcome_exists", class.is_ok(), || format!("{class:?}"));
    let Ok(class) = class else { return rep };
    rep.classification = Some(class);

    let run = resolve_protocol(p, &prefs, seed).expect("classified table resolves");
    let again = resolve_protocol(p, &prefs, seed).expect("classified table resolves");
    rep.check("determinism", run == again, || "two runs with one seed differ".into());
    let report = fairness_report(p, &run).expect("run matches its profile");

    if class.outcome == OutcomeKind::CoinFlip {
        let k = class.k;
        for party in Party::BOTH {
            let lo = |s: SideRef| p.total_wins(party, s) as i64;
            let before = lo(SideRef::right(k - 1)) - lo(SideRef::left(k - 1));
            let after = lo(SideRef::left(k)) - lo(SideRef::right(k));
            rep.check("coinflip_gap_at_most_3", before <= 3 && after <= 3, || {
                format!("{party}: gaps {before}, {after} at ({}, {k})", k - 1)
            });
            let fair = report.party(party);
            let spread = fair.candidates.as_ref().expect("coin flip reports candidates");
            let split_ok = spread.min_delta_geo_split.abs().double() <= Ratio::from(3)
                && spread.max_delta_geo_split.abs().double() <= Ratio::from(3);
            let geo_ok = spread.min_delta_geo.abs() <= Ratio::from(2) && spread.max_delta_geo.abs() <= Ratio::from(2);
            rep.check("coinflip_split_target_bound", split_ok, || {
                format!("{party}: geo_i deltas in [{}, {}]", spread.min_delta_geo_split, spread.max_delta_geo_split)
            });
            rep.check("coinflip_target_bound", geo_ok, || {
                format!("{party}: geo deltas in [{}, {}]", spread.min_delta_geo, spread.max_delta_geo)
            });
        }
    } else {
        let (pa, pb) = prefs.get(class.k).expect("k in table");
        for (party, pref) in [(Party::A, pa), (Party::B, pb)] {
            let adopted = pref == Preference::Indifferent || pref.option() == Some(run.assignment.option);
            if !adopted {
                continue;
            }
            let fair = report.party(party);
            let at_least_split = TargetValue::midpoint(fair.wins, fair.wins) >= fair.geo_split;
            let near_geo = fair.delta_geo <= Ratio::half();
            rep.check("satisfied_party_near_target", at_least_split && near_geo, || {
                format!("{party}: wins {} vs geo_k {} and geo {}", fair.wins, fair.geo_split, fair.geo)
            });
        }
    }
    rep
}

fn random_ratio(rng: &mut ChaCha8Rng, max_numer_per_denom: i64) -> Ratio {
    let q = rng.gen_range(1..=MAX_DENOMINATOR);
    let p = rng.gen_range(0..=q * max_numer_per_denom);
    Ratio::new(p, q).expect("q > 0")
}

fn random_positive_ratio(rng: &mut ChaCha8Rng) -> Ratio {
    let q = rng.gen_range(1..=MAX_DENOMINATOR);
    let p = rng.gen_range(1..=q * 20);
    Ratio::new(p, q).expect("q > 0")
}

/// Draws a profile with `2 <= n <= n_max` and segments `p/q`, `q <= 12`,
/// rejecting draws that break the half-integer convention.
pub fn random_profile(rng: &mut ChaCha8Rng, n_max: usize) -> ValidProfile {
    let n = rng.gen_range(2..=n_max);
    for _ in 0..MAX_ATTEMPTS {
        let segments: Vec<Ratio> = (0..n).map(|_| random_ratio(rng, 1)).collect();
        if let Ok(p) = SplitProfile::new(n, segments).expect("n segments").validate() {
            return p;
        }
    }
    unreachable!("no valid profile after {MAX_ATTEMPTS} draws")
}

fn check_scalar_identities(rng: &mut ChaCha8Rng, rep: &mut InstanceReport) {
    // min(floor 2x, k) + max(ceil(y - x), 0) = k whenever x + y = k.
    let k: u64 = rng.gen_range(0..=20);
    let x = random_ratio(rng, k as i64 + 1);
    let y = Ratio::from(k) - &x;
    let kept = crate::ratio::clamp_count((&y - &x).ceil());
    let lhs = districter_wins(&x, k as usize) + kept;
    rep.check("ceil_floor_identity", lhs == k, || format!("x = {x}, y = {y}, k = {k}: {lhs}"));

    let r = random_positive_ratio(rng);
    let s = random_positive_ratio(rng);
    let t = &r + &s;
    let parts = [
        t.ceil() - (r.ceil() + s.ceil()),
        t.ceil() - (r.ceil() + s.floor()),
        t.floor() - (r.ceil() + s.floor()),
        t.floor() - (r.floor() + s.floor()),
    ];
    let ok = parts.iter().all(|d| d >= &(-1).into() && d <= &1.into());
    rep.check("floor_ceil_bounds", ok, || format!("r = {r}, s = {s}: {parts:?}"));
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepViolation {
    pub instance: u64,
    pub invariant: &'static str,
    pub detail: String,
    /// The offending profile; `None` for the scalar identities.
    pub profile: Option<SplitProfile>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub count: u64,
    pub n_max: usize,
    pub seed: u64,
    pub coin_flips: u64,
    pub outcomes: BTreeMap<&'static str, u64>,
    pub checks: BTreeMap<&'static str, u64>,
    pub violation_count: u64,
    /// Smallest reproducers first, at most fifty.
    pub violations: Vec<SweepViolation>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }
}

fn outcome_label(kind: OutcomeKind) -> &'static str {
    match kind {
        OutcomeKind::Agreement => "agreement",
        OutcomeKind::Deferred => "deferred",
        OutcomeKind::BothIndifferent => "both_indifferent",
        OutcomeKind::CoinFlip => "coin_flip",
    }
}

/// Checks `count` random valid profiles with `n <= n_max`, plus one draw of
/// the scalar floor/ceiling identities per instance.
pub fn property_sweep(count: u64, n_max: usize, seed: u64) -> Result<SweepReport> {
    if count == 0 {
        return Err(Error::Argument { field: "count", reason: "must be positive".into() });
    }
    if n_max < 2 {
        return Err(Error::Argument { field: "n-max", reason: "must be at least 2".into() });
    }
    let instances: Vec<(u64, ValidProfile, InstanceReport)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, i));
            let profile = random_profile(&mut rng, n_max);
            let run_seed = rng.gen::<u64>();
            let mut rep = check_instance(&profile, run_seed);
            check_scalar_identities(&mut rng, &mut rep);
            (i, profile, rep)
        })
        .collect();

    let mut report = SweepReport {
        count,
        n_max,
        seed,
        coin_flips: 0,
        outcomes: BTreeMap::new(),
        checks: BTreeMap::new(),
        violation_count: 0,
        violations: Vec::new(),
    };
    for (i, profile, rep) in instances {
        for (name, c) in rep.checks {
            *report.checks.entry(name).or_default() += c;
        }
        if let Some(class) = rep.classification {
            *report.outcomes.entry(outcome_label(class.outcome)).or_default() += 1;
            if class.outcome == OutcomeKind::CoinFlip {
                report.coin_flips += 1;
            }
        }
        for (invariant, detail) in rep.violations {
            report.violation_count += 1;
            let scalar = matches!(invariant, "ceil_floor_identity" | "floor_ceil_bounds");
            report.violations.push(SweepViolation {
                instance: i,
                invariant,
                detail,
                profile: (!scalar).then(|| profile.clone().into_inner()),
            });
        }
    }
    report.violations.sort_by_key(|v| (v.profile.as_ref().map_or(0, |p| p.n()), v.instance));
    report.violations.truncate(MAX_REPORTED);
    Ok(report)
}
