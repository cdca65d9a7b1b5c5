use lry::builtin::two_gap_profile;
use lry::protocol::{coinflip_options, Preference::*};
use lry::{
    classify_outcome, fairness_report, optimal_preferences, resolve_protocol, total_wins, Error, OutcomeKind, Party,
    PreferenceTable, Ratio, SideRef, SplitOption, SplitProfile,
};
use proptest::prelude::*;

fn table(entries: &[(lry::Preference, lry::Preference)]) -> PreferenceTable {
    PreferenceTable::new(entries.to_vec())
}

#[test]
fn two_gap_walkthrough() {
    let p = two_gap_profile().validate().unwrap();
    let prefs = optimal_preferences(&p);
    assert_eq!(prefs.get(5), Some((Option2, Option1)));
    assert_eq!(prefs.get(6), Some((Option1, Option2)));
    let b: Vec<u64> = coinflip_options(&p, 6).unwrap().iter().map(|c| c.wins_b).collect();
    assert_eq!(b, [7, 6, 5, 8]);

    let run = resolve_protocol(&p, &prefs, 3).unwrap();
    assert_eq!((run.wins_a, run.wins_b), (2, 8));
    assert_eq!(run.assignment.option, SplitOption::Option2);
    let report = fairness_report(&p, &run).unwrap();
    assert_eq!(report.a.delta_geo, "2".parse::<Ratio>().unwrap());
    assert_eq!(report.a.delta_geo_split, "3/2".parse::<Ratio>().unwrap());
    assert!(report.within_bounds());

    let run = resolve_protocol(&p, &prefs, 2).unwrap();
    assert_eq!((run.wins_a, run.wins_b), (5, 5));
    let run = resolve_protocol(&p, &prefs, 1).unwrap();
    assert_eq!(run.wins_a, 4);
    assert!(fairness_report(&p, &run).unwrap().a.delta_geo.is_zero());
}

#[test]
fn injected_agreement_ignores_the_seed() {
    let mut entries = vec![(Option2, Option1); 6];
    entries[5] = (Option1, Option2);
    entries[3] = (Option1, Option1);
    let prefs = table(&entries);
    let class = classify_outcome(&prefs).unwrap();
    assert_eq!((class.outcome, class.k), (OutcomeKind::Agreement, 3));

    let p = SplitProfile::parse(&["0.31"; 5]).unwrap().validate().unwrap();
    let runs: Vec<_> = (0..8).map(|s| resolve_protocol(&p, &prefs, s).unwrap()).collect();
    assert!(runs.iter().all(|r| r == &runs[0]));
    assert_eq!(runs[0].seed, None);
}

#[test]
fn injected_deferral_takes_the_stated_preference() {
    let entries = [(Option2, Option1), (Option2, Option1), (Indifferent, Option2), (Option1, Option2)];
    let class = classify_outcome(&table(&entries)).unwrap();
    assert_eq!((class.outcome, class.k), (OutcomeKind::Deferred, 2));
    let p = SplitProfile::parse(&["0.3", "0.3", "0.3"]).unwrap().validate().unwrap();
    let run = resolve_protocol(&p, &table(&entries), 0).unwrap();
    assert_eq!(run.assignment.option, SplitOption::Option2);
}

#[test]
fn injected_double_indifference_uses_parity() {
    let entries = [(Option2, Option1), (Indifferent, Indifferent), (Option1, Option2)];
    let p = SplitProfile::parse(&["0.3", "0.3"]).unwrap().validate().unwrap();
    let even = resolve_protocol(&p, &table(&entries), 10).unwrap();
    let odd = resolve_protocol(&p, &table(&entries), 7).unwrap();
    assert_eq!(even.outcome, OutcomeKind::BothIndifferent);
    assert_eq!(even.assignment.option, SplitOption::Option1);
    assert_eq!(odd.assignment.option, SplitOption::Option2);
}

#[test]
fn injected_tables_without_an_outcome_are_errors() {
    let entries = [(Option1, Option2), (Option2, Option1)];
    assert_eq!(classify_outcome(&table(&entries)), Err(Error::NoOutcome));
    let p = SplitProfile::parse(&["0.3", "0.3"]).unwrap().validate().unwrap();
    assert!(matches!(
        resolve_protocol(&p, &table(&entries), 0),
        Err(Error::MalformedPreferences { expected: 3, found: 2 })
    ));
}

#[test]
fn runs_do_not_transfer_between_profiles() {
    let p = two_gap_profile().validate().unwrap();
    let run = resolve_protocol(&p, &optimal_preferences(&p), 0).unwrap();
    let other = SplitProfile::parse(&["0.31"; 10]).unwrap().validate().unwrap();
    assert!(matches!(fairness_report(&other, &run), Err(Error::MismatchedRun(_))));
}

#[test]
fn symmetric_profile_is_indifferent_at_the_middle() {
    let p = SplitProfile::parse(&["0.7", "0.2", "0.2", "0.7"]).unwrap().validate().unwrap();
    assert_eq!(total_wins(&p, Party::A, SideRef::left(2)), total_wins(&p, Party::A, SideRef::right(2)));
    assert_eq!(optimal_preferences(&p).get(2), Some((Indifferent, Indifferent)));
}

#[test]
fn profile_json_round_trip() {
    let p = two_gap_profile();
    let back = SplitProfile::from_json(&p.to_json()).unwrap();
    assert_eq!(back, p);
    assert!(SplitProfile::from_json(r#"{"n":2,"segments_a":["0.3"]}"#).is_err());
    let too_much = SplitProfile::from_json(r#"{"n":1,"segments_a":["1.2"]}"#).unwrap();
    assert!(too_much.validate().is_err());
}

proptest! {
    #[test]
    fn every_optimal_run_stays_within_bounds(
        hundredths in proptest::collection::vec(0u8..=100, 2..12),
        seed in any::<u64>(),
    ) {
        let segments: Vec<Ratio> = hundredths.iter().map(|&t| Ratio::new(t as i64, 100).unwrap()).collect();
        let profile = SplitProfile::new(segments.len(), segments).unwrap();
        // Only profiles that satisfy the convention are in scope.
        if let Ok(p) = profile.validate() {
            let run = resolve_protocol(&p, &optimal_preferences(&p), seed).unwrap();
            prop_assert_eq!(run.wins_a + run.wins_b, p.n() as u64);
            prop_assert!(fairness_report(&p, &run).unwrap().within_bounds());
        }
    }
}
