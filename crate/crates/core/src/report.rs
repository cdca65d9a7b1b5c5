//! Serialized reports: JSON documents and CSV candidate tables.
//!
//! Every report carries the command, the seed and a SHA-256 digest of its
//! input, so a run can be reproduced from the report alone. Ratios are
//! written as exact strings.

use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{Party, SplitProfile};
use crate::protocol::{fairness_report, Candidate, FairnessReport, Preference, PreferenceTable, ProtocolRun};
use crate::ratio::Ratio;
use crate::strategy::SplitGame;
use crate::targets::{k_split_target, TargetValue};

/// `sha256:` followed by the hex digest of `bytes`.
pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub command: String,
    pub seed: u64,
    pub input_digest: String,
}

impl Provenance {
    pub fn new(command: &str, seed: u64, input: &[u8]) -> Self {
        Provenance { command: command.to_string(), seed, input_digest: input_digest(input) }
    }
}

/// A payload wrapped with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T> {
    #[serde(flatten)]
    pub provenance: Provenance,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreferenceRow {
    pub k: usize,
    #[serde(rename = "A")]
    pub a: Preference,
    #[serde(rename = "B")]
    pub b: Preference,
}

pub fn preference_rows(prefs: &PreferenceTable) -> Vec<PreferenceRow> {
    prefs.iter().map(|(k, a, b)| PreferenceRow { k, a, b }).collect()
}

/// The headline numbers of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunSummary {
    pub outcome: u8,
    pub k: usize,
    #[serde(rename = "winsA")]
    pub wins_a: u64,
    #[serde(rename = "winsB")]
    pub wins_b: u64,
    #[serde(rename = "geoA")]
    pub geo_a: TargetValue,
    #[serde(rename = "geoB")]
    pub geo_b: TargetValue,
    /// `geo(A) - winsA`.
    pub delta_geo: Ratio,
    pub within_bounds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<SplitProfile>,
    pub preferences: Vec<PreferenceRow>,
    pub summary: RunSummary,
    pub run: ProtocolRun,
    pub fairness: FairnessReport,
}

pub fn protocol_report<G: SplitGame + ?Sized>(
    game: &G,
    prefs: &PreferenceTable,
    run: ProtocolRun,
    profile: Option<SplitProfile>,
) -> Result<ProtocolReport> {
    let fairness = fairness_report(game, &run)?;
    let summary = RunSummary {
        outcome: run.outcome_number,
        k: run.k,
        wins_a: run.wins_a,
        wins_b: run.wins_b,
        geo_a: fairness.a.geo,
        geo_b: fairness.b.geo,
        delta_geo: fairness.a.delta_geo.clone(),
        within_bounds: fairness.within_bounds(),
    };
    Ok(ProtocolReport { profile, preferences: preference_rows(prefs), summary, run, fairness })
}

/// One CSV row: a coin-flip candidate, or the realized assignment when the
/// outcome did not flip a coin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateRow {
    pub command: String,
    pub seed: u64,
    pub input_digest: String,
    pub k: usize,
    pub option: String,
    #[serde(rename = "winsA")]
    pub wins_a: u64,
    #[serde(rename = "winsB")]
    pub wins_b: u64,
    #[serde(rename = "deltaGeoA")]
    pub delta_geo_a: Ratio,
    #[serde(rename = "deltaGeoB")]
    pub delta_geo_b: Ratio,
    #[serde(rename = "deltaGeoSplitA")]
    pub delta_geo_split_a: Ratio,
    #[serde(rename = "deltaGeoSplitB")]
    pub delta_geo_split_b: Ratio,
    pub chosen: bool,
}

pub fn candidate_rows<G: SplitGame + ?Sized>(
    game: &G,
    run: &ProtocolRun,
    provenance: &Provenance,
) -> Result<Vec<CandidateRow>> {
    let realized = [Candidate { assignment: run.assignment, wins_a: run.wins_a, wins_b: run.wins_b }];
    let candidates: &[Candidate] = if run.candidates.is_empty() { &realized } else { &run.candidates };
    candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = c.assignment.k;
            let delta = |party: Party, wins: u64| -> Result<(Ratio, Ratio)> {
                Ok((game.geometric_target(party).minus_wins(wins), k_split_target(game, party, k)?.minus_wins(wins)))
            };
            let (geo_a, split_a) = delta(Party::A, c.wins_a)?;
            let (geo_b, split_b) = delta(Party::B, c.wins_b)?;
            Ok(CandidateRow {
                command: provenance.command.clone(),
                seed: provenance.seed,
                input_digest: provenance.input_digest.clone(),
                k,
                option: c.assignment.option.to_string(),
                wins_a: c.wins_a,
                wins_b: c.wins_b,
                delta_geo_a: geo_a,
                delta_geo_b: geo_b,
                delta_geo_split_a: split_a,
                delta_geo_split_b: split_b,
                chosen: run.candidate_index.is_none_or(|j| j == i),
            })
        })
        .collect()
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Report(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Error::Report(e.to_string()))
}

/// CSV with a header row taken from the field names of `T`.
pub fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Report(e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::Report(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::two_gap_profile;
    use crate::protocol::{optimal_preferences, resolve_protocol};

    #[test]
    fn digest_is_sha256() {
        assert_eq!(input_digest(b"abc"), "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn two_gap_summary() {
        let p = two_gap_profile().validate().unwrap();
        let prefs = optimal_preferences(&p);
        let run = resolve_protocol(&p, &prefs, 3).unwrap();
        let report = protocol_report(&p, &prefs, run, None).unwrap();
        let json = serde_json::to_string(&report.summary).unwrap();
        assert!(json.contains(r#""winsA":2"#), "{json}");
        assert!(json.contains(r#""geoA":"4""#), "{json}");
        assert!(json.contains(r#""deltaGeo":"2""#), "{json}");
    }

    #[test]
    fn csv_has_one_row_per_candidate() {
        let p = two_gap_profile().validate().unwrap();
        let run = resolve_protocol(&p, &optimal_preferences(&p), 1).unwrap();
        let prov = Provenance::new("example-2gap", 1, b"x");
        let rows = candidate_rows(&p, &run, &prov).unwrap();
        let mut out = Vec::new();
        write_csv(&mut out, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("command,seed,inputDigest,k,option,winsA,winsB,deltaGeoA"));
        assert!(lines[2].ends_with(",true"));
        assert_eq!(text.matches(",true").count(), 1);
        // Option 2 at k = 5: A wins 4 against geo 4, and geo_5 = 7/2.
        assert!(lines[2].contains(",5,option2,4,6,0,"), "{}", lines[2]);
        assert!(lines[2].contains(",-1/2,"), "{}", lines[2]);
    }
}
