//! JSON and CSV reports for one run, as the `lry` binary writes them.
//!
//!     cargo run --example reports -- 3

use lry::builtin::{two_gap_profile, TWO_GAP_JSON};
use lry::report::{candidate_rows, protocol_report, write_csv, write_json, Provenance, Report};
use lry::{optimal_preferences, resolve_protocol};

fn main() -> lry::Result<()> {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed"));
    let p = two_gap_profile().validate()?;
    let prefs = optimal_preferences(&p);
    let run = resolve_protocol(&p, &prefs, seed)?;
    let provenance = Provenance::new("example-2gap", seed, TWO_GAP_JSON.as_bytes());

    let mut out = std::io::stdout().lock();
    write_csv(&mut out, &candidate_rows(&p, &run, &provenance)?)?;
    println!();
    let body = protocol_report(&p, &prefs, run, None)?;
    write_json(&mut out, &Report { provenance, body: body.summary })
}
