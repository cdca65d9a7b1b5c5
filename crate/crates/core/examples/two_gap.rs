//! Walk through the ten-district profile whose coin flip can leave A two
//! districts short of its geometric target.
//!
//!     cargo run --example two_gap

use lry::builtin::two_gap_profile;
use lry::protocol::coinflip_options;
use lry::{fairness_report, k_split_target, optimal_preferences, resolve_protocol, Party, SplitGame};

fn main() -> lry::Result<()> {
    let p = two_gap_profile().validate()?;
    println!("segments: {}", p.segments_a().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));

    let prefs = optimal_preferences(&p);
    println!("\n k   A prefers    B prefers    geo_k(A)");
    for (k, a, b) in prefs.iter() {
        println!("{k:>2}   {a:<12} {b:<12} {}", k_split_target(&p, Party::A, k)?);
    }

    let geo = p.geometric_target(Party::A);
    println!("\ngeo(A) = {geo}");
    for (seed, c) in coinflip_options(&p, 6)?.iter().enumerate() {
        let run = resolve_protocol(&p, &prefs, seed as u64)?;
        let report = fairness_report(&p, &run)?;
        println!(
            "seed {seed}: {} of the {}-split, A {} B {}, geo(A) - wins = {}, geo_k(A) - wins = {}",
            c.assignment.option, c.assignment.k, c.wins_a, c.wins_b, report.a.delta_geo, report.a.delta_geo_split
        );
    }
    Ok(())
}
