//! Under contiguity and compactness the protocol's outcome can fall
//! `delta / 2` short of the geometric target, for any `delta`.
//!
//!     cargo run --release --example geodelta_gap -- 12

use lry::grid::{geodelta_report, shrunk_geodelta};
use lry::{optimal_preferences, resolve_protocol};

fn main() -> lry::Result<()> {
    let max_delta = std::env::args().nth(1).map_or(10, |a| a.parse().expect("delta"));
    println!("delta     m  districts  support  geo(A)  candidates  gap   beyond 2");
    for delta in 1..=max_delta {
        let r = geodelta_report(delta, 0)?;
        println!(
            "{delta:>5}  {:>4}  {:>9}  {:>7}  {:>6}  {:?}  {:>4}  {}",
            r.m,
            r.districts,
            r.total_support_a.to_string(),
            r.geo_a.to_string(),
            r.candidate_wins_a,
            r.worst_gap.to_string(),
            r.exceeds_unconstrained_bound
        );
    }

    let small = shrunk_geodelta(2)?;
    let run = resolve_protocol(&small, &optimal_preferences(&small), 0)?;
    let wins: Vec<u64> = run.candidates.iter().map(|c| c.wins_a).collect();
    println!("\n4x4 analogue: coin flip at ({}, {}), A wins {:?}", run.k - 1, run.k, wins);
    Ok(())
}
