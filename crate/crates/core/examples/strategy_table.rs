//! Optimal win counts on both sides of every split.
//!
//!     cargo run --example strategy_table -- 0.7 0.2 0.45 0.9 0.1
//!
//! With no arguments the built-in ten-district profile is used. `B_other`
//! is B's total when it draws the other side; it always adds up to `n`
//! with `total_A`.

use lry::builtin::two_gap_profile;
use lry::{total_wins, wins_when_districting, wins_when_opponent_districts, Party, SideRef, SplitProfile};

fn main() -> lry::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let profile = if args.is_empty() {
        two_gap_profile()
    } else {
        SplitProfile::parse(&args.iter().map(String::as_str).collect::<Vec<_>>())?
    };
    let p = profile.validate()?;

    println!(" k  side  x_A      draws  opp.draws  total_A  B_other");
    for k in 0..=p.n() {
        for side in [SideRef::left(k), SideRef::right(k)] {
            println!(
                "{k:>2}  {:<4}  {:<7}  {:>5}  {:>9}  {:>7}  {:>7}",
                side.side.to_string(),
                p.side_support(Party::A, side)?.to_string(),
                wins_when_districting(&p, Party::A, side)?,
                wins_when_opponent_districts(&p, Party::A, side)?,
                total_wins(&p, Party::A, side)?,
                total_wins(&p, Party::B, side.complement())?,
            );
        }
    }
    Ok(())
}
