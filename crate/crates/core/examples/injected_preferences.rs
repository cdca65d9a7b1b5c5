//! Outcome rules applied to preference tables written by hand.
//!
//!     cargo run --example injected_preferences

use lry::Preference::{Indifferent as I, Option1 as O1, Option2 as O2};
use lry::{classify_outcome, resolve_protocol, PreferenceTable, SplitProfile};

fn main() -> lry::Result<()> {
    let p = SplitProfile::parse(&["0.31", "0.31", "0.31", "0.31"])?.validate()?;
    let tables = [
        ("agreement at 2", vec![(O2, O1), (O2, O1), (O1, O1), (O1, O2), (O1, O2)]),
        ("A defers at 1", vec![(O2, O1), (I, O2), (O2, O1), (O1, O2), (O1, O2)]),
        ("both indifferent at 3", vec![(O2, O1), (O2, O1), (O2, O1), (I, I), (O1, O2)]),
        ("coin flip at (1, 2)", vec![(O2, O1), (O2, O1), (O1, O2), (O1, O2), (O1, O2)]),
        ("crossing backwards", vec![(O1, O2), (O1, O2), (O2, O1), (O2, O1), (O2, O1)]),
    ];
    for (name, entries) in tables {
        let prefs = PreferenceTable::new(entries);
        match classify_outcome(&prefs) {
            Ok(class) => {
                let picks: Vec<String> = (0..4)
                    .map(|seed| {
                        let run = resolve_protocol(&p, &prefs, seed).expect("classified");
                        format!("{}@{}", run.assignment.option, run.assignment.k)
                    })
                    .collect();
                println!(
                    "{name:<22} outcome {} at k={}  seeds 0..3: {}",
                    class.outcome.number(),
                    class.k,
                    picks.join(" ")
                );
            }
            Err(e) => println!("{name:<22} {e}"),
        }
    }
    Ok(())
}
