//! Closed-form win counts against exhaustive allocation of support into
//! equal districts.
//!
//!     cargo run --example allocation_oracle

use lry::oracle::{check_strategy_formulas, AllocationOracle};
use lry::strategy::{districter_wins, non_districter_wins};
use lry::Ratio;

fn main() -> lry::Result<()> {
    let oracle = AllocationOracle::default();
    println!("support  size  formula(max,min)  oracle(max,min)  allocations");
    for (x, size) in [("1.3", 3), ("1.6", 3), ("0.45", 2), ("2.55", 4), ("3.95", 4)] {
        let x: Ratio = x.parse()?;
        let y = Ratio::from(size) - &x;
        let o = oracle.evaluate(&x, size)?;
        println!(
            "{:<7}  {size:>4}  ({}, {})            ({}, {})           {}",
            x.to_string(),
            districter_wins(&x, size),
            non_districter_wins(&x, &y),
            o.max_wins,
            o.min_wins,
            o.allocations
        );
    }

    let report = check_strategy_formulas(&oracle);
    println!(
        "\nexhaustive: {} sides, {} allocations, {} mismatches",
        report.sides_checked,
        report.allocations,
        report.mismatches.len()
    );
    Ok(())
}
