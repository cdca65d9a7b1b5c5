//! Random valid profiles checked against every invariant.
//!
//!     cargo run --release --example property_sweep -- 10000 20 1

fn main() -> lry::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("numeric argument"));
    let count = args.next().unwrap_or(1000);
    let n_max = args.next().unwrap_or(20) as usize;
    let seed = args.next().unwrap_or(0);

    let report = lry::property_sweep(count, n_max, seed)?;
    println!("{count} profiles, n <= {n_max}, seed {seed}");
    for (outcome, n) in &report.outcomes {
        println!("  outcome {outcome:<17} {n}");
    }
    for (check, n) in &report.checks {
        println!("  {check:<30} {n:>8} cases");
    }
    println!("violations: {}", report.violation_count);
    for v in &report.violations {
        println!("  instance {} {}: {}", v.instance, v.invariant, v.detail);
    }
    Ok(())
}
