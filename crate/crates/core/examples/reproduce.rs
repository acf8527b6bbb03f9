//! Recomputes the published example numbers with a short simulation budget.
//! The `contest reproduce` subcommand runs the same table with 10^6 trials.

use std::error::Error;

use crowdcontest::repro::{reproduce, ReproConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let lines = reproduce(ReproConfig { trials: 50_000, ..ReproConfig::default() })?;
    for l in &lines {
        println!("{} {:<42} {:>12.6} {:>14.8}", if l.pass { "PASS" } else { "FAIL" }, l.claim_id, l.paper_value, l.computed_value);
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    if failed > 0 {
        return Err(format!("{failed} claims failed").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
