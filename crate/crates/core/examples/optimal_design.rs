//! Designs the max-payment optimal contest for a few distributions and
//! prints it as JSON, the same format the `contest` binary reads back.

use std::error::Error;

use crowdcontest::contest::{design_optimal_contest, expected_max_payment};
use crowdcontest::Distribution;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cases = [
        ("U[0,1]", Distribution::uniform(0.0, 1.0)?, 5),
        ("Exp(1)", Distribution::exponential(1.0)?, 2),
        ("mixture", Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)])?, 2),
    ];
    for (name, d, n) in &cases {
        let contest = design_optimal_contest(d, *n)?;
        println!("{name}, n={n}: expected max payment {:.6}", expected_max_payment(d, *n, &contest)?);
        println!("{}", serde_json::to_string_pretty(&contest)?);
        for f in contest.forbidden_intervals() {
            println!("  bids in {}{:.5}, {:.5}{} move to {:.5}", if f.lo_open { "(" } else { "[" }, f.lo, f.hi, if f.hi_open { ")" } else { "]" }, f.snap_to);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
