//! Seeded Monte Carlo play of a designed contest.
//!
//! Trials are independent random streams, so results do not depend on the
//! number of threads, and a single trial can be replayed by index.

use std::error::Error;

use crowdcontest::contest::design_optimal_contest;
use crowdcontest::io::write_trace_csv;
use crowdcontest::simulation::{convergence_check, Simulator};
use crowdcontest::Distribution;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)])?;
    let contest = design_optimal_contest(&d, 2)?;

    let table = convergence_check(&d, 2, &contest, &[1_000, 10_000, 100_000], 11)?;
    println!("exact MP {:.6}", table.quadrature);
    for row in &table.rows {
        println!("{:>8} trials: {:.6} ± {:.6}  within 3σ: {}", row.trials, row.mp_mean, row.mp_stderr, row.within_three_stderr);
    }
    println!("consistent: {}", table.consistent());

    let sim = Simulator::new(&d, 2, &contest, 11)?;
    let again = sim.trial(42);
    println!("trial 42 replays to the same skills: {:?}", again.skills);
    println!("first five trials:");
    let mut csv = Vec::new();
    write_trace_csv(&mut csv, 2, &sim.trace(5))?;
    print!("{}", String::from_utf8(csv)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
