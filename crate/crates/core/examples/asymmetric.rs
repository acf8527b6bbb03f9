//! Favoring one of two contestants can beat the best symmetric contest.
//!
//! Agent 1 wins outright above a threshold value; below it both agents
//! compete with a common reserve. The example instance uses F(x) = x^1.5.

use std::error::Error;

use crowdcontest::contest::{asymmetric_bids, evaluate_asymmetric, example_instance, ContestSpec};
use crowdcontest::simulation::simulate;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (d, contest) = example_instance();
    let ContestSpec::AsymmetricTwoAgent { reserve_value, favored_threshold } = contest else {
        unreachable!("example instance is asymmetric");
    };
    let rep = evaluate_asymmetric(&d, reserve_value, favored_threshold)?;
    println!("{}", serde_json::to_string_pretty(&rep)?);

    let [b1, b2] = asymmetric_bids(&d, reserve_value, favored_threshold)?;
    println!("{:>6} {:>10} {:>10}", "v", "agent 1", "agent 2");
    for v in [0.5, 0.7, 0.8, 0.89, 0.9, 0.95, 1.0] {
        println!("{v:>6.2} {:>10.6} {:>10.6}", b1.eval(v), b2.eval(v));
    }

    let mc = simulate(&d, 2, &contest, 200_000, 7)?;
    println!("Monte Carlo MP {:.5} ± {:.5} (exact {:.5})", mc.mp_mean, mc.mp_stderr, rep.mp_exact);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
