use std::error::Error;

use crowdcontest::contest::{design_optimal_contest, ratios, ratios_with_benchmark, ContestSpec};
use crowdcontest::Distribution;

/// Exact MP, revenue and the two ratios for optimal and no-reserve contests.
pub fn run_example() -> Result<(), Box<dyn Error>> {
    let families = [
        ("U[0,1]", Distribution::uniform(0.0, 1.0)?),
        ("Exp(1)", Distribution::exponential(1.0)?),
        ("x^1.5", Distribution::power(1.5)?),
    ];
    println!("{:<7} {:>3} {:<10} {:>9} {:>9} {:>8} {:>8} {:>8}", "family", "n", "contest", "MP", "revenue", "util.", "approx.", "bound");
    for (name, d) in &families {
        for n in [2, 5, 10] {
            for (label, c) in [("optimal", design_optimal_contest(d, n)?), ("no reserve", ContestSpec::no_reserve(n))] {
                let rep = ratios(d, n, &c)?;
                println!(
                    "{:<7} {:>3} {:<10} {:>9.6} {:>9.6} {:>8.4} {:>8.4} {:>8.4}",
                    name,
                    n,
                    label,
                    rep.mp_exact,
                    rep.rev_exact,
                    rep.utilization_ratio,
                    rep.approximation_ratio.unwrap_or(f64::NAN),
                    2.0 * n as f64 / (n as f64 - 1.0)
                );
            }
        }
    }

    // Revenue-irregular distributions need the benchmark from elsewhere.
    let mixture = Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)])?;
    let c = design_optimal_contest(&mixture, 2)?;
    let rep = ratios(&mixture, 2, &c)?;
    println!("mixture, n=2: MP {:.6}, revenue benchmark {:?}", rep.mp_exact, rep.opt_revenue);
    let rep = ratios_with_benchmark(&mixture, 2, &c, 1.5)?;
    println!("  against a supplied benchmark of 1.5: ratio {:.4}", rep.approximation_ratio.unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
