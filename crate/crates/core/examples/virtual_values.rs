//! Regularity diagnostics for the built-in value distributions.
//!
//! For each family this prints the revenue reserve, the max-payment reserve
//! for several contest sizes, and whether `ψₙ` can be used without ironing.

use std::error::Error;

use crowdcontest::virtual_values::{analyze, monopoly_reserve_value, mp_reserve_value, DEFAULT_GRID};
use crowdcontest::Distribution;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let families = [
        ("U[0,1]", Distribution::uniform(0.0, 1.0)?),
        ("Exp(1)", Distribution::exponential(1.0)?),
        ("x^1.5", Distribution::power(1.5)?),
        ("mixture", Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)])?),
    ];
    println!("{:<8} {:>3} {:>10} {:>10} {:>8} {:>8} {:>6}", "family", "n", "phi res.", "psi res.", "rev reg", "mp reg", "mhr");
    for (name, d) in &families {
        let monopoly = monopoly_reserve_value(d).ok();
        for n in [2, 3, 5] {
            let rep = analyze(d, n, DEFAULT_GRID)?;
            println!(
                "{:<8} {:>3} {:>10} {:>10.5} {:>8} {:>8} {:>6}",
                name,
                n,
                monopoly.map_or("-".to_string(), |r| format!("{r:.5}")),
                mp_reserve_value(d, n)?,
                rep.regular_for_revenue,
                rep.n_regular_for_mp,
                rep.mhr,
            );
        }
    }

    // The exponential is not n-regular, but its ψ₂ only dips near zero.
    let exp = &families[1].1;
    let rep = analyze(exp, 2, DEFAULT_GRID)?;
    println!("Exp(1), n=2: psi is nondecreasing from v = {:.4}", rep.psi_nondecreasing_from());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
