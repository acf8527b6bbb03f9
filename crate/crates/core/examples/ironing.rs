//! Ironing the irregular two-segment mixture in quantile space.

use std::error::Error;

use crowdcontest::ironing::{iron, DEFAULT_GRID};
use crowdcontest::Distribution;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)])?;
    for n in [2, 3, 5] {
        let ic = iron(&d, n, DEFAULT_GRID)?;
        print!("n={n}: reserve {:.4};", ic.reserve_value(&d)?);
        if ic.ironed_intervals.is_empty() {
            println!(" nothing to iron");
        }
        for iv in &ic.ironed_intervals {
            println!(
                " pool values [{:.4}, {:.4}] (quantiles [{:.4}, {:.4}]), ironed psi {:.4}",
                iv.lo, iv.hi, iv.q_lo, iv.q_hi, iv.psi_bar
            );
        }
    }

    // A coarse look at the curve and its envelope for n = 2.
    let ic = iron(&d, 2, 1024)?;
    println!("{:>7} {:>8} {:>10} {:>10}", "q", "value", "R", "envelope");
    for i in (0..ic.curve.q.len()).step_by(128) {
        println!("{:>7.4} {:>8.4} {:>10.6} {:>10.6}", ic.curve.q[i], ic.curve.value[i], ic.curve.r[i], ic.envelope[i]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
