//! Equilibrium bids three ways.
//!
//! The payment identity applied to the highest-bid-wins allocation, the
//! order-statistic closed form, and the tabulated [`BidFunction`] used by the
//! simulator should agree. Static prize vectors go through the same identity.

use std::error::Error;

use crowdcontest::equilibrium::{
    allpay_bid_highest_wins, bid_from_allocation, static_contest_bid, BidFunction, InterimAllocation,
};
use crowdcontest::Distribution;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = Distribution::exponential(1.0)?;
    let (n, r) = (3, 0.5);
    let a = InterimAllocation::highest_wins(&d, n, r)?;
    let table = BidFunction::from_allocation(&d, &a)?;
    println!("{:>6} {:>12} {:>12} {:>12}", "v", "identity", "closed form", "tabulated");
    for v in [0.25, 0.5, 0.75, 1.0, 2.0, 4.0] {
        println!(
            "{v:>6.2} {:>12.8} {:>12.8} {:>12.8}",
            bid_from_allocation(&a, v)?,
            allpay_bid_highest_wins(&d, n, r, v)?,
            table.eval(v)
        );
    }

    let u = Distribution::uniform(0.0, 1.0)?;
    println!("U[0,1], two contestants, prizes (2/3, 1/3): b(v) = v^2/6");
    println!("U[0,1], three contestants, prizes (2/3, 1/3, 0): b(v) = v^2/3");
    for v in [0.2, 0.5, 0.9] {
        let two = static_contest_bid(&u, 2, &[2.0 / 3.0, 1.0 / 3.0], v)?;
        let three = static_contest_bid(&u, 3, &[2.0 / 3.0, 1.0 / 3.0, 0.0], v)?;
        println!("{v:>6.2} {two:>12.8} {:>12.8} {three:>12.8} {:>12.8}", v * v / 6.0, v * v / 3.0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
