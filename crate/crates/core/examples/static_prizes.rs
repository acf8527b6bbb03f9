//! Static prize vectors against winner-take-all.

use std::error::Error;

use crowdcontest::contest::{compare_static, parse_prizes};
use crowdcontest::Distribution;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = Distribution::power(1.5)?;
    for (n, specs) in [(3, vec!["2/3,1/3,0", "1/2,1/2,0", "1/3,1/3,1/3"]), (4, vec!["0.7,0.2,0.1,0", "0.4,0.3,0.2,0.1"])] {
        let vectors = specs.iter().map(|s| parse_prizes(s)).collect::<Result<Vec<_>, _>>()?;
        let table = compare_static(&d, n, &vectors)?;
        println!("n={n}: winner-take-all MP {:.6}", table.winner_take_all_mp);
        for (s, row) in specs.iter().zip(&table.rows) {
            println!("  {s:<18} MP {:.6}", row.mp);
        }
        println!("  winner-take-all dominates: {}", table.winner_take_all_dominates);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
