//! Bringing your own data: a tabulated CDF read from CSV, then a contest
//! saved to JSON and evaluated after loading it back.

use std::error::Error;

use crowdcontest::contest::{design_optimal_contest, ratios, ContestSpec};
use crowdcontest::io::{read_contest, tabulated_from_csv};

const SKILLS: &str = "\
score,share_below
0,0
10,0.15
20,0.45
40,0.8
60,0.95
100,1
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = tabulated_from_csv(SKILLS.as_bytes(), "score", "share_below")?;
    let n = 4;
    let contest = design_optimal_contest(&d, n)?;

    let dir = std::env::temp_dir().join(format!("crowdcontest-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("contest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&contest)?)?;
    let loaded: ContestSpec = read_contest(&path)?;
    std::fs::remove_dir_all(&dir)?;

    let rep = ratios(&d, n, &loaded)?;
    println!("reserve bid {:.4}, MP {:.4}, revenue {:.4}, utilization {:.4}", loaded.reserve_bid(), rep.mp_exact, rep.rev_exact, rep.utilization_ratio);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
