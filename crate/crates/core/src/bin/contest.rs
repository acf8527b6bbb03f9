//! `contest`: command-line front end for the crowdcontest library.
//!
//! Exit status is 0 on success, 1 on invalid input and 2 on numerical failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crowdcontest::contest::{
    compare_static, design_optimal_contest, evaluate_asymmetric, parse_prizes, ratios, ratios_with_benchmark,
    ContestSpec,
};
use crowdcontest::io::{
    read_contest, read_distribution, write_analyze_csv, write_bid_curve_csv, write_iron_csv, write_json,
    write_trace_csv,
};
use crowdcontest::repro::{reproduce, ReproConfig};
use crowdcontest::simulation::Simulator;
use crowdcontest::{ironing, virtual_values, Distribution, Error, Result};

#[derive(Parser)]
#[command(name = "contest", version, about = "Optimal crowdsourcing contests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Virtual values, hazard rate and regularity verdicts
    Analyze {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = virtual_values::DEFAULT_GRID)]
        grid: usize,
        /// Also write value,phi,psi,hazard rows here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The contest maximizing expected maximum payment
    Design {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Equilibrium bid curve as value,bid rows
    BidCurve {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        /// Contest JSON; the optimal contest when omitted
        #[arg(long)]
        contest: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantile-space ironing as q,value,R,envelope,psi,psi_bar rows
    Iron {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = ironing::DEFAULT_GRID)]
        grid: usize,
        /// CSV destination; the ironed intervals are then printed as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact maximum payment, revenue and ratios
    Eval {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        contest: Option<PathBuf>,
        /// Revenue benchmark for distributions that are irregular for revenue
        #[arg(long)]
        benchmark: Option<f64>,
        /// Add a Monte Carlo estimate with this many trials
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo play at the equilibrium bids
    Simulate {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        contest: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial CSV destination
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Maximum payment of static prize vectors against winner-take-all
    CompareStatic {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        /// Comma-separated prizes, e.g. 2/3,1/3,0; repeatable
        #[arg(long = "prizes", required = true)]
        prizes: Vec<String>,
    },
    /// Recompute every quantitative claim of the worked examples
    Reproduce {
        #[arg(long, default_value_t = ReproConfig::default().trials)]
        trials: u64,
        #[arg(long, default_value_t = ReproConfig::default().seed)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn contest_or_optimal(d: &Distribution, n: usize, path: Option<&Path>) -> Result<ContestSpec> {
    match path {
        Some(p) => read_contest(p),
        None => design_optimal_contest(d, n),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    write_json(&mut lock, value)?;
    writeln!(lock).map_err(|e| Error::Io(e.to_string()))
}

/// Returns whether the command fully succeeded (only `reproduce` can report failure).
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Analyze { dist, n, grid, csv } => {
            let d = read_distribution(&dist)?;
            let rep = virtual_values::analyze(&d, n, grid)?;
            if let Some(path) = csv {
                write_analyze_csv(create(&path)?, &rep)?;
            }
            print_json(&rep)?;
        }
        Command::Design { dist, n } => {
            let d = read_distribution(&dist)?;
            print_json(&design_optimal_contest(&d, n)?)?;
        }
        Command::BidCurve { dist, n, contest, out } => {
            let d = read_distribution(&dist)?;
            let bf = contest_or_optimal(&d, n, contest.as_deref())?.bid_function(&d)?;
            match out {
                Some(path) => write_bid_curve_csv(create(&path)?, &bf)?,
                None => write_bid_curve_csv(io::stdout().lock(), &bf)?,
            }
        }
        Command::Iron { dist, n, grid, out } => {
            let d = read_distribution(&dist)?;
            let ic = ironing::iron(&d, n, grid)?;
            match out {
                Some(path) => {
                    write_iron_csv(create(&path)?, &ic)?;
                    print_json(&ic.ironed_intervals)?;
                }
                None => write_iron_csv(io::stdout().lock(), &ic)?,
            }
        }
        Command::Eval { dist, n, contest, benchmark, trials, seed } => {
            let d = read_distribution(&dist)?;
            let c = contest_or_optimal(&d, n, contest.as_deref())?;
            if let ContestSpec::AsymmetricTwoAgent { reserve_value, favored_threshold } = c {
                print_json(&evaluate_asymmetric(&d, reserve_value, favored_threshold)?)?;
                return Ok(true);
            }
            let mut rep = match benchmark {
                Some(b) => ratios_with_benchmark(&d, n, &c, b)?,
                None => ratios(&d, n, &c)?,
            };
            if let Some(t) = trials {
                rep.monte_carlo = Some(Simulator::new(&d, n, &c, seed)?.run(t)?);
            }
            print_json(&rep)?;
        }
        Command::Simulate { dist, n, contest, trials, seed, trace } => {
            let d = read_distribution(&dist)?;
            let c = contest_or_optimal(&d, n, contest.as_deref())?;
            let sim = Simulator::new(&d, n, &c, seed)?;
            if let Some(path) = trace {
                write_trace_csv(create(&path)?, n, &sim.trace(trials))?;
            }
            print_json(&sim.run(trials)?)?;
        }
        Command::CompareStatic { dist, n, prizes } => {
            let d = read_distribution(&dist)?;
            let vectors = prizes.iter().map(|s| parse_prizes(s)).collect::<Result<Vec<_>>>()?;
            print_json(&compare_static(&d, n, &vectors)?)?;
        }
        Command::Reproduce { trials, seed, json } => {
            let lines = reproduce(ReproConfig { trials, seed })?;
            if json {
                print_json(&lines)?;
            } else {
                for l in &lines {
                    println!(
                        "{} {:<42} expected={:<12.6} computed={:<14.8} tol={:.1e}",
                        if l.pass { "PASS" } else { "FAIL" },
                        l.claim_id,
                        l.paper_value,
                        l.computed_value,
                        l.tolerance
                    );
                }
            }
            return Ok(lines.iter().all(|l| l.pass));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
