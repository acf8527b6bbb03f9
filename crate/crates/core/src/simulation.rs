//! Monte Carlo play of a contest at its equilibrium bids.
//!
//! Trial `t` draws its skills from a ChaCha8 stream selected by `(seed, t)`,
//! so results do not depend on how trials are split across threads. Trials
//! run in fixed-size chunks whose summaries are merged in chunk order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::contest::{asymmetric_bids, exact_max_payment, ContestSpec};
use crate::distributions::Distribution;
use crate::equilibrium::{normalize_prizes, BidFunction};
use crate::error::{Error, Result};

/// Trials per parallel work unit.
pub const CHUNK: u64 = 8192;

/// Relative tolerance for ties between bids that are not snapped plateau bids.
const TIE_REL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    pub mp_mean: f64,
    pub mp_stderr: f64,
    pub rev_mean: f64,
    pub rev_stderr: f64,
    /// `rev_mean / mp_mean`, with a delta-method standard error.
    pub utilization_ratio: f64,
    pub utilization_stderr: f64,
    /// Reward share received by each top bidder, zero when nobody qualifies.
    pub mean_winner_share: f64,
    /// Mean of `bid / skill` over agents and trials.
    pub mean_effort: f64,
}

/// One simulated contest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub skills: Vec<f64>,
    pub bids: Vec<f64>,
    pub max_bid: f64,
    pub sum_bids: f64,
    pub winner_share: f64,
}

#[derive(Debug, Clone)]
enum Award {
    /// Ties among the top bids split the whole reward.
    HighestWins,
    /// Ranked prizes; tied ranks share their prizes equally.
    Ranked(Vec<f64>),
}

/// A contest prepared for repeated play.
#[derive(Debug, Clone)]
pub struct Simulator {
    d: Distribution,
    n: usize,
    contest: ContestSpec,
    /// One bid function shared by all agents, or one per agent.
    bids: Vec<BidFunction>,
    award: Award,
    seed: u64,
    base: ChaCha8Rng,
}

impl Simulator {
    pub fn new(d: &Distribution, n: usize, c: &ContestSpec, seed: u64) -> Result<Self> {
        c.validate()?;
        if c.n() != n {
            return Err(Error::InvalidParameter(format!("contest is for {} contestants, asked for {n}", c.n())));
        }
        let (bids, award) = match c {
            ContestSpec::AsymmetricTwoAgent { reserve_value, favored_threshold } => {
                (asymmetric_bids(d, *reserve_value, *favored_threshold)?.to_vec(), Award::HighestWins)
            }
            ContestSpec::StaticPrizes { n, prizes } => {
                (vec![c.bid_function(d)?], Award::Ranked(normalize_prizes(*n, prizes)?))
            }
            ContestSpec::SymmetricHighestWins { .. } => (vec![c.bid_function(d)?], Award::HighestWins),
        };
        Ok(Self { d: d.clone(), n, contest: c.clone(), bids, award, seed, base: ChaCha8Rng::seed_from_u64(seed) })
    }

    fn bid_of(&self, agent: usize, skill: f64) -> f64 {
        self.bids[agent.min(self.bids.len() - 1)].eval(skill)
    }

    /// Plays trial `t`; a pure function of `(seed, t)`.
    pub fn trial(&self, t: u64) -> TrialOutcome {
        let mut rng = self.base.clone();
        rng.set_stream(t);
        let skills: Vec<f64> = (0..self.n).map(|_| self.d.sample(&mut rng)).collect();
        let bids: Vec<f64> = skills.iter().enumerate().map(|(i, &v)| self.bid_of(i, v)).collect();
        let max_bid = bids.iter().copied().fold(0.0, f64::max);
        let sum_bids = bids.iter().sum();
        let winner_share = self.winner_share(&bids);
        TrialOutcome { trial: t, skills, bids, max_bid, sum_bids, winner_share }
    }

    /// Share of the reward received by each top bidder after snapping.
    fn winner_share(&self, bids: &[f64]) -> f64 {
        let reserve = self.contest.reserve_bid();
        let snapped: Vec<f64> = bids.iter().map(|&b| self.contest.snap(b)).collect();
        let top = snapped.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(top >= reserve) {
            return 0.0;
        }
        let tied = snapped.iter().filter(|&&b| b == top || (top - b).abs() <= TIE_REL_EPS * top.abs()).count();
        match &self.award {
            Award::HighestWins => 1.0 / tied as f64,
            Award::Ranked(prizes) => prizes[..tied].iter().sum::<f64>() / tied as f64,
        }
    }

    /// Runs trials `0..trials` in parallel.
    pub fn run(&self, trials: u64) -> Result<SimulationReport> {
        if trials == 0 {
            return Err(Error::InvalidParameter("need at least one trial".into()));
        }
        let chunks = trials.div_ceil(CHUNK);
        let parts: Vec<Moments> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut m = Moments::default();
                for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                    let o = self.trial(t);
                    let effort = o.skills.iter().zip(&o.bids).map(|(&v, &b)| if v > 0.0 { b / v } else { 0.0 }).sum::<f64>()
                        / self.n as f64;
                    m.push(o.max_bid, o.sum_bids, o.winner_share, effort);
                }
                m
            })
            .collect();
        let total = parts.into_iter().fold(Moments::default(), Moments::merge);
        Ok(total.report(self.seed))
    }

    /// Every outcome of trials `0..trials`, for per-trial output.
    pub fn trace(&self, trials: u64) -> Vec<TrialOutcome> {
        (0..trials).into_par_iter().map(|t| self.trial(t)).collect()
    }
}

/// Streaming means and co-moments of (max bid, bid sum), merged exactly
/// in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mp: f64,
    rev: f64,
    m2_mp: f64,
    m2_rev: f64,
    c_mp_rev: f64,
    share: f64,
    effort: f64,
}

impl Moments {
    fn push(&mut self, mp: f64, rev: f64, share: f64, effort: f64) {
        self.count += 1.0;
        let dm = mp - self.mp;
        let dr = rev - self.rev;
        self.mp += dm / self.count;
        self.rev += dr / self.count;
        self.m2_mp += dm * (mp - self.mp);
        self.m2_rev += dr * (rev - self.rev);
        self.c_mp_rev += dm * (rev - self.rev);
        self.share += (share - self.share) / self.count;
        self.effort += (effort - self.effort) / self.count;
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.count == 0.0 {
            return b;
        }
        if b.count == 0.0 {
            return a;
        }
        let count = a.count + b.count;
        let (wa, wb) = (a.count / count, b.count / count);
        let dm = b.mp - a.mp;
        let dr = b.rev - a.rev;
        let cross = a.count * b.count / count;
        Self {
            count,
            mp: a.mp + dm * wb,
            rev: a.rev + dr * wb,
            m2_mp: a.m2_mp + b.m2_mp + dm * dm * cross,
            m2_rev: a.m2_rev + b.m2_rev + dr * dr * cross,
            c_mp_rev: a.c_mp_rev + b.c_mp_rev + dm * dr * cross,
            share: a.share * wa + b.share * wb,
            effort: a.effort * wa + b.effort * wb,
        }
    }

    fn report(&self, seed: u64) -> SimulationReport {
        let n = self.count;
        let var = |m2: f64| if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
        let (var_mp, var_rev) = (var(self.m2_mp), var(self.m2_rev));
        let cov = var(self.c_mp_rev);
        let ratio = self.rev / self.mp;
        // delta method for rev/mp
        let ratio_var = (var_rev - 2.0 * ratio * cov + ratio * ratio * var_mp) / (self.mp * self.mp);
        SimulationReport {
            trials: n as u64,
            seed,
            mp_mean: self.mp,
            mp_stderr: (var_mp / n).sqrt(),
            rev_mean: self.rev,
            rev_stderr: (var_rev / n).sqrt(),
            utilization_ratio: ratio,
            utilization_stderr: (ratio_var.max(0.0) / n).sqrt(),
            mean_winner_share: self.share,
            mean_effort: self.effort,
        }
    }
}

pub fn simulate(d: &Distribution, n: usize, c: &ContestSpec, trials: u64, seed: u64) -> Result<SimulationReport> {
    Simulator::new(d, n, c, seed)?.run(trials)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub trials: u64,
    pub mp_mean: f64,
    pub mp_stderr: f64,
    pub abs_error: f64,
    /// `|mp_mean − quadrature| ≤ 3·stderr`.
    pub within_three_stderr: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub quadrature: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Every rung within three standard errors, and the standard errors
    /// shrinking like `1/√trials` up to a factor of three.
    pub fn consistent(&self) -> bool {
        let inside = self.rows.iter().all(|r| r.within_three_stderr);
        let scaling = self.rows.windows(2).all(|w| {
            if w[0].mp_stderr == 0.0 {
                return w[1].mp_stderr == 0.0;
            }
            let expected = (w[0].trials as f64 / w[1].trials as f64).sqrt();
            let seen = w[1].mp_stderr / w[0].mp_stderr;
            seen <= 3.0 * expected && seen >= expected / 3.0
        });
        inside && scaling
    }
}

/// Monte Carlo MP at each rung of `ladder`, against the exact value.
pub fn convergence_check(
    d: &Distribution,
    n: usize,
    c: &ContestSpec,
    ladder: &[u64],
    seed: u64,
) -> Result<ConvergenceTable> {
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("trial ladder must be increasing".into()));
    }
    let quadrature = exact_max_payment(d, n, c)?;
    let sim = Simulator::new(d, n, c, seed)?;
    let rows = ladder
        .iter()
        .map(|&trials| {
            let rep = sim.run(trials)?;
            let abs_error = (rep.mp_mean - quadrature).abs();
            Ok(ConvergenceRow {
                trials,
                mp_mean: rep.mp_mean,
                mp_stderr: rep.mp_stderr,
                abs_error,
                within_three_stderr: abs_error <= 3.0 * rep.mp_stderr + 1e-12,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable { quadrature, rows })
}
