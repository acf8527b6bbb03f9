//! Contest specifications, the optimal design, and exact evaluation.
//!
//! Symmetric contests are evaluated through their interim allocation: the
//! expected maximum payment is `n·∫ b(v)·F(v)^(n−1)·f(v) dv` because the
//! highest bid comes from the highest value, and revenue is `n·∫ b(v)·f(v) dv`.

mod asymmetric;

pub use asymmetric::{
    asymmetric_allocations, asymmetric_bids, evaluate_asymmetric, evaluate_asymmetric_example, example_instance,
    AsymmetricReport, JOINT_NODES,
};

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::equilibrium::{
    bid_left_limit, bid_unchecked, normalize_prizes, static_bid_unchecked, BidFunction, InterimAllocation,
    PRIZE_SUM_TOL,
};
use crate::error::{Error, Result};
use crate::ironing::{self, iron};
use crate::numeric::{bisect, integrate_pieces, DEFAULT_TOL};
use crate::simulation::SimulationReport;
use crate::virtual_values::{
    analyze, check_n, monopoly_reserve_value, mp_reserve_value, phi_times_density, psi_times_density,
    DEFAULT_GRID,
};

/// How the reward is divided among tied highest bidders.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    #[default]
    EqualSplit,
}

/// A range of bids no equilibrium bid occupies. A submitted bid inside it is
/// rounded down to `snap_to`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
    pub snap_to: f64,
}

impl ForbiddenInterval {
    pub fn contains(&self, b: f64) -> bool {
        let above = if self.lo_open { b > self.lo } else { b >= self.lo };
        let below = if self.hi_open { b < self.hi } else { b <= self.hi };
        above && below
    }

    pub fn snap(&self, b: f64) -> f64 {
        if self.contains(b) {
            self.snap_to
        } else {
            b
        }
    }
}

/// A range of values whose agents tie, as produced by ironing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValuePool {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ContestSpec {
    /// Highest bid wins subject to a reserve bid, with bids in forbidden
    /// intervals rounded down and ties split equally.
    ///
    /// `reserve_value` and `pools` describe the equilibrium the rules induce.
    /// When `reserve_value` is absent it is recovered from `reserve_bid`
    /// under plain highest-value-wins play.
    SymmetricHighestWins {
        n: usize,
        reserve_bid: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reserve_value: Option<f64>,
        #[serde(default)]
        forbidden_intervals: Vec<ForbiddenInterval>,
        #[serde(default)]
        pools: Vec<ValuePool>,
        #[serde(default)]
        tie_rule: TieRule,
    },
    /// The `r`-th highest bidder receives `prizes[r−1]`.
    StaticPrizes { n: usize, prizes: Vec<f64> },
    /// Two agents: agent 1 wins outright above `favored_threshold`; otherwise
    /// the higher value at or above `reserve_value` wins, ties going to agent 2.
    AsymmetricTwoAgent { reserve_value: f64, favored_threshold: f64 },
}

impl ContestSpec {
    /// Highest-bid-wins with the reserve bid that a value reserve `r` induces.
    pub fn highest_wins(d: &Distribution, n: usize, reserve_value: f64) -> Result<Self> {
        check_n(n)?;
        let r = reserve_value.max(d.support_lo());
        let reserve_bid = if r >= d.support_hi() { f64::INFINITY } else { r * d.cdf(r).powi(n as i32 - 1) };
        Ok(ContestSpec::SymmetricHighestWins {
            n,
            reserve_bid,
            reserve_value: Some(r),
            forbidden_intervals: Vec::new(),
            pools: Vec::new(),
            tie_rule: TieRule::EqualSplit,
        })
    }

    /// Highest-bid-wins without a reserve.
    pub fn no_reserve(n: usize) -> Self {
        ContestSpec::SymmetricHighestWins {
            n,
            reserve_bid: 0.0,
            reserve_value: None,
            forbidden_intervals: Vec::new(),
            pools: Vec::new(),
            tie_rule: TieRule::EqualSplit,
        }
    }

    pub fn winner_take_all(n: usize) -> Self {
        let mut prizes = vec![0.0; n];
        if let Some(p) = prizes.first_mut() {
            *p = 1.0;
        }
        ContestSpec::StaticPrizes { n, prizes }
    }

    /// Number of contestants.
    pub fn n(&self) -> usize {
        match self {
            ContestSpec::SymmetricHighestWins { n, .. } | ContestSpec::StaticPrizes { n, .. } => *n,
            ContestSpec::AsymmetricTwoAgent { .. } => 2,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(self, ContestSpec::AsymmetricTwoAgent { .. })
    }

    pub fn forbidden_intervals(&self) -> &[ForbiddenInterval] {
        match self {
            ContestSpec::SymmetricHighestWins { forbidden_intervals, .. } => forbidden_intervals,
            _ => &[],
        }
    }

    /// Bid a submission must reach to be eligible for the reward.
    pub fn reserve_bid(&self) -> f64 {
        match self {
            ContestSpec::SymmetricHighestWins { reserve_bid, .. } => *reserve_bid,
            _ => 0.0,
        }
    }

    /// Rounds a bid inside a forbidden interval down to its allowed bid.
    pub fn snap(&self, bid: f64) -> f64 {
        self.forbidden_intervals().iter().find(|f| f.contains(bid)).map_or(bid, |f| f.snap_to)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ContestSpec::SymmetricHighestWins { n, reserve_bid, reserve_value, forbidden_intervals, pools, .. } => {
                check_n(*n)?;
                if !(*reserve_bid >= 0.0) {
                    return Err(Error::InvalidParameter(format!("reserve bid {reserve_bid} must be nonnegative")));
                }
                if reserve_value.is_some_and(f64::is_nan) {
                    return Err(Error::InvalidParameter("reserve value is NaN".into()));
                }
                let mut prev_hi = f64::NEG_INFINITY;
                for f in forbidden_intervals {
                    if !(f.lo.is_finite() && f.hi.is_finite() && f.lo < f.hi) {
                        return Err(Error::InvalidParameter(format!("forbidden interval [{}, {}] is not bounded", f.lo, f.hi)));
                    }
                    if f.lo < prev_hi {
                        return Err(Error::InvalidParameter("forbidden intervals must be sorted and disjoint".into()));
                    }
                    if !(f.snap_to <= f.lo) || f.snap_to.is_nan() {
                        return Err(Error::InvalidParameter(format!("snap bid {} must not exceed {}", f.snap_to, f.lo)));
                    }
                    prev_hi = f.hi;
                }
                if !forbidden_intervals.is_empty() && pools.is_empty() {
                    return Err(Error::InvalidParameter(
                        "forbidden intervals need the value pools that induce them".into(),
                    ));
                }
                if pools.iter().any(|p| !(p.lo < p.hi)) || pools.windows(2).any(|w| w[1].lo < w[0].hi) {
                    return Err(Error::InvalidParameter("pools must be nonempty, sorted and disjoint".into()));
                }
                Ok(())
            }
            ContestSpec::StaticPrizes { n, prizes } => normalize_prizes(*n, prizes).map(|_| ()),
            ContestSpec::AsymmetricTwoAgent { reserve_value, favored_threshold } => {
                if !(reserve_value.is_finite() && favored_threshold.is_finite() && reserve_value <= favored_threshold) {
                    return Err(Error::InvalidParameter(format!(
                        "need a finite reserve {reserve_value} not above the favored threshold {favored_threshold}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Interim allocation of the symmetric equilibrium.
    pub fn allocation(&self, d: &Distribution) -> Result<InterimAllocation> {
        self.validate()?;
        match self {
            ContestSpec::SymmetricHighestWins { n, reserve_bid, reserve_value, pools, .. } => {
                let r = match reserve_value {
                    Some(r) => *r,
                    None => value_for_reserve_bid(d, *n, *reserve_bid),
                };
                if r >= d.support_hi() {
                    return InterimAllocation::zero(d, *n);
                }
                let pools: Vec<(f64, f64)> = pools.iter().map(|p| (p.lo, p.hi)).collect();
                InterimAllocation::pooled(d, *n, r, &pools)
            }
            ContestSpec::StaticPrizes { n, prizes } => InterimAllocation::static_prizes(d, *n, prizes),
            ContestSpec::AsymmetricTwoAgent { .. } => Err(Error::AsymmetricContest),
        }
    }

    /// Tabulated symmetric equilibrium bid.
    pub fn bid_function(&self, d: &Distribution) -> Result<BidFunction> {
        BidFunction::from_allocation(d, &self.allocation(d)?)
    }
}

/// Value whose highest-bid-wins bid `v·F(v)^(n−1)` equals `reserve_bid`;
/// `+inf` when no value in the support reaches it.
pub fn value_for_reserve_bid(d: &Distribution, n: usize, reserve_bid: f64) -> f64 {
    let (lo, hi) = (d.support_lo(), d.effective_hi());
    if reserve_bid <= 0.0 {
        return lo;
    }
    let g = |v: f64| v * d.cdf(v).powi(n as i32 - 1) - reserve_bid;
    if g(hi) < 0.0 {
        return f64::INFINITY;
    }
    if g(lo) >= 0.0 {
        return lo;
    }
    bisect(g, lo, hi)
}

/// The contest maximizing expected maximum payment among all symmetric
/// all-pay contests.
///
/// When `ψₙ` is nondecreasing where nonnegative this is highest-bid-wins with
/// reserve `ψₙ⁻¹(0)`. Otherwise `ψₙ` is ironed; agents inside each ironed
/// interval tie, which shows up in bid space as a plateau bid flanked by two
/// forbidden intervals.
pub fn design_optimal_contest(d: &Distribution, n: usize) -> Result<ContestSpec> {
    let report = analyze(d, n, DEFAULT_GRID)?;
    if report.psi_nonneg_from.is_none() {
        return Err(Error::AllNegativeVirtualValue);
    }
    if report.psi_monotone_where_nonnegative() {
        let r = if report.psi.iter().all(|&p| p >= 0.0) { d.support_lo() } else { mp_reserve_value(d, n)? };
        return ContestSpec::highest_wins(d, n, r);
    }

    let ic = iron(d, n, ironing::DEFAULT_GRID)?;
    let r = ic.reserve_value(d)?;
    let pools: Vec<(f64, f64)> =
        ic.ironed_intervals.iter().filter(|iv| iv.hi > r).map(|iv| (iv.lo.max(r), iv.hi)).collect();
    let alloc = InterimAllocation::pooled(d, n, r, &pools)?;

    let mut forbidden = Vec::with_capacity(2 * pools.len());
    for &(l, u) in &pools {
        let plateau = bid_unchecked(&alloc, l);
        if l > r {
            let below = bid_left_limit(&alloc, l);
            forbidden.push(ForbiddenInterval { lo: below, hi: plateau, lo_open: false, hi_open: true, snap_to: below });
        }
        if u < d.support_hi() {
            let above = bid_unchecked(&alloc, u);
            forbidden.push(ForbiddenInterval { lo: plateau, hi: above, lo_open: true, hi_open: false, snap_to: plateau });
        }
    }
    Ok(ContestSpec::SymmetricHighestWins {
        n,
        reserve_bid: bid_unchecked(&alloc, r),
        reserve_value: Some(r),
        forbidden_intervals: forbidden,
        pools: pools.into_iter().map(|(lo, hi)| ValuePool { lo, hi }).collect(),
        tie_rule: TieRule::EqualSplit,
    })
}

fn check_symmetric(n: usize, c: &ContestSpec) -> Result<()> {
    if !c.is_symmetric() {
        return Err(Error::AsymmetricContest);
    }
    if c.n() != n {
        return Err(Error::InvalidParameter(format!("contest is for {} contestants, asked for {n}", c.n())));
    }
    Ok(())
}

/// Symmetric bid `b(v)`, routed through the static-prize formula for static contests.
fn bid_evaluator<'a>(d: &'a Distribution, c: &'a ContestSpec, a: &'a InterimAllocation) -> impl Fn(f64) -> f64 + 'a {
    let prizes = match c {
        ContestSpec::StaticPrizes { n, prizes } => normalize_prizes(*n, prizes).ok(),
        _ => None,
    };
    move |v| match &prizes {
        Some(p) => static_bid_unchecked(d, a.n(), p, v),
        None => bid_unchecked(a, v),
    }
}

/// `n·∫ w(v)·b(v)·f(v) dv` above the reserve, with `b = 0` treated as an exact zero.
fn integrate_bids<W: Fn(f64) -> f64>(d: &Distribution, c: &ContestSpec, weight: W) -> Result<f64> {
    let a = c.allocation(d)?;
    let lo = a.reserve_value().max(d.support_lo());
    let hi = d.effective_hi();
    if lo >= hi {
        return Ok(0.0);
    }
    let b = bid_evaluator(d, c, &a);
    let integrand = |v: f64| {
        let bid = b(v);
        if bid == 0.0 {
            0.0
        } else {
            bid * weight(v) * d.pdf(v)
        }
    };
    Ok(a.n() as f64 * integrate_pieces(integrand, lo, hi, a.breaks(), DEFAULT_TOL))
}

/// Expected maximum payment `E[maxᵢ bᵢ]` of a symmetric contest.
pub fn expected_max_payment(d: &Distribution, n: usize, c: &ContestSpec) -> Result<f64> {
    check_symmetric(n, c)?;
    integrate_bids(d, c, |v| d.cdf(v).powi(n as i32 - 1))
}

/// Expected total payment `E[Σᵢ bᵢ]` of a symmetric contest.
pub fn expected_revenue(d: &Distribution, n: usize, c: &ContestSpec) -> Result<f64> {
    check_symmetric(n, c)?;
    integrate_bids(d, c, |_| 1.0)
}

/// Expected maximum payment as expected max-payment virtual surplus,
/// `n·∫ x(v)·ψₙ(v)·f(v) dv`.
pub fn expected_max_payment_via_virtual_surplus(d: &Distribution, n: usize, c: &ContestSpec) -> Result<f64> {
    check_symmetric(n, c)?;
    let a = c.allocation(d)?;
    let lo = a.reserve_value().max(d.support_lo());
    let hi = d.effective_hi();
    if lo >= hi {
        return Ok(0.0);
    }
    let integrand = |v: f64| {
        let x = a.eval(v);
        if x == 0.0 {
            0.0
        } else {
            x * psi_times_density(d, n, v)
        }
    };
    Ok(n as f64 * integrate_pieces(integrand, lo, hi, a.breaks(), DEFAULT_TOL))
}

/// Revenue of the optimal auction for revenue-regular distributions:
/// highest value wins above the monopoly price, `n·∫_{r*} φ·F^(n−1)·f`.
pub fn optimal_revenue_benchmark(d: &Distribution, n: usize) -> Result<f64> {
    check_n(n)?;
    let report = analyze(d, n, DEFAULT_GRID)?;
    if !report.regular_for_revenue {
        return Err(Error::IrregularForRevenue);
    }
    let r = if report.phi.iter().all(|&p| p >= 0.0) { d.support_lo() } else { monopoly_reserve_value(d)? };
    let integrand = |v: f64| {
        let w = d.cdf(v).powi(n as i32 - 1);
        if w == 0.0 {
            0.0
        } else {
            phi_times_density(d, v) * w
        }
    };
    Ok(n as f64 * integrate_pieces(integrand, r, d.effective_hi(), &d.breakpoints(), DEFAULT_TOL))
}

/// Exact evaluation of a symmetric contest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub n: usize,
    pub mp_exact: f64,
    pub rev_exact: f64,
    pub mp_virtual_surplus: f64,
    /// `rev_exact / mp_exact`.
    pub utilization_ratio: f64,
    /// Optimal-auction revenue; absent for revenue-irregular distributions
    /// unless supplied by the caller.
    pub opt_revenue: Option<f64>,
    /// `opt_revenue / mp_exact`.
    pub approximation_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<SimulationReport>,
}

pub fn ratios(d: &Distribution, n: usize, c: &ContestSpec) -> Result<EvaluationReport> {
    let benchmark = match optimal_revenue_benchmark(d, n) {
        Ok(v) => Some(v),
        Err(Error::IrregularForRevenue) => None,
        Err(e) => return Err(e),
    };
    evaluate(d, n, c, benchmark)
}

/// Like [`ratios`], with an externally supplied revenue benchmark.
pub fn ratios_with_benchmark(d: &Distribution, n: usize, c: &ContestSpec, opt_revenue: f64) -> Result<EvaluationReport> {
    evaluate(d, n, c, Some(opt_revenue))
}

fn evaluate(d: &Distribution, n: usize, c: &ContestSpec, opt_revenue: Option<f64>) -> Result<EvaluationReport> {
    let mp_exact = expected_max_payment(d, n, c)?;
    if !(mp_exact > 0.0) {
        return Err(Error::DegenerateContest);
    }
    let rev_exact = expected_revenue(d, n, c)?;
    let mp_virtual_surplus = expected_max_payment_via_virtual_surplus(d, n, c)?;
    Ok(EvaluationReport {
        n,
        mp_exact,
        rev_exact,
        mp_virtual_surplus,
        utilization_ratio: rev_exact / mp_exact,
        opt_revenue,
        approximation_ratio: opt_revenue.map(|o| o / mp_exact),
        monte_carlo: None,
    })
}

/// Exact expected maximum payment of any contest, symmetric or not.
pub fn exact_max_payment(d: &Distribution, n: usize, c: &ContestSpec) -> Result<f64> {
    match c {
        ContestSpec::AsymmetricTwoAgent { reserve_value, favored_threshold } => {
            Ok(evaluate_asymmetric(d, *reserve_value, *favored_threshold)?.mp_exact)
        }
        _ => expected_max_payment(d, n, c),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticRow {
    pub prizes: Vec<f64>,
    pub mp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticComparison {
    pub n: usize,
    pub rows: Vec<StaticRow>,
    pub winner_take_all_mp: f64,
    /// Winner-take-all attains the largest MP, within [`STATIC_TOL`].
    pub winner_take_all_dominates: bool,
}

/// Slack in the winner-take-all dominance verdict.
pub const STATIC_TOL: f64 = 1e-6;

/// Expected maximum payment of each static prize vector, alongside winner-take-all.
pub fn compare_static(d: &Distribution, n: usize, prize_vectors: &[Vec<f64>]) -> Result<StaticComparison> {
    let wta = ContestSpec::winner_take_all(n);
    let winner_take_all_mp = expected_max_payment(d, n, &wta)?;
    let mut rows = Vec::with_capacity(prize_vectors.len());
    for prizes in prize_vectors {
        let c = ContestSpec::StaticPrizes { n, prizes: normalize_prizes(n, prizes)? };
        rows.push(StaticRow { prizes: prizes.clone(), mp: expected_max_payment(d, n, &c)? });
    }
    let winner_take_all_dominates = rows.iter().all(|r| r.mp <= winner_take_all_mp + STATIC_TOL);
    Ok(StaticComparison { n, rows, winner_take_all_mp, winner_take_all_dominates })
}

/// Parses `"0.5,0.3,0.2"` or `"2/3,1/3,0"` into a prize vector whose entries sum to one.
pub fn parse_prizes(s: &str) -> Result<Vec<f64>> {
    let number = |t: &str| {
        let bad = |e: std::num::ParseFloatError| Error::InvalidParameter(format!("prize {t:?}: {e}"));
        match t.split_once('/') {
            Some((p, q)) => Ok(p.trim().parse::<f64>().map_err(bad)? / q.trim().parse::<f64>().map_err(bad)?),
            None => t.parse::<f64>().map_err(bad),
        }
    };
    let prizes = s.split(',').map(|t| number(t.trim())).collect::<Result<Vec<f64>>>()?;
    let sum: f64 = prizes.iter().sum();
    if (sum - 1.0).abs() > PRIZE_SUM_TOL {
        return Err(Error::PrizeSum { sum });
    }
    Ok(prizes)
}

#[cfg(test)]
mod tests;
