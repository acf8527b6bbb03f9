//! Symmetric Bayes-Nash equilibrium bids in all-pay contests.
//!
//! Every bid here follows from the payment identity
//! `b(v) = v·x(v) − lo·x(lo) − ∫_lo^v x(z) dz`, where `x` is the interim
//! allocation and the lowest type pays nothing. Two independent routes are
//! also provided for cross-checking: the order-statistic form of the
//! highest-bid-wins bid, and the rank-by-rank formula for static prize vectors.

use std::fmt;
use std::sync::Arc;

use log::warn;
use serde::Serialize;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::numeric::integrate_pieces;
use crate::virtual_values::{check_n, MONOTONE_SLACK};

/// Tabulation size for [`BidFunction`].
pub const BID_GRID: usize = 4096;

/// Points sampled by [`bid_from_allocation`] when checking monotonicity.
const MONOTONE_CHECK_POINTS: usize = 257;

/// Tolerance of the inner integrals, kept well below the default so that
/// the outer expected-value integrals see a smooth integrand.
const INNER_TOL: f64 = 1e-12;

/// Tolerance on a prize vector summing to one.
pub const PRIZE_SUM_TOL: f64 = 1e-9;

type AllocationFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Expected reward share `x(v)` of an agent with value `v`, averaged over the
/// opponents' values.
#[derive(Clone)]
pub struct InterimAllocation {
    n: usize,
    lo: f64,
    hi: f64,
    support_hi: f64,
    reserve_value: f64,
    breaks: Vec<f64>,
    plateaus: Vec<(f64, f64)>,
    x: Arc<AllocationFn>,
}

impl fmt::Debug for InterimAllocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InterimAllocation")
            .field("n", &self.n)
            .field("support", &(self.lo, self.hi))
            .field("reserve_value", &self.reserve_value)
            .field("plateaus", &self.plateaus)
            .finish_non_exhaustive()
    }
}

impl InterimAllocation {
    /// Highest value wins among those at or above `reserve_value`:
    /// `x(v) = F(v)^(n−1)` for `v ≥ r`, zero below.
    pub fn highest_wins(d: &Distribution, n: usize, reserve_value: f64) -> Result<Self> {
        Self::pooled(d, n, reserve_value, &[])
    }

    /// Highest value wins above the reserve, except that all values inside
    /// one pool `[l, u)` tie and split the reward equally.
    ///
    /// Pools entirely below the reserve are dropped; a pool straddling it is
    /// cut at the reserve.
    pub fn pooled(d: &Distribution, n: usize, reserve_value: f64, pools: &[(f64, f64)]) -> Result<Self> {
        check_n(n)?;
        if reserve_value.is_nan() {
            return Err(Error::InvalidParameter("reserve value is NaN".into()));
        }
        let r = reserve_value.max(d.support_lo());
        let mut kept: Vec<(f64, f64)> = Vec::with_capacity(pools.len());
        for &(l, u) in pools {
            if !(l < u) || !d.contains(l) || !d.contains(u) {
                return Err(Error::InvalidParameter(format!("pool [{l}, {u}] is empty or leaves the support")));
            }
            if let Some(&(_, prev)) = kept.last() {
                if l < prev {
                    return Err(Error::InvalidParameter("pools must be sorted and disjoint".into()));
                }
            }
            if u > r {
                kept.push((l.max(r), u));
            }
        }

        let shares: Vec<(f64, f64, f64)> = kept
            .iter()
            .map(|&(l, u)| (l, u, pool_share(d.cdf(l), d.cdf(u), n)))
            .collect();
        let dist = d.clone();
        let x = move |v: f64| {
            if v < r {
                return 0.0;
            }
            match shares.iter().find(|&&(l, u, _)| v >= l && v < u) {
                Some(&(_, _, s)) => s,
                None => dist.cdf(v).powi(n as i32 - 1),
            }
        };

        let mut breaks = d.breakpoints();
        breaks.push(r);
        breaks.extend(kept.iter().flat_map(|&(l, u)| [l, u]));
        Ok(Self::assemble(d, n, r, breaks, kept, Arc::new(x)))
    }

    /// Static contest: the `r`-th highest bidder receives `prizes[r−1]`.
    ///
    /// Shorter vectors are padded with zeros.
    pub fn static_prizes(d: &Distribution, n: usize, prizes: &[f64]) -> Result<Self> {
        let a = normalize_prizes(n, prizes)?;
        let dist = d.clone();
        let x = move |v: f64| {
            let f = dist.cdf(v);
            (1..=n).map(|r| rank_weight(n, r, f) * a[r - 1]).sum::<f64>()
        };
        Ok(Self::assemble(d, n, d.support_lo(), d.breakpoints(), Vec::new(), Arc::new(x)))
    }

    /// Nobody is ever rewarded.
    pub fn zero(d: &Distribution, n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self::assemble(d, n, f64::INFINITY, Vec::new(), Vec::new(), Arc::new(|_| 0.0)))
    }

    /// Arbitrary allocation; `breaks` lists the points where `x` jumps or kinks.
    pub fn from_fn<F>(d: &Distribution, n: usize, breaks: Vec<f64>, x: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_n(n)?;
        let mut all = d.breakpoints();
        all.extend(breaks);
        Ok(Self::assemble(d, n, d.support_lo(), all, Vec::new(), Arc::new(x)))
    }

    fn assemble(
        d: &Distribution,
        n: usize,
        reserve_value: f64,
        mut breaks: Vec<f64>,
        plateaus: Vec<(f64, f64)>,
        x: Arc<AllocationFn>,
    ) -> Self {
        let (lo, hi) = (d.support_lo(), d.effective_hi());
        breaks.retain(|&b| b > lo && b < hi);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        Self { n, lo, hi, support_hi: d.support_hi(), reserve_value, breaks, plateaus, x }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value below which the allocation is zero (`+inf` for [`Self::zero`]).
    pub fn reserve_value(&self) -> f64 {
        self.reserve_value
    }

    /// Points where the allocation may jump or kink.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// Value ranges `[l, u)` on which the allocation, and hence the bid, is constant.
    pub fn plateaus(&self) -> &[(f64, f64)] {
        &self.plateaus
    }

    pub fn eval(&self, v: f64) -> f64 {
        if v < self.lo {
            0.0
        } else {
            (self.x)(v.min(self.hi))
        }
    }

    /// Left limit `x(v⁻)`.
    pub fn eval_left(&self, v: f64) -> f64 {
        self.eval(v - JUMP_EPS * v.abs().max(1.0))
    }

    /// Share secured by the lowest type, which pays nothing.
    fn floor_share(&self) -> f64 {
        self.eval(self.lo)
    }

    fn plateau_start(&self, v: f64) -> Option<f64> {
        self.plateaus.iter().find(|&&(l, u)| v >= l && v < u).map(|&(l, _)| l)
    }

    /// `∫_a^b x`, skipping the zero region below the reserve.
    fn integral(&self, a: f64, b: f64, tol: f64) -> f64 {
        let a = a.max(self.reserve_value.min(b));
        if b <= a {
            return 0.0;
        }
        integrate_pieces(|z| self.eval(z), a, b, &self.breaks, tol)
    }

    fn check_monotone_on(&self, points: impl Iterator<Item = f64>) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        let mut prev_at = self.lo;
        for v in points {
            let x = self.eval(v);
            if x < prev - MONOTONE_SLACK {
                return Err(Error::NonMonotoneAllocation { at: prev_at, drop: prev - x });
            }
            prev = prev.max(x);
            prev_at = v;
        }
        Ok(())
    }
}

/// Relative offset used to read left limits at jump points.
const JUMP_EPS: f64 = 1e-12;

/// Expected share of a tie inside a pool whose quantile range is `[fl, fu]`.
fn pool_share(fl: f64, fu: f64, n: usize) -> f64 {
    if fu <= fl {
        return fl.powi(n as i32 - 1);
    }
    (fu.powi(n as i32) - fl.powi(n as i32)) / (n as f64 * (fu - fl))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Probability that an agent at quantile `f` ranks `r`-th among `n`.
fn rank_weight(n: usize, r: usize, f: f64) -> f64 {
    binomial(n - 1, r - 1) * (1.0 - f).powi(r as i32 - 1) * f.powi((n - r) as i32)
}

/// Validates a prize vector and pads it with zeros to length `n`.
pub fn normalize_prizes(n: usize, prizes: &[f64]) -> Result<Vec<f64>> {
    check_n(n)?;
    if prizes.is_empty() || prizes.len() > n {
        return Err(Error::InvalidParameter(format!("expected 1..={n} prizes, got {}", prizes.len())));
    }
    if let Some(p) = prizes.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidParameter(format!("prize {p} is not a nonnegative number")));
    }
    let sum: f64 = prizes.iter().sum();
    if (sum - 1.0).abs() > PRIZE_SUM_TOL {
        return Err(Error::PrizeSum { sum });
    }
    if prizes.windows(2).any(|w| w[1] > w[0]) {
        warn!("prize vector {prizes:?} is not nonincreasing; the symmetric equilibrium may not exist");
    }
    let mut a = prizes.to_vec();
    a.resize(n, 0.0);
    Ok(a)
}

/// Payment-identity bid `v·x(v) − lo·x(lo) − ∫_lo^v x`.
pub fn bid_from_allocation(a: &InterimAllocation, v: f64) -> Result<f64> {
    if !(v >= a.lo && v <= a.support_hi) || v.is_infinite() {
        return Err(Error::OutOfSupport { value: v, lo: a.lo, hi: a.support_hi });
    }
    let top = v.min(a.hi);
    let step = (top - a.lo) / (MONOTONE_CHECK_POINTS - 1) as f64;
    let grid = (0..MONOTONE_CHECK_POINTS).map(|k| a.lo + step * k as f64);
    let at_breaks = a.breaks.iter().copied().filter(|&b| b <= top).flat_map(|b| [b - JUMP_EPS * b.abs().max(1.0), b]);
    let mut points: Vec<f64> = grid.chain(at_breaks).collect();
    points.sort_by(f64::total_cmp);
    a.check_monotone_on(points.into_iter())?;
    Ok(bid_unchecked(a, v))
}

pub(crate) fn bid_unchecked(a: &InterimAllocation, v: f64) -> f64 {
    let v = a.plateau_start(v).unwrap_or(v).min(a.hi);
    v * a.eval(v) - a.lo * a.floor_share() - a.integral(a.lo, v, INNER_TOL)
}

/// Left limit `b(v⁻)` of the payment-identity bid, which differs from
/// `b(v)` where the allocation jumps.
pub fn bid_left_limit(a: &InterimAllocation, v: f64) -> f64 {
    v * a.eval_left(v) - a.lo * a.floor_share() - a.integral(a.lo, v, INNER_TOL)
}

/// Highest-bid-wins bid with a value reserve, in order-statistic form:
/// `r·F(r)^(n−1) + E[max(v₍₂₎, r)·1{v₍₂₎ > r} | v₍₁₎ = v]·F(v)^(n−1)`, written as
/// `r·F(r)^(n−1) + ∫_{F(r)}^{F(v)} F⁻¹(s)·(n−1)·s^(n−2) ds`. Zero below `r`.
pub fn allpay_bid_highest_wins(d: &Distribution, n: usize, reserve_value: f64, v: f64) -> Result<f64> {
    check_n(n)?;
    d.check_support(v)?;
    let r = reserve_value.max(d.support_lo());
    if v < r {
        return Ok(0.0);
    }
    let (qr, qv) = (d.cdf(r), d.cdf(v));
    let base = r * qr.powi(n as i32 - 1);
    if n == 1 {
        return Ok(base);
    }
    let breaks: Vec<f64> = d.breakpoints().iter().map(|&b| d.cdf(b)).collect();
    let m = (n - 1) as f64;
    let tail = integrate_pieces(|s| d.quantile(s) * m * s.powi(n as i32 - 2), qr, qv, &breaks, INNER_TOL);
    Ok(base + tail)
}

/// Bid that an agent of value `r` submits when the highest bid wins: `r·F(r)^(n−1)`.
pub fn reserve_bid_from_value(d: &Distribution, n: usize, r: f64) -> Result<f64> {
    check_n(n)?;
    d.check_support(r)?;
    Ok(r * d.cdf(r).powi(n as i32 - 1))
}

/// Expected `j`-th highest of `m` i.i.d. draws from `F` conditioned on all
/// draws being at most `z`.
pub fn order_stat_expectation(d: &Distribution, j: usize, m: usize, z: f64) -> Result<f64> {
    if j == 0 || j > m {
        return Err(Error::InvalidRank { rank: j, draws: m });
    }
    if !(z > d.support_lo()) || z > d.support_hi() || !z.is_finite() {
        return Err(d.out_of_support(z));
    }
    Ok(order_stat_unchecked(d, j, m, z))
}

fn order_stat_unchecked(d: &Distribution, j: usize, m: usize, z: f64) -> f64 {
    let lo = d.support_lo();
    let fz = d.cdf(z);
    let breaks = d.breakpoints();
    let ratio_pow = |k: usize| integrate_pieces(|t| (d.cdf(t) / fz).powi(k as i32), lo, z, &breaks, INNER_TOL);
    match j {
        1 => z - ratio_pow(m),
        2 => z - (m as f64 * ratio_pow(m - 1) - (m - 1) as f64 * ratio_pow(m)),
        _ => order_stat_by_density(d, j, m, z),
    }
}

/// Quadrature of the truncated order-statistic density in quantile space:
/// with `u = F(t)/F(z)`, the `j`-th highest of `m` has a Beta(m−j+1, j) law.
fn order_stat_by_density(d: &Distribution, j: usize, m: usize, z: f64) -> f64 {
    let fz = d.cdf(z);
    let coef = m as f64 * binomial(m - 1, j - 1);
    let breaks: Vec<f64> = d.breakpoints().iter().map(|&b| d.cdf(b) / fz).collect();
    let density = |u: f64| coef * u.powi((m - j) as i32) * (1.0 - u).powi(j as i32 - 1);
    integrate_pieces(|u| d.quantile(u * fz) * density(u), 0.0, 1.0, &breaks, INNER_TOL)
}

/// Equilibrium bid in a static contest, summing over the rank `r` the agent
/// attains the expected prize-difference payments owed to those below:
/// `Σ_r C(n−1,r−1)(1−F)^(r−1)F^(n−r) · Σ_j g(j, n−r, v)(a_(j+r−1) − a_(j+r))`.
pub fn static_contest_bid(d: &Distribution, n: usize, prizes: &[f64], v: f64) -> Result<f64> {
    let a = normalize_prizes(n, prizes)?;
    d.check_support(v)?;
    Ok(static_bid_unchecked(d, n, &a, v))
}

pub(crate) fn static_bid_unchecked(d: &Distribution, n: usize, a: &[f64], v: f64) -> f64 {
    let f = d.cdf(v);
    if f <= 0.0 {
        return 0.0;
    }
    let prize = |k: usize| if k <= n { a[k - 1] } else { 0.0 };
    let mut total = 0.0;
    for r in 1..n {
        let m = n - r;
        let w = rank_weight(n, r, f);
        if w == 0.0 {
            continue;
        }
        let inner: f64 = (1..=m)
            .map(|j| {
                let gap = prize(j + r - 1) - prize(j + r);
                if gap == 0.0 {
                    0.0
                } else {
                    gap * order_stat_unchecked(d, j, m, v)
                }
            })
            .sum();
        total += w * inner;
    }
    total
}

/// Bids tabulated on a quantile grid, with duplicated abscissae at jumps.
#[derive(Debug, Clone, Serialize)]
pub struct BidFunction {
    pub grid: Vec<f64>,
    pub bid: Vec<f64>,
    pub reserve_value: f64,
}

impl BidFunction {
    /// Tabulates the payment-identity bid of `a` on [`BID_GRID`] quantile
    /// points plus the support ends and every allocation breakpoint.
    pub fn from_allocation(d: &Distribution, a: &InterimAllocation) -> Result<Self> {
        Self::from_allocation_with_grid(d, a, BID_GRID)
    }

    pub fn from_allocation_with_grid(d: &Distribution, a: &InterimAllocation, size: usize) -> Result<Self> {
        let mut base = d.quantile_grid(size);
        base.push(a.lo);
        base.push(a.hi);
        base.extend(a.breaks.iter().copied());
        base.sort_by(f64::total_cmp);
        base.dedup();

        // each breakpoint appears twice: its left limit, then its value
        let mut grid = Vec::with_capacity(base.len() + a.breaks.len());
        let mut shares = Vec::with_capacity(grid.capacity());
        for (i, &v) in base.iter().enumerate() {
            if a.breaks.binary_search_by(|b| b.total_cmp(&v)).is_ok() {
                // breaks closer together than the left-limit offset must not
                // read across the previous one
                let probe = (v - JUMP_EPS * v.abs().max(1.0)).max(if i > 0 { base[i - 1] } else { v });
                let left = if probe < v { a.eval(probe) } else { a.eval(v) };
                let right = a.eval(v);
                if left != right {
                    grid.push(v);
                    shares.push(left);
                }
            }
            grid.push(v);
            shares.push(a.eval(v));
        }
        if let Some(k) = (1..shares.len()).find(|&k| shares[k] < shares[k - 1] - MONOTONE_SLACK) {
            return Err(Error::NonMonotoneAllocation { at: grid[k], drop: shares[k - 1] - shares[k] });
        }

        let floor = a.lo * a.floor_share();
        let seg_tol = INNER_TOL / grid.len() as f64;
        let mut cumulative = 0.0;
        let mut bid = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            if k > 0 && grid[k] > grid[k - 1] {
                cumulative += a.integral(grid[k - 1], grid[k], seg_tol);
            }
            bid.push(grid[k] * shares[k] - floor - cumulative);
        }
        for &(l, u) in &a.plateaus {
            // the right value at l is the last grid entry with abscissa l
            let start = grid.partition_point(|&g| g <= l) - 1;
            let level = bid[start];
            // through the left limit at u, which is still on the plateau
            for k in start..grid.len() {
                let left_limit_at_u = grid[k] == u && grid.get(k + 1) == Some(&u);
                if grid[k] >= u && !left_limit_at_u {
                    break;
                }
                bid[k] = level;
            }
        }
        Ok(Self { grid, bid, reserve_value: a.reserve_value })
    }

    /// Highest-bid-wins bids tabulated from [`allpay_bid_highest_wins`].
    pub fn highest_wins(d: &Distribution, n: usize, reserve_value: f64) -> Result<Self> {
        let a = InterimAllocation::highest_wins(d, n, reserve_value)?;
        Self::from_allocation(d, &a)
    }

    /// Right-continuous linear interpolation; constant beyond the grid.
    pub fn eval(&self, v: f64) -> f64 {
        let k = self.grid.partition_point(|&g| g <= v);
        if k == 0 {
            return self.bid[0];
        }
        if k == self.grid.len() {
            return self.bid[k - 1];
        }
        let (g0, g1) = (self.grid[k - 1], self.grid[k]);
        let (b0, b1) = (self.bid[k - 1], self.bid[k]);
        if b0 == b1 {
            return b0;
        }
        b0 + (b1 - b0) * (v - g0) / (g1 - g0)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.bid.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn families() -> Vec<Distribution> {
        vec![
            Distribution::uniform(0.0, 1.0).unwrap(),
            Distribution::uniform(1.0, 3.0).unwrap(),
            Distribution::exponential(1.0).unwrap(),
            Distribution::power(1.5).unwrap(),
            Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)]).unwrap(),
            Distribution::tabulated(vec![[0.0, 0.0], [0.5, 0.2], [1.0, 0.7], [2.0, 1.0]]).unwrap(),
        ]
    }

    #[test]
    fn uniform_no_reserve_bid() {
        let d = Distribution::uniform(0.0, 1.0).unwrap();
        for n in [2usize, 3, 5] {
            let a = InterimAllocation::highest_wins(&d, n, 0.0).unwrap();
            for k in 1..=20 {
                let v = k as f64 / 20.0;
                let expect = (n - 1) as f64 / n as f64 * v.powi(n as i32);
                assert!((bid_from_allocation(&a, v).unwrap() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_allocation_bids_nothing() {
        let d = Distribution::uniform(0.0, 1.0).unwrap();
        let a = InterimAllocation::zero(&d, 3).unwrap();
        assert_eq!(bid_from_allocation(&a, 0.7).unwrap(), 0.0);
        let bf = BidFunction::from_allocation(&d, &a).unwrap();
        assert!(bf.bid.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn bid_at_reserve() {
        let d = Distribution::power(1.5).unwrap();
        let r = 0.25f64.powf(1.0 / 3.0);
        let a = InterimAllocation::highest_wins(&d, 2, r).unwrap();
        let b = bid_from_allocation(&a, r).unwrap();
        assert!((b - r * d.cdf(r)).abs() < 1e-15);
        assert!((reserve_bid_from_value(&d, 2, r).unwrap() - 0.25f64.powf(5.0 / 6.0)).abs() < 1e-12);
        assert_eq!(bid_from_allocation(&a, 0.5 * r).unwrap(), 0.0);
    }

    #[test]
    fn uniform_reserve_bid_is_one_over_n_plus_one() {
        let d = Distribution::uniform(0.0, 1.0).unwrap();
        for n in [2usize, 3, 5, 10] {
            let r = (n as f64 + 1.0).powf(-1.0 / n as f64);
            let expect = 1.0 / (n as f64 + 1.0);
            assert!((reserve_bid_from_value(&d, n, r).unwrap() - expect).abs() < 1e-12);
            assert!((allpay_bid_highest_wins(&d, n, r, r).unwrap() - expect).abs() < 1e-12);
        }
        assert_eq!(reserve_bid_from_value(&d, 4, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn revenue_equivalence_all_families() {
        for d in families() {
            for n in [2usize, 5] {
                let r = d.quantile(0.3);
                let a = InterimAllocation::highest_wins(&d, n, r).unwrap();
                for v in d.quantile_grid(100) {
                    let pi = bid_from_allocation(&a, v).unwrap();
                    let os = allpay_bid_highest_wins(&d, n, r, v).unwrap();
                    assert!((pi - os).abs() < 1e-8, "{:?} n={n} v={v}: {pi} vs {os}", d.spec());
                }
            }
        }
    }

    #[test]
    fn individual_rationality_and_monotonicity() {
        for d in families() {
            let (l, u) = (d.quantile(0.5), d.quantile(0.7));
            let a = InterimAllocation::pooled(&d, 3, d.quantile(0.2), &[(l, u)]).unwrap();
            let bf = BidFunction::from_allocation(&d, &a).unwrap();
            assert!(bf.is_nondecreasing());
            for (&v, &b) in bf.grid.iter().zip(&bf.bid) {
                assert!(b <= v * a.eval(v) + 1e-12, "{v}: {b}");
            }
        }
    }

    #[test]
    fn reserve_one_ulp_below_a_density_knot() {
        let knot = 0.4650978525749129;
        let d = Distribution::tabulated(vec![[0.0, 0.0], [knot, 0.6166588344722944], [0.5150978525749129, 1.0]]).unwrap();
        let r = f64::from_bits(knot.to_bits() - 1);
        let a = InterimAllocation::highest_wins(&d, 3, r).unwrap();
        let bf = BidFunction::from_allocation(&d, &a).unwrap();
        assert!(bf.is_nondecreasing());
        assert!((bf.eval(0.5) - bid_from_allocation(&a, 0.5).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn tabulation_matches_pointwise_bids() {
        let d = Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)]).unwrap();
        let a = InterimAllocation::pooled(&d, 2, 1.5, &[(1.92, 2.17)]).unwrap();
        let bf = BidFunction::from_allocation(&d, &a).unwrap();
        for v in [1.2, 1.5, 1.7, 1.95, 2.1, 2.3, 2.9] {
            let direct = bid_from_allocation(&a, v).unwrap();
            assert!((bf.eval(v) - direct).abs() < 1e-6, "{v}: {} vs {direct}", bf.eval(v));
        }
        // every grid bid inside the pool is the same number
        let inside: Vec<f64> = bf.grid.iter().zip(&bf.bid).filter(|(&g, _)| g > 1.92 && g < 2.17).map(|(_, &b)| b).collect();
        assert!(inside.len() > 10);
        assert!(inside.iter().all(|&b| b == inside[0]), "{inside:?}");
        // jumps at the reserve and both pool ends
        assert_eq!(bf.eval(1.5 - 1e-9), 0.0);
        assert!(bf.eval(1.92) - bf.eval(1.92 - 1e-9) > 0.01);
        assert!(bf.eval(2.17) - bf.eval(2.17 - 1e-9) > 0.01);
    }

    #[test]
    fn non_monotone_allocation_rejected() {
        let d = Distribution::uniform(0.0, 1.0).unwrap();
        let a = InterimAllocation::from_fn(&d, 2, vec![0.5], |v| if v < 0.5 { 0.6 } else { 0.2 }).unwrap();
        assert!(matches!(bid_from_allocation(&a, 0.9), Err(Error::NonMonotoneAllocation { .. })));
        assert!(matches!(BidFunction::from_allocation(&d, &a), Err(Error::NonMonotoneAllocation { .. })));
        // below the drop the allocation is still monotone
        assert!(bid_from_allocation(&a, 0.4).is_ok());
    }

    #[test]
    fn order_stat_closed_forms() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        for m in 1..6 {
            for z in [0.2, 0.5, 1.0] {
                let g = order_stat_expectation(&u, 1, m, z).unwrap();
                assert!((g - z * m as f64 / (m as f64 + 1.0)).abs() < 1e-12);
            }
        }
        let e = Distribution::exponential(1.0).unwrap();
        let z = 2.0f64;
        let fz = e.cdf(z);
        let cond_mean = (1.0 - (1.0 + z) * (-z).exp()) / fz;
        assert!((order_stat_expectation(&e, 1, 1, z).unwrap() - cond_mean).abs() < 1e-12);
        assert!(matches!(order_stat_expectation(&u, 3, 2, 0.5), Err(Error::InvalidRank { .. })));
        assert!(matches!(order_stat_expectation(&u, 0, 2, 0.5), Err(Error::InvalidRank { .. })));
        assert!(order_stat_expectation(&u, 1, 2, 0.0).is_err());
    }

    #[test]
    fn order_stat_density_route_agrees_with_closed_forms() {
        for d in families() {
            let z = d.quantile(0.8);
            for m in 2..6 {
                for j in 1..=2 {
                    let closed = order_stat_unchecked(&d, j, m, z);
                    let dens = order_stat_by_density(&d, j, m, z);
                    assert!((closed - dens).abs() < 1e-9, "{:?} j={j} m={m}", d.spec());
                }
            }
        }
    }

    #[test]
    fn order_stat_monte_carlo() {
        // uniform order statistics of the truncated law: E = lo + (z−lo)(m+1−j)/(m+1)
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let g = order_stat_expectation(&u, 3, 5, 0.6).unwrap();
        assert!((g - 0.6 * 3.0 / 6.0).abs() < 1e-10);

        let d = Distribution::power(1.5).unwrap();
        let (j, m, z) = (3usize, 5usize, 0.8);
        let fz = d.cdf(z);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials = 200_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        let mut draws = vec![0.0; m];
        for _ in 0..trials {
            for x in draws.iter_mut() {
                *x = d.quantile(rng.gen::<f64>() * fz);
            }
            draws.sort_by(|a, b| b.total_cmp(a));
            sum += draws[j - 1];
            sq += draws[j - 1] * draws[j - 1];
        }
        let mean = sum / trials as f64;
        let se = ((sq / trials as f64 - mean * mean) / trials as f64).sqrt();
        let g = order_stat_expectation(&d, j, m, z).unwrap();
        assert!((g - mean).abs() < 3.0 * se, "{g} vs {mean} ± {se}");
    }

    #[test]
    fn static_winner_take_all_is_highest_wins() {
        for d in families() {
            for n in [2usize, 3, 4] {
                let mut wta = vec![0.0; n];
                wta[0] = 1.0;
                for v in d.quantile_grid(25) {
                    let s = static_contest_bid(&d, n, &wta, v).unwrap();
                    let h = allpay_bid_highest_wins(&d, n, d.support_lo(), v).unwrap();
                    assert!((s - h).abs() < 1e-6, "{:?} n={n} v={v}: {s} vs {h}", d.spec());
                }
            }
        }
    }

    #[test]
    fn static_bids_match_payment_identity() {
        let d = Distribution::uniform(0.0, 1.0).unwrap();
        let prizes = [2.0 / 3.0, 1.0 / 3.0];
        let a = InterimAllocation::static_prizes(&d, 2, &prizes).unwrap();
        for v in d.quantile_grid(20) {
            let s = static_contest_bid(&d, 2, &prizes, v).unwrap();
            assert!((s - v * v / 6.0).abs() < 1e-12);
            assert!((s - bid_from_allocation(&a, v).unwrap()).abs() < 1e-10);
        }
        for d in families() {
            for prizes in [vec![0.5, 0.3, 0.2], vec![0.6, 0.4], vec![0.7, 0.2, 0.1, 0.0]] {
                let n = prizes.len().max(3);
                let a = InterimAllocation::static_prizes(&d, n, &prizes).unwrap();
                for v in d.quantile_grid(15) {
                    let s = static_contest_bid(&d, n, &prizes, v).unwrap();
                    let p = bid_from_allocation(&a, v).unwrap();
                    assert!((s - p).abs() < 1e-8, "{:?} {prizes:?} v={v}: {s} vs {p}", d.spec());
                }
            }
        }
    }

    #[test]
    fn uniform_prizes_give_zero_bids() {
        for d in families() {
            for n in [2usize, 4] {
                let prizes = vec![1.0 / n as f64; n];
                let a = InterimAllocation::static_prizes(&d, n, &prizes).unwrap();
                for v in d.quantile_grid(10) {
                    assert!(static_contest_bid(&d, n, &prizes, v).unwrap().abs() < 1e-12);
                    assert!(bid_from_allocation(&a, v).unwrap().abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn prize_validation() {
        let d = Distribution::uniform(0.0, 1.0).unwrap();
        assert!(matches!(static_contest_bid(&d, 2, &[0.5, 0.4], 0.5), Err(Error::PrizeSum { .. })));
        assert!(static_contest_bid(&d, 2, &[1.2, -0.2], 0.5).is_err());
        assert!(static_contest_bid(&d, 2, &[0.5, 0.25, 0.25], 0.5).is_err());
        assert_eq!(normalize_prizes(4, &[1.0]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        // increasing prizes are evaluated, only warned about
        assert!(static_contest_bid(&d, 2, &[0.4, 0.6], 0.5).is_ok());
    }

    #[test]
    fn closed_form_examples() {
        let e = Distribution::exponential(1.0).unwrap();
        let r = crate::virtual_values::mp_reserve_value(&e, 2).unwrap();
        let b = allpay_bid_highest_wins(&e, 2, r, r).unwrap();
        assert!((b - 0.85).abs() < 0.005, "{b}");
        assert_eq!(allpay_bid_highest_wins(&e, 2, r, 0.5 * r).unwrap(), 0.0);
    }
}
