//! Two-agent contest favoring agent 1.
//!
//! Agent 1 is served outright once its value exceeds the favored threshold
//! `t`; below it the higher value wins subject to the reserve `r`, with ties
//! going to agent 2. The interim allocations are
//!
//! - agent 1: `0` below `r`, `F(v)` on `[r, t]`, `1` above `t`;
//! - agent 2: `0` below `r`, `F(min(v, t))` above.
//!
//! Both bids follow from the payment identity. Agent 1's bid jumps at `t`
//! from `t·F(t) − ∫_r^t F` to `t − ∫_r^t F`, and agent 2's bid is capped at the
//! lower of the two; bids of agent 1 between them are never used.

use serde::Serialize;

use super::{design_optimal_contest, expected_max_payment, ContestSpec};
use crate::distributions::Distribution;
use crate::equilibrium::{bid_left_limit, bid_unchecked, BidFunction, InterimAllocation};
use crate::error::{Error, Result};
use crate::numeric::{integrate_pieces, DEFAULT_TOL};

/// Per-axis node count of the tensor midpoint rule in quantile space.
pub const JOINT_NODES: usize = 2048;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymmetricReport {
    pub reserve_value: f64,
    pub reserve_bid: f64,
    pub favored_threshold: f64,
    /// Agent 1's bid just below the threshold, which is also agent 2's top bid.
    pub plateau_bid: f64,
    /// Agent 1's constant bid above the threshold.
    pub favored_bid: f64,
    /// Expected maximum payment of the symmetric optimal two-agent contest.
    pub symmetric_mp: f64,
    pub mp_exact: f64,
    pub rev_exact: f64,
    pub utilization_ratio: f64,
}

/// Interim allocations of agent 1 (favored) and agent 2.
pub fn asymmetric_allocations(d: &Distribution, r: f64, t: f64) -> Result<[InterimAllocation; 2]> {
    if !(r <= t) || !d.contains(r) || !d.contains(t) {
        return Err(Error::InvalidParameter(format!("need reserve {r} ≤ threshold {t} inside the support")));
    }
    let (d1, d2) = (d.clone(), d.clone());
    let favored = InterimAllocation::from_fn(d, 2, vec![r, t], move |v| {
        if v < r {
            0.0
        } else if v < t {
            d1.cdf(v)
        } else {
            1.0
        }
    })?;
    let other = InterimAllocation::from_fn(d, 2, vec![r, t], move |v| if v < r { 0.0 } else { d2.cdf(v.min(t)) })?;
    Ok([favored, other])
}

/// Tabulated equilibrium bids of agent 1 and agent 2.
pub fn asymmetric_bids(d: &Distribution, r: f64, t: f64) -> Result<[BidFunction; 2]> {
    let [a1, a2] = asymmetric_allocations(d, r, t)?;
    Ok([BidFunction::from_allocation(d, &a1)?, BidFunction::from_allocation(d, &a2)?])
}

pub fn evaluate_asymmetric(d: &Distribution, r: f64, t: f64) -> Result<AsymmetricReport> {
    let [a1, a2] = asymmetric_allocations(d, r, t)?;

    // tensor midpoint rule; sorting agent 2's bids turns each row into a prefix sum
    let nodes: Vec<f64> = (0..JOINT_NODES).map(|k| d.quantile((k as f64 + 0.5) / JOINT_NODES as f64)).collect();
    let b1: Vec<f64> = nodes.iter().map(|&v| bid_unchecked(&a1, v)).collect();
    let mut b2: Vec<f64> = nodes.iter().map(|&v| bid_unchecked(&a2, v)).collect();
    b2.sort_by(f64::total_cmp);
    let mut suffix = vec![0.0; JOINT_NODES + 1];
    for k in (0..JOINT_NODES).rev() {
        suffix[k] = suffix[k + 1] + b2[k];
    }
    let total: f64 = b1
        .iter()
        .map(|&x| {
            let below = b2.partition_point(|&y| y <= x);
            below as f64 * x + suffix[below]
        })
        .sum();
    let mp_exact = total / (JOINT_NODES * JOINT_NODES) as f64;

    let mut breaks = d.breakpoints();
    breaks.extend([r, t]);
    let expected_bid = |a: &InterimAllocation| {
        integrate_pieces(|v| bid_unchecked(a, v) * d.pdf(v), r, d.effective_hi(), &breaks, DEFAULT_TOL)
    };
    let rev_exact = expected_bid(&a1) + expected_bid(&a2);

    let symmetric = design_optimal_contest(d, 2)?;
    let symmetric_mp = expected_max_payment(d, 2, &symmetric)?;

    Ok(AsymmetricReport {
        reserve_value: r,
        reserve_bid: bid_unchecked(&a1, r),
        favored_threshold: t,
        plateau_bid: bid_left_limit(&a1, t),
        favored_bid: bid_unchecked(&a1, t),
        symmetric_mp,
        mp_exact,
        rev_exact,
        utilization_ratio: rev_exact / mp_exact,
    })
}

/// The worked instance: `F(x) = x^1.5` on `[0, 1]`, reserve `0.25^(1/3)`,
/// agent 1 served outright above `0.75`.
pub fn example_instance() -> (Distribution, ContestSpec) {
    let d = Distribution::power(1.5).expect("valid exponent");
    let c = ContestSpec::AsymmetricTwoAgent { reserve_value: 0.25f64.powf(1.0 / 3.0), favored_threshold: 0.75 };
    (d, c)
}

pub fn evaluate_asymmetric_example() -> Result<AsymmetricReport> {
    let (d, c) = example_instance();
    match c {
        ContestSpec::AsymmetricTwoAgent { reserve_value, favored_threshold } => {
            evaluate_asymmetric(&d, reserve_value, favored_threshold)
        }
        _ => unreachable!("example instance is asymmetric"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_values() {
        let rep = evaluate_asymmetric_example().unwrap();
        assert!((rep.symmetric_mp - 0.396).abs() < 0.002, "{}", rep.symmetric_mp);
        assert!((rep.mp_exact - 0.397).abs() < 0.002, "{}", rep.mp_exact);
        assert!(rep.mp_exact > rep.symmetric_mp);
        assert!((rep.plateau_bid - 0.418).abs() < 0.005, "{}", rep.plateau_bid);
        assert!((rep.favored_bid - 0.681).abs() < 0.005, "{}", rep.favored_bid);
        assert!((rep.reserve_value - 0.63).abs() < 0.005);
        assert!((rep.reserve_bid - 0.315).abs() < 0.005);
        assert!(rep.mp_exact <= rep.rev_exact);
    }

    #[test]
    fn bid_shapes() {
        let (d, _) = example_instance();
        let r = 0.25f64.powf(1.0 / 3.0);
        let [b1, b2] = asymmetric_bids(&d, r, 0.75).unwrap();
        let plateau = b1.eval(0.75 - 1e-9);
        for v in [0.76, 0.8, 0.9, 0.99] {
            assert!((b1.eval(v) - b1.eval(0.75)).abs() < 1e-12);
            assert!((b2.eval(v) - plateau).abs() < 1e-6);
        }
        assert_eq!(b1.eval(0.5), 0.0);
        assert_eq!(b2.eval(0.5), 0.0);
    }

    #[test]
    fn joint_mp_against_nested_quadrature() {
        // independent oracle: E[max] = ∫ P(max > y) dy with closed-form bid laws
        let (d, _) = example_instance();
        let (r, t) = (0.25f64.powf(1.0 / 3.0), 0.75);
        let f = |v: f64| v.powf(1.5);
        let int_f = |a: f64, b: f64| (b.powf(2.5) - a.powf(2.5)) / 2.5;
        let b_low = |v: f64| v * f(v) - int_f(r, v);
        let plateau = b_low(t);
        let top = t - int_f(r, t);
        // P(b1 ≤ y) and P(b2 ≤ y) for 0 ≤ y, via the inverse of b_low on [r, t]
        let inv = |y: f64| crate::numeric::bisect(|v| b_low(v) - y, r, t);
        let reserve_bid = b_low(r);
        let cdf1 = |y: f64| {
            if y < reserve_bid {
                f(r)
            } else if y < plateau {
                f(inv(y))
            } else if y < top {
                f(t)
            } else {
                1.0
            }
        };
        let cdf2 = |y: f64| {
            if y < reserve_bid {
                f(r)
            } else if y < plateau {
                f(inv(y))
            } else {
                1.0
            }
        };
        let oracle = integrate_pieces(|y| 1.0 - cdf1(y) * cdf2(y), 0.0, top, &[reserve_bid, plateau], 1e-9);
        let rep = evaluate_asymmetric(&d, r, t).unwrap();
        assert!((rep.mp_exact - oracle).abs() < 2e-4, "{} vs {oracle}", rep.mp_exact);
    }
}
