//! Revenue and maximum-payment virtual values, hazard rates, reserves, and
//! regularity diagnostics on quantile-equispaced grids.

use serde::Serialize;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::numeric::bisect;

/// Slack for adjacent-difference monotonicity verdicts.
pub const MONOTONE_SLACK: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 4096;

/// Smallest grid accepted by [`analyze`].
pub const MIN_GRID: usize = 64;

/// `φ(v) = v − (1 − F(v)) / f(v)`.
pub fn revenue_virtual_value(d: &Distribution, v: f64) -> Result<f64> {
    d.check_interior(v)?;
    Ok(phi_unchecked(d, v))
}

/// `ψₙ(v) = v·F(v)^(n−1) − (1 − F(v)ⁿ) / (n·f(v))`.
pub fn mp_virtual_value(d: &Distribution, n: usize, v: f64) -> Result<f64> {
    check_n(n)?;
    d.check_interior(v)?;
    Ok(psi_unchecked(d, n, v))
}

/// `h(v) = f(v) / (1 − F(v))`.
pub fn hazard_rate(d: &Distribution, v: f64) -> Result<f64> {
    d.check_interior(v)?;
    let s = d.sf(v);
    if s <= 0.0 {
        return Err(Error::SaturatedCdf { value: v });
    }
    Ok(d.pdf(v) / s)
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("contestant count must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn phi_unchecked(d: &Distribution, v: f64) -> f64 {
    v - d.sf(v) / d.pdf(v)
}

pub(crate) fn psi_unchecked(d: &Distribution, n: usize, v: f64) -> f64 {
    let f = d.pdf(v);
    v * d.cdf(v).powi(n as i32 - 1) - d.one_minus_cdf_pow(v, n) / (n as f64 * f)
}

/// `ψₙ(v)·f(v)`, which stays finite where the density vanishes.
pub(crate) fn psi_times_density(d: &Distribution, n: usize, v: f64) -> f64 {
    let lead = d.cdf(v).powi(n as i32 - 1);
    let lead = if lead == 0.0 { 0.0 } else { v * lead * d.pdf(v) };
    lead - d.one_minus_cdf_pow(v, n) / n as f64
}

/// `φ(v)·f(v)`.
pub(crate) fn phi_times_density(d: &Distribution, v: f64) -> f64 {
    v * d.pdf(v) - d.sf(v)
}

/// Largest root of `g` located from the highest sign-changing grid cell.
fn largest_root<G: Fn(f64) -> f64>(grid: &[f64], g: G, what: &'static str) -> Result<f64> {
    let vals: Vec<f64> = grid.iter().map(|&v| g(v)).collect();
    let cell = (0..grid.len() - 1)
        .rev()
        .find(|&i| (vals[i] < 0.0) != (vals[i + 1] < 0.0))
        .ok_or(Error::NoSignChange { what })?;
    Ok(bisect(&g, grid[cell], grid[cell + 1]))
}

/// Monopoly reserve `φ⁻¹(0)`; the largest crossing when there are several.
pub fn monopoly_reserve_value(d: &Distribution) -> Result<f64> {
    let grid = d.quantile_grid(DEFAULT_GRID);
    largest_root(&grid, |v| phi_unchecked(d, v), "revenue virtual value")
}

/// Reserve value `ψₙ⁻¹(0)` for the max-payment objective.
///
/// When `ψₙ` crosses zero several times the largest root is returned, so that
/// `ψₙ ≥ 0` on the whole range above it.
pub fn mp_reserve_value(d: &Distribution, n: usize) -> Result<f64> {
    check_n(n)?;
    let grid = d.quantile_grid(DEFAULT_GRID);
    largest_root(&grid, |v| psi_unchecked(d, n, v), "max-payment virtual value")
}

/// Sampled virtual-value curves with regularity verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct VirtualValueReport {
    pub n: usize,
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub hazard: Vec<f64>,
    pub regular_for_revenue: bool,
    pub n_regular_for_mp: bool,
    pub mhr: bool,
    /// Smallest grid value with `ψₙ ≥ 0`.
    pub psi_nonneg_from: Option<f64>,
}

pub(crate) fn is_nondecreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK)
}

impl VirtualValueReport {
    /// Smallest grid value above which `ψₙ` is nondecreasing.
    pub fn psi_nondecreasing_from(&self) -> f64 {
        let mut start = self.psi.len() - 1;
        while start > 0 && self.psi[start] >= self.psi[start - 1] - MONOTONE_SLACK {
            start -= 1;
        }
        self.grid[start]
    }

    /// `ψₙ` is nonnegative on an upper range of the grid and nondecreasing there.
    ///
    /// This is the condition under which a plain reserve implements the
    /// pointwise virtual-value maximizer.
    pub fn psi_monotone_where_nonnegative(&self) -> bool {
        let Some(from) = self.psi_nonneg_from else {
            return false;
        };
        let start = self.grid.partition_point(|&v| v < from);
        let upper = &self.psi[start..];
        upper.iter().all(|&p| p >= -MONOTONE_SLACK) && is_nondecreasing(upper)
    }
}

/// Evaluates φ, ψₙ and the hazard rate on `grid_size` quantile-equispaced points.
pub fn analyze(d: &Distribution, n: usize, grid_size: usize) -> Result<VirtualValueReport> {
    check_n(n)?;
    if grid_size < MIN_GRID {
        return Err(Error::InvalidParameter(format!("grid size must be at least {MIN_GRID}, got {grid_size}")));
    }
    let grid = d.quantile_grid(grid_size);
    let mut phi = Vec::with_capacity(grid_size);
    let mut psi = Vec::with_capacity(grid_size);
    let mut hazard = Vec::with_capacity(grid_size);
    for &v in &grid {
        phi.push(revenue_virtual_value(d, v)?);
        psi.push(mp_virtual_value(d, n, v)?);
        hazard.push(hazard_rate(d, v)?);
    }
    let psi_nonneg_from = grid.iter().zip(&psi).find(|(_, &p)| p >= 0.0).map(|(&v, _)| v);
    Ok(VirtualValueReport {
        n,
        regular_for_revenue: is_nondecreasing(&phi),
        n_regular_for_mp: is_nondecreasing(&psi),
        mhr: is_nondecreasing(&hazard),
        psi_nonneg_from,
        grid,
        phi,
        psi,
        hazard,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixture() -> Distribution {
        Distribution::mixture(&[(1.0, 2.0, 0.75), (2.0, 3.0, 0.25)]).unwrap()
    }

    #[test]
    fn revenue_virtual_value_examples() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        assert!((revenue_virtual_value(&u, 0.75).unwrap() - 0.5).abs() < 1e-15);
        let e = Distribution::exponential(1.0).unwrap();
        assert!((revenue_virtual_value(&e, 3.0).unwrap() - 2.0).abs() < 1e-14);
        let p = Distribution::power(1.5).unwrap();
        let v = 0.63f64;
        let direct = v - (1.0 - v.powf(1.5)) / (1.5 * v.powf(0.5));
        assert!((revenue_virtual_value(&p, v).unwrap() - direct).abs() < 1e-14);
        assert!(matches!(revenue_virtual_value(&u, 1.5), Err(Error::OutOfSupport { .. })));
    }

    #[test]
    fn mp_virtual_value_closed_forms() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        for n in [1usize, 2, 3, 7] {
            for k in 1..20 {
                let z = k as f64 / 20.0;
                let nf = n as f64;
                let expect = z.powi(n as i32) * (1.0 + 1.0 / nf) - 1.0 / nf;
                assert!((mp_virtual_value(&u, n, z).unwrap() - expect).abs() < 1e-14);
            }
        }
        let e = Distribution::exponential(1.0).unwrap();
        for k in 1..=100 {
            let z = k as f64 * 0.2;
            let expect = (z - 1.0) + (-z).exp() * (0.5 - z);
            assert!((mp_virtual_value(&e, 2, z).unwrap() - expect).abs() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn n_one_collapses_to_phi() {
        for d in [Distribution::power(1.5).unwrap(), mixture(), Distribution::exponential(2.0).unwrap()] {
            for v in d.quantile_grid(200) {
                let a = mp_virtual_value(&d, 1, v).unwrap();
                let b = revenue_virtual_value(&d, v).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn hazard_examples() {
        let e = Distribution::exponential(3.0).unwrap();
        assert!((hazard_rate(&e, 0.7).unwrap() - 3.0).abs() < 1e-12);
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        assert!((hazard_rate(&u, 0.5).unwrap() - 2.0).abs() < 1e-14);
        let p = Distribution::power(1.5).unwrap();
        let direct = 1.5 * 0.5f64.sqrt() / (1.0 - 0.5f64.powf(1.5));
        assert!((hazard_rate(&p, 0.5).unwrap() - direct).abs() < 1e-13);
        assert!(hazard_rate(&u, 1.0).is_err());
    }

    #[test]
    fn monopoly_reserves() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        assert!((monopoly_reserve_value(&u).unwrap() - 0.5).abs() < 1e-12);
        let e = Distribution::exponential(1.0).unwrap();
        assert!((monopoly_reserve_value(&e).unwrap() - 1.0).abs() < 1e-12);
        let p = Distribution::power(1.5).unwrap();
        let r = monopoly_reserve_value(&p).unwrap();
        assert!(phi_unchecked(&p, r).abs() <= 1e-9);
        // dense sign scan oracle
        let scan = (1..100_000)
            .map(|k| k as f64 / 100_000.0)
            .find(|&v| v - (1.0 - v.powf(1.5)) / (1.5 * v.sqrt()) >= 0.0)
            .unwrap();
        assert!((r - scan).abs() < 1e-5);
        // positive everywhere: no sign change
        let shifted = Distribution::uniform(1.0, 2.0).unwrap();
        assert!(matches!(monopoly_reserve_value(&shifted), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn mp_reserves() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        for n in [2usize, 3, 5, 10] {
            let r = mp_reserve_value(&u, n).unwrap();
            assert!((r - (n as f64 + 1.0).powf(-1.0 / n as f64)).abs() < 1e-9);
            assert!(psi_unchecked(&u, n, r).abs() <= 1e-9);
        }
        let e = Distribution::exponential(1.0).unwrap();
        let r = mp_reserve_value(&e, 2).unwrap();
        assert!((r - 1.21).abs() < 0.005, "{r}");
        let p = Distribution::power(1.5).unwrap();
        let r = mp_reserve_value(&p, 2).unwrap();
        assert!((r - 0.25f64.powf(1.0 / 3.0)).abs() < 1e-9);
        assert!((r - 0.63).abs() < 0.005);
    }

    #[test]
    fn analyze_verdicts() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let rep = analyze(&u, 5, DEFAULT_GRID).unwrap();
        assert!(rep.regular_for_revenue && rep.n_regular_for_mp && rep.mhr);

        let e = Distribution::exponential(1.0).unwrap();
        let rep = analyze(&e, 2, DEFAULT_GRID).unwrap();
        assert!(rep.mhr);
        assert!(!rep.n_regular_for_mp);
        assert!(rep.psi_monotone_where_nonnegative());
        let from = rep.psi_nondecreasing_from();
        assert!(from <= 0.24 && from > 0.23, "{from}");

        let rep = analyze(&mixture(), 2, DEFAULT_GRID).unwrap();
        assert!(!rep.n_regular_for_mp);
        assert!(!rep.psi_monotone_where_nonnegative());
        assert!(analyze(&u, 2, 10).is_err());
    }

    #[test]
    fn mhr_implies_monotone_nonnegative_part() {
        for d in [
            Distribution::uniform(0.0, 1.0).unwrap(),
            Distribution::exponential(1.0).unwrap(),
            Distribution::power(1.5).unwrap(),
        ] {
            for n in [2usize, 5, 10] {
                let rep = analyze(&d, n, DEFAULT_GRID).unwrap();
                assert!(rep.mhr);
                let nonneg: Vec<f64> = rep.psi.iter().copied().filter(|&p| p >= 0.0).collect();
                assert!(is_nondecreasing(&nonneg), "{:?} n={n}", d.spec());
            }
        }
    }

    #[test]
    fn psi_approaches_phi_at_the_top() {
        for d in [
            Distribution::uniform(0.0, 1.0).unwrap(),
            Distribution::exponential(1.0).unwrap(),
            Distribution::power(1.5).unwrap(),
        ] {
            let v = d.quantile(0.999);
            let s = d.sf(v);
            for n in [2usize, 5, 10] {
                let gap = (psi_unchecked(&d, n, v) - phi_unchecked(&d, v)).abs();
                // first-order expansion in 1 − F
                let band = 2.0 * (n as f64 - 1.0) * s * (v.abs() + s / d.pdf(v));
                assert!(gap <= band, "{:?} n={n}: {gap} > {band}", d.spec());
            }
        }
    }
}
