//! Ironing of the max-payment virtual value in quantile space.
//!
//! The antiderivative `R(q) = ∫₀^q ψₙ(F⁻¹(t)) dt` is sampled on an equispaced
//! quantile grid; the slope of its lower convex envelope is the ironed virtual
//! value `ψ̄ₙ`. Where the envelope lies strictly below `R` the ironed value is
//! constant and agents with those values are pooled.

use serde::Serialize;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::numeric::bisect_threshold;
use crate::virtual_values::{check_n, psi_unchecked};

pub const DEFAULT_GRID: usize = 8192;
pub const MIN_GRID: usize = 256;

/// Quantile endpoints are clipped to `[Q_EDGE, 1 − Q_EDGE]`.
pub const Q_EDGE: f64 = 1e-10;

/// Relative gap `R − envelope` above which a grid point counts as ironed.
pub const IRONED_GAP: f64 = 1e-9;

/// Sampled antiderivative of `ψₙ` in quantile space.
#[derive(Debug, Clone)]
pub struct QuantileCurve {
    pub n: usize,
    pub q: Vec<f64>,
    /// `F⁻¹(q)` at each grid point.
    pub value: Vec<f64>,
    /// `ψₙ(F⁻¹(q))` at each grid point.
    pub psi: Vec<f64>,
    /// Trapezoidal cumulative integral of `psi`, with `r[0] = 0`.
    pub r: Vec<f64>,
}

/// A maximal value range on which `ψ̄ₙ` is constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IronedInterval {
    pub q_lo: f64,
    pub q_hi: f64,
    pub lo: f64,
    pub hi: f64,
    /// Constant ironed virtual value over the interval (envelope chord slope).
    pub psi_bar: f64,
}

impl IronedInterval {
    pub fn contains_q(&self, q: f64) -> bool {
        q >= self.q_lo && q <= self.q_hi
    }
}

#[derive(Debug, Clone)]
pub struct IronedCurve {
    pub curve: QuantileCurve,
    pub envelope: Vec<f64>,
    pub psi_bar: Vec<f64>,
    pub ironed_intervals: Vec<IronedInterval>,
}

pub fn antiderivative_in_quantile(d: &Distribution, n: usize, grid_size: usize) -> Result<QuantileCurve> {
    check_n(n)?;
    if grid_size < MIN_GRID {
        return Err(Error::InvalidParameter(format!("ironing grid must be at least {MIN_GRID}, got {grid_size}")));
    }
    let q: Vec<f64> = (0..=grid_size)
        .map(|k| (k as f64 / grid_size as f64).clamp(Q_EDGE, 1.0 - Q_EDGE))
        .collect();
    let value: Vec<f64> = q.iter().map(|&t| d.quantile(t)).collect();
    let psi: Vec<f64> = value.iter().map(|&v| psi_unchecked(d, n, v)).collect();
    let mut r = Vec::with_capacity(q.len());
    r.push(0.0);
    for k in 1..q.len() {
        let step = 0.5 * (q[k] - q[k - 1]) * (psi[k - 1] + psi[k]);
        r.push(r[k - 1] + step);
    }
    Ok(QuantileCurve { n, q, value, psi, r })
}

/// Indices of the lower convex hull of `(xs, ys)` (monotone chain, xs sorted).
pub fn lower_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for k in 0..xs.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (xs[b] - xs[a]) * (ys[k] - ys[a]) - (ys[b] - ys[a]) * (xs[k] - xs[a]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

pub fn convex_envelope(curve: QuantileCurve) -> IronedCurve {
    let len = curve.q.len();
    let hull = lower_hull(&curve.q, &curve.r);

    let mut envelope = vec![0.0; len];
    let mut seg_slope = vec![0.0; len];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (curve.r[b] - curve.r[a]) / (curve.q[b] - curve.q[a]);
        for k in a..=b {
            envelope[k] = curve.r[a] + slope * (curve.q[k] - curve.q[a]);
            if k < b {
                seg_slope[k] = slope;
            }
        }
    }
    envelope[len - 1] = curve.r[len - 1];

    let scale = curve.r.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let ironed: Vec<bool> = (0..len).map(|k| curve.r[k] - envelope[k] > IRONED_GAP * scale).collect();

    let mut intervals = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; len];
    let mut k = 0;
    while k < len {
        if !ironed[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < len && ironed[k] {
            k += 1;
        }
        let end = k - 1;
        // the grid ends are hull vertices, so a run always has touching neighbours
        let slope = seg_slope[start];
        let q_lo = curve.crossing(start.saturating_sub(2), start, slope).unwrap_or(curve.q[start - 1]);
        let q_hi = curve.crossing(end, (end + 2).min(len - 1), slope).unwrap_or(curve.q[end + 1]);
        let idx = intervals.len();
        for o in owner.iter_mut().take(end + 1).skip(start) {
            *o = Some(idx);
        }
        intervals.push(IronedInterval {
            q_lo,
            q_hi,
            lo: curve.value_at(q_lo),
            hi: curve.value_at(q_hi),
            psi_bar: slope,
        });
    }
    for (k, o) in owner.iter_mut().enumerate() {
        if o.is_none() {
            *o = intervals.iter().position(|iv| iv.contains_q(curve.q[k]));
        }
    }

    let psi_bar: Vec<f64> = (0..len)
        .map(|k| match owner[k] {
            Some(i) => intervals[i].psi_bar,
            None => curve.psi[k],
        })
        .collect();
    let (psi_bar, intervals) = pool_violators(&curve, psi_bar, &owner, intervals);

    IronedCurve { curve, envelope, psi_bar, ironed_intervals: intervals }
}

/// Pools grid points where `ψ̄` still decreases after the hull pass.
///
/// A density jump can make `ψ` drop by less than it rises over one cell. The
/// sampled `R` then stays convex although the exact one has a concave kink
/// inside the cell, so the hull misses a pool a couple of cells wide. Pool
/// adjacent violators on the node values recovers it.
fn pool_violators(
    curve: &QuantileCurve,
    psi_bar: Vec<f64>,
    owner: &[Option<usize>],
    intervals: Vec<IronedInterval>,
) -> (Vec<f64>, Vec<IronedInterval>) {
    let tol = |x: f64| 1e-9 * x.abs().max(1.0);
    // (first node, last node, sum of values); each hull interval starts as one block
    let mut seeds: Vec<(usize, usize, f64)> = Vec::with_capacity(psi_bar.len());
    for (k, &p) in psi_bar.iter().enumerate() {
        match seeds.last_mut() {
            Some(b) if owner[k].is_some() && owner[k] == owner[b.1] => {
                b.1 = k;
                b.2 += p;
            }
            _ => seeds.push((k, k, p)),
        }
    }
    let seeded = seeds.len();
    let mut blocks: Vec<(usize, usize, f64)> = Vec::with_capacity(seeded);
    for seed in seeds {
        blocks.push(seed);
        while blocks.len() >= 2 {
            let (s1, e1, t1) = blocks[blocks.len() - 1];
            let (s0, e0, t0) = blocks[blocks.len() - 2];
            let (m0, m1) = (t0 / (e0 - s0 + 1) as f64, t1 / (e1 - s1 + 1) as f64);
            if m1 >= m0 - tol(m0) {
                break;
            }
            blocks.pop();
            *blocks.last_mut().unwrap() = (s0, e1, t0 + t1);
        }
    }
    if blocks.len() == seeded {
        return (psi_bar, intervals);
    }

    let len = psi_bar.len();
    let mut out_bar = psi_bar;
    let mut out = Vec::with_capacity(intervals.len());
    for (start, end, total) in blocks {
        let level = total / (end - start + 1) as f64;
        let owners: Vec<Option<usize>> = owner[start..=end].to_vec();
        let first = owners[0];
        let whole = first.is_some()
            && owners.iter().all(|&o| o == first)
            && owner.iter().filter(|&&o| o == first).count() == end - start + 1;
        if whole {
            out.push(intervals[first.unwrap()]);
            continue;
        }
        if start == end && first.is_none() {
            continue;
        }
        out_bar[start..=end].iter_mut().for_each(|p| *p = level);
        let q_lo = if start == 0 {
            curve.q[0]
        } else {
            curve.crossing(start.saturating_sub(2), start, level).unwrap_or(0.5 * (curve.q[start - 1] + curve.q[start]))
        };
        let q_hi = if end == len - 1 {
            curve.q[len - 1]
        } else {
            curve.crossing(end, (end + 2).min(len - 1), level).unwrap_or(0.5 * (curve.q[end] + curve.q[end + 1]))
        };
        out.push(IronedInterval { q_lo, q_hi, lo: curve.value_at(q_lo), hi: curve.value_at(q_hi), psi_bar: level });
    }
    (out_bar, out)
}

impl QuantileCurve {
    /// Upward crossing of the sampled `ψ` through `level` between two grid
    /// indices, located by linear interpolation within the crossing cell.
    fn crossing(&self, from: usize, to: usize, level: f64) -> Option<f64> {
        (from..to).find_map(|i| {
            let (a, b) = (self.psi[i] - level, self.psi[i + 1] - level);
            (a < 0.0 && b >= 0.0).then(|| self.q[i] + (self.q[i + 1] - self.q[i]) * (-a / (b - a)))
        })
    }

    fn value_at(&self, q: f64) -> f64 {
        let k = self.q.partition_point(|&t| t <= q).clamp(1, self.q.len() - 1);
        let (q0, q1) = (self.q[k - 1], self.q[k]);
        let t = if q1 > q0 { (q - q0) / (q1 - q0) } else { 0.0 };
        self.value[k - 1] + t * (self.value[k] - self.value[k - 1])
    }
}

impl IronedCurve {
    pub fn n(&self) -> usize {
        self.curve.n
    }

    /// Ironed virtual value at quantile `q`, evaluating `ψₙ` exactly outside
    /// the ironed intervals.
    pub fn psi_bar_at_quantile(&self, d: &Distribution, q: f64) -> f64 {
        match self.ironed_intervals.iter().find(|iv| iv.contains_q(q)) {
            Some(iv) => iv.psi_bar,
            None => psi_unchecked(d, self.curve.n, d.quantile(q)),
        }
    }

    /// Interpolated `ψ̄ₙ` on the grid, constant inside ironed intervals.
    pub fn psi_bar_interpolated(&self, q: f64) -> f64 {
        if let Some(iv) = self.ironed_intervals.iter().find(|iv| iv.contains_q(q)) {
            return iv.psi_bar;
        }
        let qs = &self.curve.q;
        let k = qs.partition_point(|&t| t <= q).clamp(1, qs.len() - 1);
        let t = ((q - qs[k - 1]) / (qs[k] - qs[k - 1])).clamp(0.0, 1.0);
        self.psi_bar[k - 1] + t * (self.psi_bar[k] - self.psi_bar[k - 1])
    }

    /// Smallest value at which `ψ̄ₙ` becomes nonnegative.
    pub fn reserve_value(&self, d: &Distribution) -> Result<f64> {
        let qs = &self.curve.q;
        let k = self
            .psi_bar
            .iter()
            .position(|&p| p >= 0.0)
            .ok_or(Error::AllNegativeVirtualValue)?;
        if k == 0 {
            return Ok(d.support_lo());
        }
        let q = bisect_threshold(|q| self.psi_bar_at_quantile(d, q), qs[k - 1], qs[k]);
        Ok(d.quantile(q))
    }
}

pub fn iron(d: &Distribution, n: usize, grid_size: usize) -> Result<IronedCurve> {
    Ok(convex_envelope(antiderivative_in_quantile(d, n, grid_size)?))
}

/// `ψ̄ₙ(v)`, read off the ironed curve at `q = F(v)`.
pub fn ironed_mp_virtual_value(ic: &IronedCurve, d: &Distribution, n: usize, v: f64) -> Result<f64> {
    if n != ic.n() {
        return Err(Error::InvalidParameter(format!("curve was ironed for n={}, asked for n={n}", ic.n())));
    }
    d.check_interior(v)?;
    Ok(ic.psi_bar_interpolated(d.cdf(v)))
}
