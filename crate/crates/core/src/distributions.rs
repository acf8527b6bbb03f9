//! Continuous skill distributions.
//!
//! A [`Distribution`] is built from a serializable [`DistributionSpec`] and
//! exposes the cdf, survival function, density, quantile and an
//! inverse-transform sampler. Values are immutable once built.

use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quantile at which unbounded supports are cut for quadrature and grids.
pub const TAIL_QUANTILE: f64 = 1.0 - 1e-10;

const WEIGHT_TOL: f64 = 1e-9;

/// One uniform piece of a [`DistributionSpec::Mixture`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureSegment {
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
}

/// Serializable constructor set, `{"kind": ..., "params": {...}}` on the wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum DistributionSpec {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    /// `F(x) = x^alpha` on `[0, 1]`.
    Power { alpha: f64 },
    Mixture { segments: Vec<MixtureSegment> },
    /// Sorted `[value, cdf]` pairs, linearly interpolated.
    Tabulated { points: Vec<[f64; 2]> },
}

impl DistributionSpec {
    pub fn build(&self) -> Result<Distribution> {
        Distribution::new(self.clone())
    }
}

#[derive(Debug, Clone)]
enum Family {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Power { alpha: f64 },
    /// Contiguous segments with cumulative weights `cum[i]` at each segment's lower end.
    Mixture { segs: Vec<MixtureSegment>, cum: Vec<f64> },
    Tabulated { v: Vec<f64>, q: Vec<f64> },
}

/// A validated continuous distribution with an interval support.
#[derive(Debug, Clone)]
pub struct Distribution {
    spec: DistributionSpec,
    family: Family,
    lo: f64,
    hi: f64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn finite(x: f64, name: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {x}")))
    }
}

impl Distribution {
    pub fn new(spec: DistributionSpec) -> Result<Self> {
        let (family, lo, hi) = match &spec {
            DistributionSpec::Uniform { a, b } => {
                finite(*a, "a")?;
                finite(*b, "b")?;
                if a >= b {
                    return Err(invalid(format!("uniform requires a < b, got a={a}, b={b}")));
                }
                (Family::Uniform { a: *a, b: *b }, *a, *b)
            }
            DistributionSpec::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return Err(invalid(format!("exponential requires rate > 0, got {rate}")));
                }
                (Family::Exponential { rate: *rate }, 0.0, f64::INFINITY)
            }
            DistributionSpec::Power { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(invalid(format!("power requires alpha > 0, got {alpha}")));
                }
                (Family::Power { alpha: *alpha }, 0.0, 1.0)
            }
            DistributionSpec::Mixture { segments } => {
                if segments.is_empty() {
                    return Err(invalid("mixture needs at least one segment"));
                }
                let mut cum = Vec::with_capacity(segments.len());
                let mut total = 0.0;
                for (i, s) in segments.iter().enumerate() {
                    finite(s.lo, "segment lo")?;
                    finite(s.hi, "segment hi")?;
                    if s.lo >= s.hi {
                        return Err(invalid(format!("mixture segment {i} requires lo < hi")));
                    }
                    if !(s.weight > 0.0) {
                        return Err(invalid(format!("mixture segment {i} weight must be positive")));
                    }
                    if i > 0 {
                        let prev = segments[i - 1].hi;
                        if s.lo < prev {
                            return Err(invalid(format!("mixture segments {} and {i} overlap or are unordered", i - 1)));
                        }
                        // a gap would put zero density inside the support
                        if s.lo - prev > 1e-12 * prev.abs().max(1.0) {
                            return Err(invalid(format!(
                                "mixture segments {} and {i} leave a gap; density must be positive on the support",
                                i - 1
                            )));
                        }
                    }
                    cum.push(total);
                    total += s.weight;
                }
                if (total - 1.0).abs() > WEIGHT_TOL {
                    return Err(invalid(format!("mixture weights sum to {total}, expected 1")));
                }
                let lo = segments[0].lo;
                let hi = segments[segments.len() - 1].hi;
                // rescale so that cdf(hi) is exactly 1
                let segs: Vec<MixtureSegment> = segments
                    .iter()
                    .map(|s| MixtureSegment { weight: s.weight / total, ..*s })
                    .collect();
                let cum = cum.into_iter().map(|c| c / total).collect();
                (Family::Mixture { segs, cum }, lo, hi)
            }
            DistributionSpec::Tabulated { points } => {
                if points.len() < 2 {
                    return Err(invalid("tabulated distribution needs at least two points"));
                }
                for (i, p) in points.iter().enumerate() {
                    finite(p[0], "tabulated value")?;
                    finite(p[1], "tabulated cdf")?;
                    if i > 0 {
                        let prev = points[i - 1];
                        if p[0] <= prev[0] {
                            return Err(invalid(format!("tabulated values must be strictly increasing at index {i}")));
                        }
                        if p[1] <= prev[1] {
                            return Err(invalid(format!("tabulated cdf must be strictly increasing at index {i}")));
                        }
                    }
                }
                let first = points[0][1];
                let last = points[points.len() - 1][1];
                if first != 0.0 || last != 1.0 {
                    return Err(invalid(format!("tabulated cdf must run from 0 to 1, got {first}..{last}")));
                }
                let v: Vec<f64> = points.iter().map(|p| p[0]).collect();
                let q: Vec<f64> = points.iter().map(|p| p[1]).collect();
                let (lo, hi) = (v[0], v[v.len() - 1]);
                (Family::Tabulated { v, q }, lo, hi)
            }
        };
        Ok(Self { spec, family, lo, hi })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(DistributionSpec::Uniform { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(DistributionSpec::Exponential { rate })
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(DistributionSpec::Power { alpha })
    }

    /// Mixture from `(lo, hi, weight)` triples.
    pub fn mixture(segments: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(DistributionSpec::Mixture {
            segments: segments
                .iter()
                .map(|&(lo, hi, weight)| MixtureSegment { lo, hi, weight })
                .collect(),
        })
    }

    pub fn tabulated(points: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(DistributionSpec::Tabulated { points })
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    pub fn support_lo(&self) -> f64 {
        self.lo
    }

    /// Upper end of the support; `+inf` for the exponential family.
    pub fn support_hi(&self) -> f64 {
        self.hi
    }

    /// Upper integration limit: the support end, or the tail quantile when unbounded.
    pub fn effective_hi(&self) -> f64 {
        if self.hi.is_finite() {
            self.hi
        } else {
            self.quantile(TAIL_QUANTILE)
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    /// Errors unless `v` is strictly inside the support.
    pub fn check_interior(&self, v: f64) -> Result<()> {
        if v > self.lo && v < self.hi {
            Ok(())
        } else {
            Err(self.out_of_support(v))
        }
    }

    pub fn check_support(&self, v: f64) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(self.out_of_support(v))
        }
    }

    pub(crate) fn out_of_support(&self, v: f64) -> Error {
        Error::OutOfSupport { value: v, lo: self.lo, hi: self.hi }
    }

    /// Points inside the support where the density is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::Mixture { segs, .. } => segs.iter().skip(1).map(|s| s.lo).collect(),
            Family::Tabulated { v, .. } => v[1..v.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn cdf(&self, v: f64) -> f64 {
        if v <= self.lo {
            return 0.0;
        }
        if v >= self.hi {
            return 1.0;
        }
        match &self.family {
            Family::Uniform { a, b } => (v - a) / (b - a),
            Family::Exponential { rate } => -(-rate * v).exp_m1(),
            Family::Power { alpha } => v.powf(*alpha),
            Family::Mixture { segs, cum } => {
                let i = mixture_segment(segs, v);
                let s = &segs[i];
                cum[i] + s.weight * (v - s.lo) / (s.hi - s.lo)
            }
            Family::Tabulated { v: xs, q } => {
                let i = segment_index(xs, v);
                q[i] + (q[i + 1] - q[i]) * (v - xs[i]) / (xs[i + 1] - xs[i])
            }
        }
    }

    /// `1 - cdf(v)`, computed without cancellation where the family allows it.
    pub fn sf(&self, v: f64) -> f64 {
        match &self.family {
            Family::Exponential { rate } if v > 0.0 => (-rate * v).exp(),
            Family::Uniform { a, b } if v > *a && v < *b => (b - v) / (b - a),
            _ => 1.0 - self.cdf(v),
        }
    }

    /// `1 - cdf(v)^n`, accurate when the cdf is close to 1.
    pub fn one_minus_cdf_pow(&self, v: f64, n: usize) -> f64 {
        let s = self.sf(v);
        if s >= 1.0 {
            return 1.0;
        }
        -((n as f64) * (-s).ln_1p()).exp_m1()
    }

    /// Density; at interior kinks the right-hand piece is used.
    pub fn pdf(&self, v: f64) -> f64 {
        if v < self.lo || v > self.hi {
            return 0.0;
        }
        match &self.family {
            Family::Uniform { a, b } => 1.0 / (b - a),
            Family::Exponential { rate } => rate * (-rate * v).exp(),
            Family::Power { alpha } => alpha * v.powf(alpha - 1.0),
            Family::Mixture { segs, .. } => {
                let s = &segs[mixture_segment(segs, v)];
                s.weight / (s.hi - s.lo)
            }
            Family::Tabulated { v: xs, q } => {
                let i = segment_index(xs, v);
                (q[i + 1] - q[i]) / (xs[i + 1] - xs[i])
            }
        }
    }

    /// Inverse cdf; `q` is clamped to `[0, 1]`.
    pub fn quantile(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        match &self.family {
            Family::Uniform { a, b } => a + q * (b - a),
            Family::Exponential { rate } => -(-q).ln_1p() / rate,
            Family::Power { alpha } => q.powf(1.0 / alpha),
            Family::Mixture { segs, cum } => {
                if q >= 1.0 {
                    return self.hi;
                }
                let i = cum.partition_point(|&c| c <= q).saturating_sub(1);
                let s = &segs[i];
                let t = ((q - cum[i]) / s.weight).clamp(0.0, 1.0);
                s.lo + t * (s.hi - s.lo)
            }
            Family::Tabulated { v, q: qs } => {
                if q >= 1.0 {
                    return self.hi;
                }
                let i = segment_index(qs, q);
                v[i] + (v[i + 1] - v[i]) * (q - qs[i]) / (qs[i + 1] - qs[i])
            }
        }
    }

    /// Inverse-transform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile(u)
    }

    /// `n` values equispaced in quantile space: `quantile(k / (n + 1))`, `k = 1..=n`.
    pub fn quantile_grid(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|k| self.quantile(k as f64 / (n + 1) as f64)).collect()
    }
}

fn mixture_segment(segs: &[MixtureSegment], v: f64) -> usize {
    // right-continuous: a boundary value belongs to the upper segment
    segs.partition_point(|s| s.lo <= v).saturating_sub(1)
}

/// Index `i` with `xs[i] <= x < xs[i+1]`, clamped to the last segment.
fn segment_index(xs: &[f64], x: f64) -> usize {
    xs.partition_point(|&t| t <= x).saturating_sub(1).min(xs.len() - 2)
}
