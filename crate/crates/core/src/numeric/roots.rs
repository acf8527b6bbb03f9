//! Bisection on bracketed sign changes.

const MAX_ITER: usize = 200;

/// Shrinks `[lo, hi]` around a sign change of `f` until the bracket cannot be
/// split further in floating point, and returns the end with smaller `|f|`.
///
/// `f(lo)` and `f(hi)` must have opposite signs (zero counts as either).
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let (a, b, fa, fb) = shrink(&f, lo, hi);
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

/// Smallest point of `[lo, hi]` where a nondecreasing `f` becomes nonnegative.
///
/// Works for functions with jumps: the returned point is the jump location when
/// `f` steps over zero. Requires `f(lo) < 0 <= f(hi)`.
pub fn bisect_threshold<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let (_, b, _, _) = shrink(&f, lo, hi);
    b
}

fn shrink<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64, f64, f64) {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    let rising = flo < fhi;
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, mid, fm, fm);
        }
        if (fm < 0.0) == rising {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    (lo, hi, flo, fhi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decreasing_bracket() {
        let r = bisect(|x| 1.0 - x, 0.0, 3.0);
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_of_step() {
        let t = bisect_threshold(|x| if x < 0.37 { -1.0 } else { 2.0 }, 0.0, 1.0);
        assert!((t - 0.37).abs() < 1e-15);
        assert!(t >= 0.37);
    }
}
