//! Adaptive Simpson quadrature.
//!
//! Every expected-value integral in the crate goes through [`integrate_pieces`],
//! which splits the range at known kinks and jumps (mixture boundaries, reserve
//! values, pooling endpoints) before running the adaptive rule on each piece.

/// Absolute tolerance used by the contest and equilibrium integrals.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 44;
const INITIAL_PANELS: usize = 8;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate_pieces(f, a, b, &[], tol)
}

/// Integrates `f` over `[a, b]`, splitting at every breakpoint strictly inside
/// the range. Reversed bounds give the negated integral.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -integrate_pieces(f, b, a, breaks, tol);
    }
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(a);
    nodes.extend(cuts);
    nodes.push(b);

    let width = b - a;
    nodes
        .windows(2)
        .map(|w| {
            let share = tol * (w[1] - w[0]) / width;
            panels(&f, w[0], w[1], share.max(f64::MIN_POSITIVE))
        })
        .sum()
}

fn panels<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let h = (b - a) / INITIAL_PANELS as f64;
    (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == INITIAL_PANELS { b } else { lo + h };
            let mid = 0.5 * (lo + hi);
            let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
            let whole = simpson(lo, hi, flo, fmid, fhi);
            refine(f, lo, hi, flo, fmid, fhi, whole, tol / INITIAL_PANELS as f64, MAX_DEPTH)
        })
        .sum()
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || !(lm > a && rm < b) {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
