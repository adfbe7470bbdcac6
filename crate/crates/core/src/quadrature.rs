//! Small numerical kernels shared by the solvers: composite and adaptive
//! Simpson rules, cumulative integration on uniform grids, refinement
//! drivers, bisection and order-stable summation.

use crate::error::{Error, Result};

/// Composite Simpson rule with `n` subintervals (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Budget of integrand evaluations for one adaptive integral.
pub const ADAPTIVE_MAX_EVALS: usize = 2_000_000;

/// Adaptive Simpson quadrature with Richardson correction. The per-panel
/// tolerance is halved on each split but never below the rounding level of
/// the panel value.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut budget = ADAPTIVE_MAX_EVALS;
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 60, &mut budget)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::QuadratureNotConverged(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= (15.0 * tol).max(floor) || lm <= a || rm >= b {
        return Ok(left + right + delta / 15.0);
    }
    *budget = budget.saturating_sub(2);
    if depth == 0 || *budget == 0 {
        return Err(Error::QuadratureNotConverged(format!(
            "adaptive Simpson exhausted its budget near [{a}, {b}]"
        )));
    }
    Ok(
        adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)?
            + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)?,
    )
}

/// Running integral of samples on a uniform grid of spacing `h`.
///
/// Even nodes use composite Simpson over node pairs; odd nodes add the
/// three-point partial-panel rule `h/12 (5 f0 + 8 f1 - f2)` to the previous
/// even node. Requires at least three samples; with two it falls back to the
/// trapezoid rule.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    let mut i = 0;
    while i + 2 < n {
        let (f0, f1, f2) = (values[i], values[i + 1], values[i + 2]);
        out[i + 1] = out[i] + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
        out[i + 2] = out[i] + h / 3.0 * (f0 + 4.0 * f1 + f2);
        i += 2;
    }
    if i + 1 < n {
        // last odd node: backward partial panel
        let (f0, f1, f2) = (values[i - 1], values[i], values[i + 1]);
        out[i + 1] = out[i] + h / 12.0 * (-f0 + 8.0 * f1 + 5.0 * f2);
    }
    out
}

/// Doubles the resolution passed to `estimate` until two successive values
/// agree to `rel_tol` (relative, with an absolute floor of `rel_tol` for
/// values near zero).
pub fn refine<F>(mut estimate: F, start: usize, max_doublings: u32, rel_tol: f64) -> Result<f64>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut n = start.max(2);
    let mut prev = estimate(n)?;
    for _ in 0..max_doublings {
        n *= 2;
        let next = estimate(n)?;
        if (next - prev).abs() <= rel_tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged(format!(
        "no agreement to {rel_tol:e} after {max_doublings} doublings (n = {n})"
    )))
}

/// Bisection for a sign change of `f` on `[lo, hi]`; `f(lo)` and `f(hi)`
/// must have opposite signs.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Pairwise summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
