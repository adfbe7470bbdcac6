use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EsscherParams, PhysicalModel};
use crate::quadrature::{adaptive_simpson, bisect};

/// Tolerance on `|G(B(t_i)) - t_i|` for an accepted curve.
pub const SELF_CONSISTENCY_TOL: f64 = 1e-6;

/// `f1(B) = delta B - theta j_hat(nu) (g_hat(-B) - 1)`, the right-hand side
/// of `dB/dt`.
pub fn f1(b: f64, m: &PhysicalModel, e: &EsscherParams) -> Result<f64> {
    let jhat = e.j_hat(m)?;
    Ok(m.delta() * b - e.theta * jhat * m.self_jump().laplace_m1(-b)?)
}

fn f1_slope_at_zero(m: &PhysicalModel, e: &EsscherParams) -> Result<f64> {
    Ok(m.delta() - e.theta * e.j_hat(m)? * m.self_jump().mean())
}

/// Smallest positive root of `f1`. Closed form `beta - theta j_hat / delta`
/// for exponential self-excited jumps, bisection otherwise.
pub fn b_plus(m: &PhysicalModel, e: &EsscherParams) -> Result<f64> {
    let g = m.self_jump();
    if g.kind() == crate::distributions::JumpKind::Exponential {
        let lhs = m.delta() * g.rate();
        let rhs = e.theta * e.j_hat(m)?;
        if lhs <= rhs {
            return Err(Error::NoPositiveRoot { lhs, rhs });
        }
        Ok(g.rate() - rhs / m.delta())
    } else {
        b_plus_by_bisection(m, e)
    }
}

/// Root of `f1` on `(0, rate(G))` by bracketed bisection to 1e-12.
pub fn b_plus_by_bisection(m: &PhysicalModel, e: &EsscherParams) -> Result<f64> {
    let slope = f1_slope_at_zero(m, e)?;
    if slope <= 0.0 {
        let jm = e.theta * e.j_hat(m)?;
        return Err(Error::NoPositiveRoot {
            lhs: m.delta(),
            rhs: jm * m.self_jump().mean(),
        });
    }
    let rate = m.self_jump().rate();
    let f = |b: f64| f1(b, m, e).unwrap_or(f64::NEG_INFINITY);
    // f1 is concave with f1(0) = 0 and f1 -> -inf at the Laplace boundary
    let mut lo = rate * 1e-12;
    while f(lo) <= 0.0 {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::NoPositiveRoot {
                lhs: slope,
                rhs: 0.0,
            });
        }
    }
    let mut gap = 0.5;
    let mut hi = rate * (1.0 - gap);
    while f(hi) > 0.0 {
        gap *= 0.5;
        hi = rate * (1.0 - gap);
        if gap < 1e-15 {
            return Err(Error::NoPositiveRoot {
                lhs: slope,
                rhs: 0.0,
            });
        }
    }
    if hi <= lo {
        lo = hi * 1e-6;
    }
    Ok(bisect(f, lo, hi, 1e-12 * rate.max(1.0) * 1e-3))
}

/// `G(B) = int_b^B du / f1(u)`, the time at which the flow started at `b`
/// reaches `B`.
pub fn g_of_b(target: f64, m: &PhysicalModel, e: &EsscherParams) -> Result<f64> {
    let upper = b_plus(m, e)?;
    if !(target >= e.b && target < upper) {
        return Err(Error::OutOfDomain {
            value: target,
            lower: e.b,
            upper,
        });
    }
    integrate_inverse_f1(e.b, target, m, e)
}

fn integrate_inverse_f1(from: f64, to: f64, m: &PhysicalModel, e: &EsscherParams) -> Result<f64> {
    if to == from {
        return Ok(0.0);
    }
    let jhat = e.j_hat(m)?;
    let delta = m.delta();
    let g = m.self_jump();
    if g.kind() == crate::distributions::JumpKind::Exponential {
        // f1(u) = delta u (B+ - u) / (beta - u); in the logit variable
        // v = ln(u / (B+ - u)) both endpoint singularities disappear and
        // du / f1(u) = (beta - u) / (delta B+) dv
        let beta = g.rate();
        let bp = b_plus(m, e)?;
        let logit = |u: f64| (u / (bp - u)).ln();
        let integrand = |v: f64| {
            let u = bp / (1.0 + (-v).exp());
            (beta - u) / (delta * bp)
        };
        return adaptive_simpson(&integrand, logit(from), logit(to), 1e-13);
    }
    let inv = |u: f64| 1.0 / (delta * u - e.theta * jhat * g.laplace_m1(-u).unwrap_or(f64::NAN));
    adaptive_simpson(&inv, from, to, 1e-12)
}

/// Inverts `G` by bisection on `(b, B+)`.
pub fn invert_g(t: f64, m: &PhysicalModel, e: &EsscherParams) -> Result<f64> {
    let upper = b_plus(m, e)?;
    if t <= 0.0 {
        return Ok(e.b);
    }
    let mut hi = upper - (upper - e.b) * 1e-3;
    let mut k = 0;
    while g_of_b(hi, m, e)? < t {
        hi = upper - (upper - hi) * 1e-3;
        k += 1;
        if k > 4 || hi >= upper {
            return Err(Error::OutOfDomain {
                value: hi,
                lower: e.b,
                upper,
            });
        }
    }
    let mut lo = e.b;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g_of_b(mid, m, e)? < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Regime {
    /// `alpha >= B+`: B stays below alpha for all time.
    Type1,
    /// `alpha in (b, B+)`: B reaches alpha at `t_star = G(alpha)`.
    Type2 { t_star: f64 },
    /// `alpha <= b`: no admissible solution.
    Type3,
}

/// Regime of the external-jump Laplace domain relative to the B flow.
pub fn classify_regime(m: &PhysicalModel, e: &EsscherParams, bcurve: &BCurve) -> Result<Regime> {
    let alpha = m.external_jump().rate();
    let upper = bcurve.b_plus();
    Ok(if alpha >= upper {
        Regime::Type1
    } else if alpha > e.b {
        Regime::Type2 {
            t_star: g_of_b(alpha, m, e)?,
        }
    } else {
        Regime::Type3
    })
}

/// Solved `B(t)` on a uniform grid with monotone cubic Hermite
/// interpolation between nodes (node slopes are the exact `f1(B_i)`).
#[derive(Debug, Clone, PartialEq)]
pub struct BCurve {
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    b_plus: f64,
    regime: Regime,
}

impl BCurve {
    pub fn horizon(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.values.len() {
            self.horizon()
        } else {
            i as f64 * self.step
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.time(i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn b_plus(&self) -> f64 {
        self.b_plus
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `B(t)`, with `t` clamped to the grid.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.values.len() - 1;
        if t <= 0.0 {
            return self.values[0];
        }
        let x = t / self.step;
        if x >= n as f64 {
            return self.values[n];
        }
        let i = (x.floor() as usize).min(n - 1);
        let u = x - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let h = self.step;
        let secant = (y1 - y0) / h;
        let (mut m0, mut m1) = (self.slopes[i], self.slopes[i + 1]);
        if secant == 0.0 {
            m0 = 0.0;
            m1 = 0.0;
        } else {
            // Fritsch-Carlson limiter keeps each cubic piece monotone
            let (a, b) = (m0 / secant, m1 / secant);
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                m0 = tau * a * secant;
                m1 = tau * b * secant;
            }
        }
        let u2 = u * u;
        let u3 = u2 * u;
        let v = (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * h * m0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * h * m1;
        v.clamp(y0.min(y1), y0.max(y1))
    }

    /// Two-column CSV `t,B`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,B\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!(
                "{},{}\n",
                crate::fmt_sig(self.time(i)),
                crate::fmt_sig(*v)
            ));
        }
        out
    }
}

/// Solves `dB/dt = f1(B)`, `B(0) = b`, by fixed-step RK4 on `n_grid`
/// intervals of `[0, horizon]`, then checks every node against the
/// `G`-inversion identity. Nodes that fail the check are recomputed by
/// inverting `G` with bisection; a node that still fails is an error.
pub fn solve_b(
    m: &PhysicalModel,
    e: &EsscherParams,
    horizon: f64,
    n_grid: usize,
) -> Result<BCurve> {
    e.validate(m)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if n_grid == 0 {
        return Err(Error::InvalidParameter(
            "grid needs at least one interval".into(),
        ));
    }
    let upper = b_plus(m, e)?;
    if e.b >= upper {
        return Err(Error::InvalidParameter(format!(
            "initial condition b = {} must lie below B+ = {upper}",
            e.b
        )));
    }
    let h = horizon / n_grid as f64;
    let rhs = |b: f64| f1(b, m, e);
    let mut values = Vec::with_capacity(n_grid + 1);
    values.push(e.b);
    let mut y = e.b;
    for _ in 0..n_grid {
        let k1 = rhs(y)?;
        let k2 = rhs(y + 0.5 * h * k1)?;
        let k3 = rhs(y + 0.5 * h * k2)?;
        let k4 = rhs(y + h * k3)?;
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        values.push(y.min(upper));
    }

    // cross-check with the G-function
    let mut g_acc = 0.0;
    for i in 1..values.len() {
        let t = if i == n_grid { horizon } else { i as f64 * h };
        let increment = integrate_inverse_f1(values[i - 1], values[i], m, e);
        let ok = match increment {
            Ok(inc) if values[i] < upper => {
                g_acc += inc;
                (g_acc - t).abs() <= SELF_CONSISTENCY_TOL
            }
            _ => false,
        };
        if !ok {
            let fixed = invert_g(t, m, e)?;
            let residual = (g_of_b(fixed, m, e)? - t).abs();
            if residual > SELF_CONSISTENCY_TOL || fixed <= values[i - 1] {
                return Err(Error::GridTooCoarse { t, residual });
            }
            values[i] = fixed;
            g_acc = t;
        }
    }

    let slopes = values.iter().map(|&v| rhs(v)).collect::<Result<Vec<_>>>()?;
    let mut curve = BCurve {
        step: h,
        values,
        slopes,
        b_plus: upper,
        regime: Regime::Type1,
    };
    curve.regime = classify_regime(m, e, &curve)?;
    Ok(curve)
}

/// `K(t)` on the B grid, `K(0) = 0`,
/// `K' = -a delta B(t) + rho (1 - psi h_hat(-B(t)))`.
#[derive(Debug, Clone)]
pub struct KCurve {
    bcurve: BCurve,
    values: Vec<f64>,
    level: f64,
    delta: f64,
    rho: f64,
    psi: f64,
    external: crate::distributions::JumpDist,
}

impl KCurve {
    fn integrand(&self, t: f64) -> Result<f64> {
        let b = self.bcurve.eval(t);
        let hhat = self.external.laplace(-b)?;
        Ok(-self.level * self.delta * b + self.rho * (1.0 - self.psi * hhat))
    }

    fn panel(&self, s: f64, e: f64) -> Result<f64> {
        let m = 0.5 * (s + e);
        Ok((e - s) / 6.0 * (self.integrand(s)? + 4.0 * self.integrand(m)? + self.integrand(e)?))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let h = self.bcurve.step();
        let n = self.values.len() - 1;
        let t = t.clamp(0.0, self.bcurve.horizon());
        let i = ((t / h).floor() as usize).min(n);
        let ti = self.bcurve.time(i);
        if t <= ti {
            return Ok(self.values[i]);
        }
        Ok(self.values[i] + self.panel(ti, t)?)
    }
}

/// Builds `K(t)` by per-panel Simpson on the B grid (midpoints from the
/// interpolated curve).
pub fn solve_k(m: &PhysicalModel, e: &EsscherParams, bcurve: &BCurve) -> Result<KCurve> {
    let mut k = KCurve {
        bcurve: bcurve.clone(),
        values: Vec::with_capacity(bcurve.len()),
        level: m.level(),
        delta: m.delta(),
        rho: m.rho(),
        psi: e.psi,
        external: m.external_jump(),
    };
    let mut acc = 0.0;
    k.values.push(0.0);
    for i in 1..bcurve.len() {
        acc += k.panel(bcurve.time(i - 1), bcurve.time(i))?;
        k.values.push(acc);
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::JumpDist;
    use proptest::prelude::*;

    fn table() -> (PhysicalModel, EsscherParams) {
        (
            PhysicalModel::reference(),
            EsscherParams::new(1.25, 1.25, -0.05, 1e-6),
        )
    }

    /// Closed-form G for exponential self-jumps (partial fractions of 1/f1).
    fn g_closed_form(target: f64, m: &PhysicalModel, e: &EsscherParams) -> f64 {
        let beta = m.self_jump().rate();
        let bp = b_plus(m, e).unwrap();
        let c_log = (bp - beta) / bp;
        (beta / bp * (target / e.b).ln() + c_log * ((bp - target) / (bp - e.b)).ln()) / m.delta()
    }

    fn rk4_oracle(m: &PhysicalModel, e: &EsscherParams, t: f64, h: f64) -> f64 {
        let jhat = (0.4f64 / (0.4 + e.nu)).powi(3);
        let beta = m.self_jump().rate();
        let f = |b: f64| m.delta() * b - e.theta * jhat * (beta / (beta - b) - 1.0);
        let steps = (t / h).round() as usize;
        let mut y = e.b;
        for _ in 0..steps {
            let k1 = f(y);
            let k2 = f(y + 0.5 * h * k1);
            let k3 = f(y + 0.5 * h * k2);
            let k4 = f(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        y
    }

    #[test]
    fn f1_basics() {
        let (m, e) = table();
        assert_eq!(f1(0.0, &m, &e).unwrap(), 0.0);
        let fd = (f1(1e-7, &m, &e).unwrap() - f1(-1e-7, &m, &e).unwrap()) / 2e-7;
        let jhat = (0.4f64 / 0.35).powi(3);
        assert!((fd - (3.0 - 1.25 * jhat)).abs() < 1e-6);
        assert!(matches!(
            f1(1.0, &m, &e),
            Err(Error::DivergentTransform { .. })
        ));
    }

    #[test]
    fn b_plus_closed_form_and_bisection() {
        let (m, e) = table();
        let closed = b_plus(&m, &e).unwrap();
        let jhat = (0.4f64 / 0.35).powi(3);
        assert!((closed - (1.0 - 1.25 * jhat / 3.0)).abs() < 1e-15);
        assert!((closed - 0.378036).abs() < 1e-6);
        let bis = b_plus_by_bisection(&m, &e).unwrap();
        assert!((closed - bis).abs() < 1e-10, "{closed} {bis}");
    }

    #[test]
    fn b_plus_identity_limit() {
        let m = PhysicalModel::reference();
        let e = EsscherParams::new(1.0, 1.0, 0.0, 1e-6);
        assert!((b_plus(&m, &e).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn b_plus_boundary_has_no_root() {
        // delta beta = 2 = theta j_hat(0)
        let m = PhysicalModel::reference().with_delta(2.0).unwrap();
        let e = EsscherParams::new(2.0, 1.0, 0.0, 1e-6);
        assert!(matches!(b_plus(&m, &e), Err(Error::NoPositiveRoot { .. })));
        assert!(matches!(
            b_plus_by_bisection(&m, &e),
            Err(Error::NoPositiveRoot { .. })
        ));
    }

    #[test]
    fn b_plus_gamma_self_jumps() {
        let m = PhysicalModel::reference().with_self_jump(JumpDist::gamma(2.0, 2.0).unwrap());
        let e = EsscherParams::new(1.1, 1.0, -0.02, 1e-4);
        let r = b_plus(&m, &e).unwrap();
        assert!(f1(r, &m, &e).unwrap().abs() < 1e-9);
        assert!(f1(0.5 * r, &m, &e).unwrap() > 0.0);
        assert!(f1(r + 0.01, &m, &e).unwrap() < 0.0);
    }

    #[test]
    fn g_function() {
        let (m, e) = table();
        assert_eq!(g_of_b(e.b, &m, &e).unwrap(), 0.0);
        for target in [1e-5, 0.01, 0.2, 0.37] {
            let q = g_of_b(target, &m, &e).unwrap();
            let c = g_closed_form(target, &m, &e);
            assert!((q - c).abs() < 1e-8 * c.max(1.0), "{target}: {q} vs {c}");
        }
        assert!(matches!(
            g_of_b(0.5 * e.b, &m, &e),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            g_of_b(0.4, &m, &e),
            Err(Error::OutOfDomain { .. })
        ));
        // diverges approaching B+
        let bp = b_plus(&m, &e).unwrap();
        let mut prev = 0.0;
        for gap in [1e-3, 1e-6, 1e-9, 1e-12] {
            let g = g_of_b(bp - gap, &m, &e).unwrap();
            assert!((g - g_closed_form(bp - gap, &m, &e)).abs() < 1e-6 * g);
            // logarithmic growth: each factor 1e-3 adds ((beta - B+)/B+) ln(1e3) / delta
            assert!(g - prev > 3.5);
            prev = g;
        }
    }

    #[test]
    fn solve_b_against_rk4_oracle_and_g() {
        let (m, e) = table();
        let curve = solve_b(&m, &e, 1.0, 2000).unwrap();
        assert_eq!(curve.values()[0], e.b);
        let oracle = rk4_oracle(&m, &e, 1.0, 1e-4);
        let v = curve.eval(1.0);
        assert!(v > 0.0 && v < 0.37804);
        assert!((v - oracle).abs() < 1e-6 * oracle.max(1e-6), "{v} {oracle}");
        for t in [0.1, 0.5, 1.0] {
            let g = g_of_b(curve.eval(t), &m, &e).unwrap();
            assert!((g - t).abs() < 1e-6, "t={t} G={g}");
        }
        assert_eq!(curve.regime(), Regime::Type1);
    }

    #[test]
    fn solve_b_near_plateau_with_long_horizon() {
        let m = PhysicalModel::reference();
        let e = EsscherParams::new(1.25, 1.25, -0.05, 0.01);
        let curve = solve_b(&m, &e, 10.0, 20000).unwrap();
        let bp = curve.b_plus();
        assert!(curve.values().windows(2).all(|w| w[0] < w[1] || w[1] == bp));
        assert!(curve.values().iter().all(|&v| v < bp));
        assert!((curve.eval(10.0) - bp).abs() < 1e-3);
    }

    #[test]
    fn identity_tilt_keeps_b_near_zero() {
        let m = PhysicalModel::reference();
        let e = EsscherParams::new(1.0, 1.0, 0.0, 1e-12);
        let curve = solve_b(&m, &e, 1.0, 200).unwrap();
        assert!(curve.values().iter().all(|&v| v < 1e-10));
    }

    #[test]
    fn regimes() {
        let (m, e) = table();
        let curve = solve_b(&m, &e, 1.0, 500).unwrap();
        assert_eq!(classify_regime(&m, &e, &curve).unwrap(), Regime::Type1);

        let m2 = PhysicalModel::new(
            1.0,
            1.0,
            3.0,
            4.0,
            m.self_jump(),
            JumpDist::exponential(0.2).unwrap(),
            m.claim(),
        )
        .unwrap();
        let curve2 = solve_b(&m2, &e, 1.0, 500).unwrap();
        match classify_regime(&m2, &e, &curve2).unwrap() {
            Regime::Type2 { t_star } => {
                let oracle = g_closed_form(0.2, &m2, &e);
                assert!((t_star - oracle).abs() < 1e-8);
            }
            r => panic!("expected Type2, got {r:?}"),
        }

        let m3 = PhysicalModel::new(
            1.0,
            1.0,
            3.0,
            4.0,
            m.self_jump(),
            JumpDist::exponential(e.b / 2.0).unwrap(),
            m.claim(),
        )
        .unwrap();
        let curve3 = solve_b(&m3, &e, 1.0, 100).unwrap();
        assert_eq!(classify_regime(&m3, &e, &curve3).unwrap(), Regime::Type3);
    }

    #[test]
    fn k_curve() {
        let (m, e) = table();
        let curve = solve_b(&m, &e, 1.0, 2000).unwrap();
        let k = solve_k(&m, &e, &curve).unwrap();
        assert_eq!(k.eval(0.0).unwrap(), 0.0);

        // trapezoid oracle at half the grid spacing
        let n = 4000;
        let h = 1.0 / n as f64;
        let beta_h = m.external_jump().rate();
        let f = |t: f64| {
            let b = rk4_oracle(&m, &e, t, 1e-4);
            -m.level() * m.delta() * b + m.rho() * (1.0 - e.psi * beta_h / (beta_h - b))
        };
        // integrand is nearly affine in B, so sample B on a coarse oracle grid
        let samples: Vec<f64> = (0..=n).map(|i| f(i as f64 * h)).collect();
        let trap = h * (samples.iter().sum::<f64>() - 0.5 * (samples[0] + samples[n]));
        assert!(
            (k.eval(1.0).unwrap() - trap).abs() < 1e-6,
            "{} {}",
            k.eval(1.0).unwrap(),
            trap
        );
        // nonincreasing when psi h_hat >= 1
        assert!(k.values().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn k_curve_identity_is_zero() {
        let m = PhysicalModel::reference();
        let e = EsscherParams::new(1.0, 1.0, 0.0, 1e-12);
        let curve = solve_b(&m, &e, 1.0, 200).unwrap();
        let k = solve_k(&m.with_level(0.0).unwrap(), &e, &curve).unwrap();
        assert!(k.eval(1.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn csv_export() {
        let (m, e) = table();
        let curve = solve_b(&m, &e, 1.0, 4).unwrap();
        let csv = curve.to_csv();
        assert!(csv.starts_with("t,B\n0,"));
        assert_eq!(csv.lines().count(), 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn curve_is_monotone_bounded_and_consistent(theta in 1.0f64..1.7, nu in -0.1f64..0.0, b in 1e-5f64..0.1) {
            let m = PhysicalModel::reference();
            let e = EsscherParams::new(theta, 1.0, nu, b);
            let bp = b_plus(&m, &e);
            prop_assume!(bp.is_ok() && b < 0.9 * *bp.as_ref().unwrap());
            let curve = solve_b(&m, &e, 1.0, 400).unwrap();
            let vals = curve.values();
            prop_assert!(vals.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(vals.iter().all(|&v| v >= b && v < curve.b_plus()));
            for (i, &v) in vals.iter().enumerate().step_by(40) {
                let g = g_of_b(v, &m, &e).unwrap();
                prop_assert!((g - curve.time(i)).abs() < 1e-6);
            }
            // interpolation stays monotone between nodes
            let mut prev = curve.eval(0.0);
            for k in 1..=1000 {
                let v = curve.eval(k as f64 / 1000.0);
                prop_assert!(v >= prev);
                prev = v;
            }
        }
    }
}
