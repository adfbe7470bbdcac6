//! First moments of the intensity, the event count and the aggregate claim.
//!
//! * Physical measure, constant parameters: closed forms.
//! * Time-varying parameters (any [`ClaimDynamics`]): the linear ODE
//!   `m' = -(delta - c mu_G) m + delta c a + rho mu_H` solved by nested
//!   cumulative Simpson with grid doubling.
//! * Tilted measure: the explicit `I(s)` representation evaluated on the
//!   B-curve grid.

use serde::{Deserialize, Serialize};

use crate::dynamics::ClaimDynamics;
use crate::error::{Error, Result};
use crate::esscher::TiltedModel;
use crate::model::PhysicalModel;
use crate::quadrature::{cumulative_simpson, refine};

/// Below this `|kappa|` the critical (`kappa = 0`) formulas are used.
pub const KAPPA_EPS: f64 = 1e-12;

/// Relative tolerance of the grid-doubling loops.
pub const REFINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "P")]
    P,
    #[serde(rename = "Pstar")]
    Pstar,
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Measure::P => "P",
            Measure::Pstar => "Pstar",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub t: f64,
    pub mean_lambda: f64,
    #[serde(rename = "mean_N")]
    pub mean_n: f64,
    #[serde(rename = "mean_C")]
    pub mean_c: f64,
    pub measure: Measure,
    pub method: Method,
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "time must be >= 0, got {t}"
        )))
    }
}

/// `(1 - e^{-k t}) / k`, continuous at `k = 0`.
fn decay_integral(k: f64, t: f64) -> f64 {
    if k.abs() < KAPPA_EPS {
        t
    } else {
        -(-k * t).exp_m1() / k
    }
}

/// `mu_H rho + a delta`, the constant drift source.
fn source(m: &PhysicalModel) -> f64 {
    m.external_jump().mean() * m.rho() + m.level() * m.delta()
}

/// Long-run mean `mu_1 = (mu_H rho + a delta) / kappa`; infinite when the
/// model is not stationary.
pub fn stationary_mean(m: &PhysicalModel) -> f64 {
    if m.is_stationary() {
        source(m) / m.kappa()
    } else {
        f64::INFINITY
    }
}

pub fn mean_lambda_p(t: f64, m: &PhysicalModel) -> Result<f64> {
    check_time(t)?;
    let k = m.kappa();
    let s = source(m);
    if k.abs() < KAPPA_EPS {
        return Ok(m.lambda0() + s * t);
    }
    let mu1 = s / k;
    Ok(mu1 + (m.lambda0() - mu1) * (-k * t).exp())
}

pub fn mean_n_p(t: f64, m: &PhysicalModel) -> Result<f64> {
    check_time(t)?;
    let k = m.kappa();
    let s = source(m);
    if k.abs() < KAPPA_EPS {
        return Ok(m.lambda0() * t + 0.5 * s * t * t);
    }
    let mu1 = s / k;
    Ok(mu1 * t + (m.lambda0() - mu1) * decay_integral(k, t))
}

pub fn mean_c_p(t: f64, m: &PhysicalModel) -> Result<f64> {
    Ok(m.claim().mean() * mean_n_p(t, m)?)
}

pub fn moments_p(t: f64, m: &PhysicalModel) -> Result<MomentReport> {
    Ok(MomentReport {
        t,
        mean_lambda: mean_lambda_p(t, m)?,
        mean_n: mean_n_p(t, m)?,
        mean_c: mean_c_p(t, m)?,
        measure: Measure::P,
        method: Method::ClosedForm,
    })
}

/// Samples of `mu_lambda` and of the event rate `c mu_lambda` on a uniform
/// grid of `n` intervals over `[0, t]`.
fn inhom_profile(model: &dyn ClaimDynamics, t: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = t / n as f64;
    let delta = model.delta();
    let mut kappa = Vec::with_capacity(n + 1);
    let mut src = Vec::with_capacity(n + 1);
    let mut mult = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let s = (i as f64 * h).min(t);
        let c = model.rate_multiplier(s);
        kappa.push(delta - c * model.self_jump(s).mean());
        src.push(model.external_rate(s) * model.external_jump(s).mean() + delta * model.level(s));
        mult.push(c);
    }
    let int_k = cumulative_simpson(&kappa, h);
    let weighted: Vec<f64> = int_k.iter().zip(&src).map(|(k, s)| k.exp() * s).collect();
    let int_w = cumulative_simpson(&weighted, h);
    let lambda: Vec<f64> = int_k
        .iter()
        .zip(&int_w)
        .map(|(k, w)| (-k).exp() * (model.lambda0() + w))
        .collect();
    let rate = lambda.iter().zip(&mult).map(|(l, c)| l * c).collect();
    (lambda, rate)
}

fn even(n: usize) -> usize {
    n + n % 2
}

/// Start resolution: the parameter knot spacing if any, else 64 intervals.
fn start_resolution(model: &dyn ClaimDynamics, t: f64) -> usize {
    let knots = model.knots();
    if knots.len() >= 2 {
        let h = knots[1] - knots[0];
        even(((t / h).ceil() as usize).max(2))
    } else {
        64
    }
}

/// Expected intensity for time-varying parameters.
pub fn mean_lambda_inhom(t: f64, model: &dyn ClaimDynamics) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(model.lambda0());
    }
    refine(
        |n| Ok(*inhom_profile(model, t, n).0.last().unwrap()),
        start_resolution(model, t),
        12,
        REFINE_TOL,
    )
}

/// Expected number of events `int_0^t c(s) mu_lambda(s) ds`.
pub fn mean_n_inhom(t: f64, model: &dyn ClaimDynamics) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    refine(
        |n| {
            let (_, rate) = inhom_profile(model, t, n);
            Ok(*cumulative_simpson(&rate, t / n as f64).last().unwrap())
        },
        start_resolution(model, t),
        12,
        REFINE_TOL,
    )
}

pub fn mean_c_inhom(t: f64, model: &dyn ClaimDynamics) -> Result<f64> {
    Ok(model.claim().mean() * mean_n_inhom(t, model)?)
}

pub fn moments_inhom(t: f64, model: &dyn ClaimDynamics, measure: Measure) -> Result<MomentReport> {
    Ok(MomentReport {
        t,
        mean_lambda: mean_lambda_inhom(t, model)?,
        mean_n: mean_n_inhom(t, model)?,
        mean_c: mean_c_inhom(t, model)?,
        measure,
        method: Method::Quadrature,
    })
}

/// Expected scaled intensity and its running integral under the tilted
/// measure, from the explicit representation
///
/// `E*[lambda_t] = e^{-int_0^t I} (lambda0 + int_0^t e^{int_0^s I} S(s) ds)`
///
/// with `I(s) = delta - theta j (beta/(beta-B)) / (beta-B)` and
/// `S(s) = theta j (beta/(beta-B)) (psi alpha rho / (alpha-B)^2 + a delta)`.
/// Evaluated on a uniform grid aligned with the B-curve nodes.
fn star_profile(t: f64, tm: &TiltedModel) -> Result<(f64, f64)> {
    check_time(t)?;
    if t > tm.horizon() * (1.0 + 1e-12) {
        return Err(Error::OutOfHorizon {
            t,
            horizon: tm.horizon(),
        });
    }
    if t == 0.0 {
        return Ok((tm.base().lambda0(), 0.0));
    }
    let base = tm.base();
    let e = tm.esscher();
    let alpha = base.external_jump().rate();
    let beta = base.self_jump().rate();
    let (delta, rho, a) = (base.delta(), base.rho(), base.level());
    let scale = e.theta * tm.j_hat();
    let n = even(((t / tm.bcurve().step()).round() as usize).max(2));
    let h = t / n as f64;
    let mut big_i = Vec::with_capacity(n + 1);
    let mut src = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let b = tm.b(k as f64 * h);
        if b >= alpha || b >= beta {
            return Err(Error::DivergentTransform {
                s: -b,
                bound: -alpha.min(beta),
            });
        }
        let g = beta / (beta - b);
        big_i.push(delta - scale * g / (beta - b));
        src.push(scale * g * (e.psi * alpha * rho / ((alpha - b) * (alpha - b)) + a * delta));
    }
    let int_i = cumulative_simpson(&big_i, h);
    let w: Vec<f64> = int_i.iter().zip(&src).map(|(i, s)| i.exp() * s).collect();
    let int_w = cumulative_simpson(&w, h);
    let lambda: Vec<f64> = int_i
        .iter()
        .zip(&int_w)
        .map(|(i, w)| (-i).exp() * (base.lambda0() + w))
        .collect();
    let n_mean = *cumulative_simpson(&lambda, h).last().unwrap();
    Ok((*lambda.last().unwrap(), n_mean))
}

pub fn mean_lambda_star(t: f64, tm: &TiltedModel) -> Result<f64> {
    Ok(star_profile(t, tm)?.0)
}

pub fn mean_n_star(t: f64, tm: &TiltedModel) -> Result<f64> {
    Ok(star_profile(t, tm)?.1)
}

/// `mu_J~ E*[N_t]` with `mu_J~ = eta / (gamma + nu)`.
pub fn mean_c_star(t: f64, tm: &TiltedModel) -> Result<f64> {
    Ok(tm.claim().mean() * mean_n_star(t, tm)?)
}

pub fn moments_star(t: f64, tm: &TiltedModel) -> Result<MomentReport> {
    let (mean_lambda, mean_n) = star_profile(t, tm)?;
    Ok(MomentReport {
        t,
        mean_lambda,
        mean_n,
        mean_c: tm.claim().mean() * mean_n,
        measure: Measure::Pstar,
        method: Method::Quadrature,
    })
}
