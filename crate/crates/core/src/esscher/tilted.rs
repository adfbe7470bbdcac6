use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bcurve::{BCurve, Regime};
use crate::distributions::{JumpDist, JumpKind};
use crate::dynamics::ClaimDynamics;
use crate::error::{Error, Result};
use crate::model::{EsscherParams, PhysicalModel};

/// How the risk-neutral dynamics are represented for simulation.
///
/// * `LambdaSpace`: the intensity keeps its physical drift `delta (a - lambda)`,
///   events arrive at rate `c(t) lambda_t`, and jumps follow the tilted laws
///   `Exp(alpha - B)`, `Exp(beta - B)`.
/// * `LambdaTildeSpace`: the scaled intensity `c(t) lambda_t` is treated as a
///   contagion process in its own right with level `c(t) a`, jump laws
///   rescaled by `c(t)` (rates `lambda_h`, `lambda_g`) and initial value
///   `lambda0`. This is the form whose first moment has the closed
///   quadrature expression used for the premium tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    LambdaSpace,
    #[default]
    LambdaTildeSpace,
}

/// Stationarity of the tilted intensity, evaluated at the worst grid node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationarityReport {
    /// `delta > theta j_hat(nu) (beta/(beta-B)) / (beta-B)` with the full
    /// `j_hat(nu) = (gamma/(gamma+nu))^eta`.
    pub full_holds: bool,
    pub full_margin: f64,
    /// Same condition with `gamma/(gamma+nu)` in place of `j_hat(nu)`.
    pub displayed_holds: bool,
    pub displayed_margin: f64,
}

/// Physical model after the Esscher change of measure. Parameters become
/// time-dependent through `B(t)`.
#[derive(Debug, Clone)]
pub struct TiltedModel {
    base: PhysicalModel,
    esscher: EsscherParams,
    bcurve: Arc<BCurve>,
    representation: Representation,
    j_hat: f64,
    claim: JumpDist,
    knots: Vec<f64>,
}

/// Builds the tilted model. Requires exponential self- and external-jump
/// laws and a regime whose admissible horizon covers the B-curve.
pub fn tilt_model(
    m: &PhysicalModel,
    e: &EsscherParams,
    bcurve: Arc<BCurve>,
    representation: Representation,
) -> Result<TiltedModel> {
    e.validate(m)?;
    for (name, d) in [("self", m.self_jump()), ("external", m.external_jump())] {
        if d.kind() != JumpKind::Exponential {
            return Err(Error::Unsupported(format!(
                "tilted simulation needs exponential {name}-excited jumps"
            )));
        }
    }
    let horizon = bcurve.horizon();
    match bcurve.regime() {
        Regime::Type1 => {}
        Regime::Type2 { t_star } if horizon < t_star => {}
        Regime::Type2 { t_star } => {
            return Err(Error::HorizonExceedsRegime {
                horizon,
                reason: format!("B(t) reaches alpha at t* = {t_star}"),
            })
        }
        Regime::Type3 => {
            return Err(Error::HorizonExceedsRegime {
                horizon,
                reason: "alpha <= b, no admissible B(t)".into(),
            })
        }
    }
    let cap = m.external_jump().rate().min(m.self_jump().rate());
    if let Some(&bmax) = bcurve.values().last() {
        if bmax >= cap {
            return Err(Error::DivergentTransform {
                s: -bmax,
                bound: -cap,
            });
        }
    }
    Ok(TiltedModel {
        base: *m,
        esscher: *e,
        j_hat: e.j_hat(m)?,
        claim: m.claim().tilt_claim(e.nu)?,
        knots: bcurve.times(),
        bcurve,
        representation,
    })
}

impl TiltedModel {
    pub fn base(&self) -> &PhysicalModel {
        &self.base
    }

    pub fn esscher(&self) -> &EsscherParams {
        &self.esscher
    }

    pub fn bcurve(&self) -> &BCurve {
        &self.bcurve
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn with_representation(&self, representation: Representation) -> TiltedModel {
        TiltedModel {
            representation,
            ..self.clone()
        }
    }

    pub fn j_hat(&self) -> f64 {
        self.j_hat
    }

    pub fn horizon(&self) -> f64 {
        self.bcurve.horizon()
    }

    pub fn b(&self, t: f64) -> f64 {
        self.bcurve.eval(t)
    }

    fn alpha(&self) -> f64 {
        self.base.external_jump().rate()
    }

    fn beta(&self) -> f64 {
        self.base.self_jump().rate()
    }

    /// `c(t) = theta j_hat(nu) g_hat(-B(t))`.
    pub fn multiplier(&self, t: f64) -> f64 {
        let beta = self.beta();
        self.esscher.theta * self.j_hat * beta / (beta - self.b(t))
    }

    /// `rho~(t) = psi h_hat(-B(t)) rho`.
    pub fn rho_tilde(&self, t: f64) -> f64 {
        let alpha = self.alpha();
        self.esscher.psi * alpha / (alpha - self.b(t)) * self.base.rho()
    }

    /// Tilted external-jump law `Exp(alpha - B(t))`.
    pub fn tilted_external_jump(&self, t: f64) -> JumpDist {
        JumpDist::exponential(self.alpha() - self.b(t)).expect("B below alpha")
    }

    /// Tilted self-jump law `Exp(beta - B(t))`.
    pub fn tilted_self_jump(&self, t: f64) -> JumpDist {
        JumpDist::exponential(self.beta() - self.b(t)).expect("B below beta")
    }

    pub fn stationarity(&self) -> StationarityReport {
        let beta = self.beta();
        let gamma = self.base.claim().rate();
        let displayed_factor = gamma / (gamma + self.esscher.nu);
        let delta = self.base.delta();
        let mut full_margin = f64::INFINITY;
        let mut displayed_margin = f64::INFINITY;
        for &b in self.bcurve.values() {
            let g = beta / (beta - b) / (beta - b);
            full_margin = full_margin.min(delta - self.esscher.theta * self.j_hat * g);
            displayed_margin =
                displayed_margin.min(delta - self.esscher.theta * displayed_factor * g);
        }
        StationarityReport {
            full_holds: full_margin > 0.0,
            full_margin,
            displayed_holds: displayed_margin > 0.0,
            displayed_margin,
        }
    }
}

impl ClaimDynamics for TiltedModel {
    fn lambda0(&self) -> f64 {
        self.base.lambda0()
    }

    fn delta(&self) -> f64 {
        self.base.delta()
    }

    fn level(&self, t: f64) -> f64 {
        match self.representation {
            Representation::LambdaSpace => self.base.level(),
            Representation::LambdaTildeSpace => self.multiplier(t) * self.base.level(),
        }
    }

    fn external_rate(&self, t: f64) -> f64 {
        self.rho_tilde(t)
    }

    fn external_jump(&self, t: f64) -> JumpDist {
        let d = self.tilted_external_jump(t);
        match self.representation {
            Representation::LambdaSpace => d,
            Representation::LambdaTildeSpace => {
                d.scale(self.multiplier(t)).expect("positive multiplier")
            }
        }
    }

    fn self_jump(&self, t: f64) -> JumpDist {
        let d = self.tilted_self_jump(t);
        match self.representation {
            Representation::LambdaSpace => d,
            Representation::LambdaTildeSpace => {
                d.scale(self.multiplier(t)).expect("positive multiplier")
            }
        }
    }

    fn claim(&self) -> JumpDist {
        self.claim
    }

    fn rate_multiplier(&self, t: f64) -> f64 {
        match self.representation {
            Representation::LambdaSpace => self.multiplier(t),
            Representation::LambdaTildeSpace => 1.0,
        }
    }

    fn horizon(&self) -> f64 {
        self.bcurve.horizon()
    }

    fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn nondecreasing(&self) -> bool {
        // B(t) is increasing and every parameter is increasing in B
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::esscher::solve_b;

    fn build(e: EsscherParams, repr: Representation) -> TiltedModel {
        let m = PhysicalModel::reference();
        let curve = Arc::new(solve_b(&m, &e, 1.0, 2000).unwrap());
        tilt_model(&m, &e, curve, repr).unwrap()
    }

    #[test]
    fn identity_parameters_reproduce_physical_model() {
        let m = PhysicalModel::reference();
        for repr in [
            Representation::LambdaSpace,
            Representation::LambdaTildeSpace,
        ] {
            let tm = build(EsscherParams::new(1.0, 1.0, 0.0, 1e-12), repr);
            for t in [0.0, 0.3, 1.0] {
                assert!((tm.rate_multiplier(t) - 1.0).abs() < 1e-10);
                assert!((tm.external_rate(t) - m.rho()).abs() < 1e-10);
                assert!((tm.level(t) - m.level()).abs() < 1e-10);
                assert!((tm.external_jump(t).rate() - 2.0).abs() < 1e-10);
                assert!((tm.self_jump(t).rate() - 1.0).abs() < 1e-10);
            }
            assert_eq!(tm.claim(), m.claim());
        }
    }

    #[test]
    fn table_values_at_zero() {
        let tm = build(
            EsscherParams::new(1.25, 1.25, -0.05, 1e-6),
            Representation::LambdaSpace,
        );
        let expected = 1.25 * (2.0 / (2.0 - 1e-6)) * 4.0;
        assert!((tm.rho_tilde(0.0) - expected).abs() < 1e-12);
        assert!((tm.rho_tilde(0.0) - 5.0).abs() < 1e-5);
        assert!((tm.claim().rate() - 0.35).abs() < 1e-15);
        assert!((tm.claim().mean() - 8.571428571428571).abs() < 1e-12);
    }

    #[test]
    fn scaled_rates_match_lambda_h_and_lambda_g() {
        let tm = build(EsscherParams::reference(), Representation::LambdaTildeSpace);
        let (alpha, beta, gamma, eta) = (2.0, 1.0, 0.4, 3.0);
        let (theta, nu) = (1.25, -0.05);
        for t in [0.0, 0.5, 1.0] {
            let b = tm.b(t);
            let denom = theta * (1.0f64 + nu / gamma).powf(-eta) * beta / (beta - b);
            assert!((tm.external_jump(t).rate() - (alpha - b) / denom).abs() < 1e-12);
            assert!((tm.self_jump(t).rate() - (beta - b) / denom).abs() < 1e-12);
            assert!((tm.level(t) - denom * 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parameters_nondecreasing() {
        let tm = build(EsscherParams::reference(), Representation::LambdaSpace);
        let mut prev = (0.0, 0.0);
        for k in 0..=200 {
            let t = k as f64 / 200.0;
            let cur = (tm.multiplier(t), tm.rho_tilde(t));
            assert!(cur.0 >= prev.0 && cur.1 >= prev.1);
            prev = cur;
        }
    }

    #[test]
    fn horizon_beyond_t_star_is_rejected() {
        let m = PhysicalModel::new(
            1.0,
            1.0,
            3.0,
            4.0,
            JumpDist::exponential(1.0).unwrap(),
            JumpDist::exponential(0.2).unwrap(),
            JumpDist::gamma(0.4, 3.0).unwrap(),
        )
        .unwrap();
        let e = EsscherParams::new(1.25, 1.25, -0.05, 0.1);
        let curve = Arc::new(solve_b(&m, &e, 5.0, 1000).unwrap());
        let r = tilt_model(&m, &e, curve, Representation::LambdaSpace);
        assert!(matches!(r, Err(Error::HorizonExceedsRegime { .. })));
    }

    #[test]
    fn stationarity_report_both_versions() {
        let tm = build(EsscherParams::reference(), Representation::LambdaSpace);
        let s = tm.stationarity();
        assert!(s.full_holds && s.displayed_holds);
        assert!(s.full_margin < s.displayed_margin);
        let b1 = tm.b(1.0);
        let expected = 3.0 - 1.25 * tm.j_hat() / ((1.0 - b1) * (1.0 - b1));
        assert!((s.full_margin - expected).abs() < 1e-12);
    }
}
