use serde::{Deserialize, Serialize};

use crate::distributions::JumpDist;
use crate::error::{check_positive, Error, Result};

/// Time-homogeneous compound dynamic contagion model under the physical
/// measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhysicalModelSpec", into = "PhysicalModelSpec")]
pub struct PhysicalModel {
    lambda0: f64,
    level: f64,
    delta: f64,
    rho: f64,
    self_jump: JumpDist,
    external_jump: JumpDist,
    claim: JumpDist,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhysicalModelSpec {
    pub lambda0: f64,
    pub a: f64,
    pub delta: f64,
    pub rho: f64,
    pub self_jump: JumpDist,
    pub external_jump: JumpDist,
    pub claim: JumpDist,
}

impl TryFrom<PhysicalModelSpec> for PhysicalModel {
    type Error = Error;

    fn try_from(s: PhysicalModelSpec) -> Result<Self> {
        PhysicalModel::new(
            s.lambda0,
            s.a,
            s.delta,
            s.rho,
            s.self_jump,
            s.external_jump,
            s.claim,
        )
    }
}

impl From<PhysicalModel> for PhysicalModelSpec {
    fn from(m: PhysicalModel) -> Self {
        PhysicalModelSpec {
            lambda0: m.lambda0,
            a: m.level,
            delta: m.delta,
            rho: m.rho,
            self_jump: m.self_jump,
            external_jump: m.external_jump,
            claim: m.claim,
        }
    }
}

impl PhysicalModel {
    pub fn new(
        lambda0: f64,
        level: f64,
        delta: f64,
        rho: f64,
        self_jump: JumpDist,
        external_jump: JumpDist,
        claim: JumpDist,
    ) -> Result<Self> {
        for (name, v) in [("lambda0", lambda0), ("a", level), ("rho", rho)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        check_positive("delta", delta)?;
        Ok(PhysicalModel {
            lambda0,
            level,
            delta,
            rho,
            self_jump,
            external_jump,
            claim,
        })
    }

    /// The numerical setting of the reinsurance example: H ~ Exp(2),
    /// G ~ Exp(1), J ~ Gamma(rate 0.4, shape 3), delta = 3, rho = 4, a = 1,
    /// lambda0 = 1.
    pub fn reference() -> Self {
        PhysicalModel::new(
            1.0,
            1.0,
            3.0,
            4.0,
            JumpDist::exponential(1.0).unwrap(),
            JumpDist::exponential(2.0).unwrap(),
            JumpDist::gamma(0.4, 3.0).unwrap(),
        )
        .unwrap()
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }
    pub fn level(&self) -> f64 {
        self.level
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn self_jump(&self) -> JumpDist {
        self.self_jump
    }
    pub fn external_jump(&self) -> JumpDist {
        self.external_jump
    }
    pub fn claim(&self) -> JumpDist {
        self.claim
    }

    /// `delta - mu_G`.
    pub fn kappa(&self) -> f64 {
        self.delta - self.self_jump.mean()
    }

    pub fn is_stationary(&self) -> bool {
        self.kappa() > 0.0
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Result<Self> {
        if !(lambda0.is_finite() && lambda0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda0 must be >= 0, got {lambda0}"
            )));
        }
        self.lambda0 = lambda0;
        Ok(self)
    }

    pub fn with_level(mut self, level: f64) -> Result<Self> {
        if !(level.is_finite() && level >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "a must be >= 0, got {level}"
            )));
        }
        self.level = level;
        Ok(self)
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rho must be >= 0, got {rho}"
            )));
        }
        self.rho = rho;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        check_positive("delta", delta)?;
        self.delta = delta;
        Ok(self)
    }

    pub fn with_self_jump(mut self, d: JumpDist) -> Self {
        self.self_jump = d;
        self
    }
}

/// Esscher tilting parameters. `phi` is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsscherParams {
    pub theta: f64,
    pub psi: f64,
    pub nu: f64,
    /// Initial condition `B(0)`.
    pub b: f64,
}

impl EsscherParams {
    pub fn new(theta: f64, psi: f64, nu: f64, b: f64) -> Self {
        EsscherParams { theta, psi, nu, b }
    }

    /// theta = psi = 1.25, nu = -0.05, b = 0.01.
    pub fn reference() -> Self {
        EsscherParams::new(1.25, 1.25, -0.05, 0.01)
    }

    /// Checks the constraints that involve the claim law: `theta, psi >= 1`,
    /// `nu` in `(-gamma, 0]`, `b > 0`.
    pub fn validate(&self, m: &PhysicalModel) -> Result<()> {
        if !(self.theta >= 1.0 && self.theta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "theta must be >= 1, got {}",
                self.theta
            )));
        }
        if !(self.psi >= 1.0 && self.psi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "psi must be >= 1, got {}",
                self.psi
            )));
        }
        check_positive("b", self.b)?;
        m.claim().tilt_claim(self.nu).map(|_| ())
    }

    /// `j_hat(nu)`, the claim Laplace transform at `nu`.
    pub fn j_hat(&self, m: &PhysicalModel) -> Result<f64> {
        m.claim().laplace(self.nu)
    }

    /// `phi = -(theta j_hat(nu) - 1)`.
    pub fn phi(&self, m: &PhysicalModel) -> Result<f64> {
        Ok(-(self.theta * self.j_hat(m)? - 1.0))
    }
}
