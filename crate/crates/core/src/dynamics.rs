//! Time-dependent parameter view shared by the simulator and the moment
//! routines.
//!
//! A model is described by its initial intensity, the decay rate, a
//! mean-reversion level `a(t)`, an external arrival rate `rho(t)`, jump laws
//! that may depend on time, a claim law and an event-rate multiplier `c(t)`.
//! The event intensity is `c(t) * lambda_t`; physical models have `c = 1`.

use crate::distributions::JumpDist;
use crate::model::PhysicalModel;

pub trait ClaimDynamics: Sync {
    fn lambda0(&self) -> f64;
    fn delta(&self) -> f64;
    fn level(&self, t: f64) -> f64;
    fn external_rate(&self, t: f64) -> f64;
    fn external_jump(&self, t: f64) -> JumpDist;
    fn self_jump(&self, t: f64) -> JumpDist;
    fn claim(&self) -> JumpDist;

    fn rate_multiplier(&self, _t: f64) -> f64 {
        1.0
    }

    /// Largest time at which the parameter functions are defined.
    fn horizon(&self) -> f64 {
        f64::INFINITY
    }

    /// Grid on which the parameter functions are known to be piecewise
    /// monotone. Empty for constant parameters.
    fn knots(&self) -> &[f64] {
        &[]
    }

    /// True when `a`, `rho` and `c` are nondecreasing in time, so their
    /// supremum over a window is the value at its right end.
    fn nondecreasing(&self) -> bool {
        self.knots().is_empty()
    }

    /// Supremum of `f` over `[s, e]` using the monotonicity contract above.
    fn sup_over(&self, f: &dyn Fn(f64) -> f64, s: f64, e: f64) -> f64 {
        if self.nondecreasing() {
            return f(e).max(f(s));
        }
        let knots = self.knots();
        let lo = knots.partition_point(|&k| k <= s);
        let hi = knots.partition_point(|&k| k < e);
        knots[lo..hi]
            .iter()
            .fold(f(s).max(f(e)), |acc, &k| acc.max(f(k)))
    }
}

impl ClaimDynamics for PhysicalModel {
    fn lambda0(&self) -> f64 {
        PhysicalModel::lambda0(self)
    }
    fn delta(&self) -> f64 {
        PhysicalModel::delta(self)
    }
    fn level(&self, _t: f64) -> f64 {
        PhysicalModel::level(self)
    }
    fn external_rate(&self, _t: f64) -> f64 {
        self.rho()
    }
    fn external_jump(&self, _t: f64) -> JumpDist {
        PhysicalModel::external_jump(self)
    }
    fn self_jump(&self, _t: f64) -> JumpDist {
        PhysicalModel::self_jump(self)
    }
    fn claim(&self) -> JumpDist {
        PhysicalModel::claim(self)
    }
}
