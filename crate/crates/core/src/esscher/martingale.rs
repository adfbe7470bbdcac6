use serde::Serialize;

use super::bcurve::{BCurve, KCurve};
use crate::error::{Error, Result};
use crate::model::{EsscherParams, PhysicalModel};
use crate::simulate::SimPath;

/// Largest argument of `exp` that stays finite in `f64`.
const LOG_MAX: f64 = 709.78;

/// `e^{K(t)} theta^{N_t} e^{B(t) lambda_t} e^{-nu C_t} e^{phi Lambda_t} psi^{M_t}`
/// held in log form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MartingaleStatistic {
    pub t: f64,
    pub log_value: f64,
}

impl MartingaleStatistic {
    pub fn value(&self) -> Result<f64> {
        if self.log_value > LOG_MAX {
            return Err(Error::Overflow {
                log_value: self.log_value,
            });
        }
        Ok(self.log_value.exp())
    }
}

/// Evaluates the density-process statistic on a path simulated under the
/// physical measure. Dividing by its value at 0, `e^{b lambda0}`, gives the
/// Radon-Nikodym density of the tilted measure.
pub fn martingale_statistic(
    path: &SimPath,
    bcurve: &BCurve,
    kcurve: &KCurve,
    m: &PhysicalModel,
    e: &EsscherParams,
    t: f64,
) -> Result<MartingaleStatistic> {
    if t > bcurve.horizon() * (1.0 + 1e-12) {
        return Err(Error::OutOfHorizon {
            t,
            horizon: bcurve.horizon(),
        });
    }
    let n = path.count_at(t)? as f64;
    let mm = path.external_count_at(t)? as f64;
    let log_value = kcurve.eval(t)? + n * e.theta.ln() + bcurve.eval(t) * path.lambda_at(t)?
        - e.nu * path.claims_at(t)?
        + e.phi(m)? * path.lambda_integral(t)?
        + mm * e.psi.ln();
    if !log_value.is_finite() {
        return Err(Error::Overflow { log_value });
    }
    Ok(MartingaleStatistic { t, log_value })
}
