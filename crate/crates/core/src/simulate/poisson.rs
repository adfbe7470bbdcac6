use rand::Rng;

use crate::error::{Error, Result};

/// Grid size of the scan that bounds the rate.
pub const RATE_SCAN_POINTS: usize = 1000;

/// Safety factor applied to the scanned maximum.
pub const BOUND_SAFETY: f64 = 1.0 + 1e-12;

/// Event times of an inhomogeneous Poisson process on `[0, horizon]` by
/// thinning a homogeneous process at rate `rho_max`, where `rho_max` is the
/// maximum of `rate` over a uniform scan of the interval times a safety
/// factor. The scan bound is exact for rates that are monotone or convex
/// between scan points; a candidate whose rate exceeds it is reported as
/// [`Error::DominationViolated`] instead of being silently thinned.
pub fn sample_inhomogeneous_poisson<F, R>(horizon: f64, rate: F, rng: &mut R) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    R: Rng + ?Sized,
{
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be >= 0, got {horizon}"
        )));
    }
    let mut rho_max: f64 = 0.0;
    for i in 0..=RATE_SCAN_POINTS {
        let r = rate(horizon * i as f64 / RATE_SCAN_POINTS as f64);
        if !r.is_finite() || r < 0.0 {
            return Err(Error::UnboundedRate { horizon });
        }
        rho_max = rho_max.max(r);
    }
    rho_max *= BOUND_SAFETY;
    let mut out = Vec::new();
    if rho_max == 0.0 {
        return Ok(out);
    }
    let mut t = 0.0;
    loop {
        let u: f64 = rng.random();
        t += -(1.0 - u).ln() / rho_max;
        if t > horizon {
            return Ok(out);
        }
        let r = rate(t);
        if r > rho_max {
            return Err(Error::DominationViolated {
                t,
                intensity: r,
                bound: rho_max,
            });
        }
        if rng.random::<f64>() * rho_max < r {
            out.push(t);
        }
    }
}
