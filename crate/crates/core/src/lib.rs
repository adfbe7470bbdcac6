//! Compound dynamic contagion claims: simulation under the physical measure
//! and an Esscher-tilted pricing measure, first moments, and Monte Carlo
//! stop-loss reinsurance premiums.
//!
//! ```
//! use contagion::{mean_c_p, PhysicalModel};
//!
//! let m = PhysicalModel::reference();
//! let c1 = mean_c_p(1.0, &m).unwrap();
//! assert!((c1 - 13.8863).abs() < 1e-4);
//! ```

pub mod config;
pub mod distributions;
pub mod dynamics;
pub mod error;
pub mod esscher;
pub mod model;
pub mod moments;
pub mod pricing;
pub mod quadrature;
pub mod simulate;

pub use config::{OutputFormat, RunConfig};
pub use distributions::{JumpDist, JumpKind};
pub use dynamics::ClaimDynamics;
pub use error::{Error, ErrorKind, Result};
pub use esscher::{
    b_plus, classify_regime, f1, g_of_b, martingale_statistic, solve_b, solve_k, tilt_model,
    BCurve, KCurve, Regime, Representation, TiltedModel,
};
pub use model::{EsscherParams, PhysicalModel};
pub use moments::{
    mean_c_inhom, mean_c_p, mean_c_star, mean_lambda_inhom, mean_lambda_p, mean_lambda_star,
    mean_n_inhom, mean_n_p, mean_n_star, Measure, MomentReport,
};
pub use pricing::{
    premium_table, sensitivity_sweep, stop_loss_premium, MarketModel, PremiumEstimate, SweepParam,
    SweepReport,
};
pub use simulate::{
    sample_inhomogeneous_poisson, simulate_cdcp, PathStream, SimPath, SimSettings, Simulator,
};

/// Formats `x` with 9 significant digits, switching to scientific notation
/// for very large or very small magnitudes. Output never depends on locale.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
