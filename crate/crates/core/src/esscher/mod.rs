//! Esscher change of measure: the `B(t)`/`K(t)` ODEs, parameter regimes,
//! the tilted model and the density-process statistic.

mod bcurve;
mod martingale;
mod tilted;

pub use bcurve::{
    b_plus, b_plus_by_bisection, classify_regime, f1, g_of_b, invert_g, solve_b, solve_k, BCurve,
    KCurve, Regime, SELF_CONSISTENCY_TOL,
};
pub use martingale::{martingale_statistic, MartingaleStatistic};
pub use tilted::{tilt_model, Representation, StationarityReport, TiltedModel};
