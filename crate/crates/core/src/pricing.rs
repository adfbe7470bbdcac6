//! Crude Monte Carlo stop-loss premiums `E[(C_t - L)^+]` under the physical
//! and the tilted measure, premium tables over retentions and sensitivity
//! sweeps over the tilting parameters.
//!
//! All estimators use common random numbers: the same seed and path indices
//! are reused across retentions and across swept parameter values.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dynamics::ClaimDynamics;
use crate::error::{Error, ErrorKind, Result};
use crate::esscher::{
    solve_b, tilt_model, BCurve, Representation, StationarityReport, TiltedModel,
};
use crate::model::{EsscherParams, PhysicalModel};
use crate::moments::{mean_c_p, mean_c_star, Measure};
use crate::quadrature::pairwise_sum;
use crate::simulate::{SimSettings, Simulator};

/// Normal quantile for two-sided 95% intervals.
pub const Z95: f64 = 1.96;

/// Default B-curve resolution, grid points per unit of horizon.
pub const DEFAULT_GRID_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PremiumEstimate {
    pub value: f64,
    pub stderr: f64,
    pub ci95: [f64; 2],
    pub n_paths: usize,
    pub seed: u64,
    pub measure: Measure,
    pub retention: f64,
    pub horizon: f64,
}

impl PremiumEstimate {
    /// Sample mean and standard error of `payoffs`.
    pub fn from_payoffs(
        payoffs: &[f64],
        seed: u64,
        measure: Measure,
        retention: f64,
        horizon: f64,
    ) -> Result<Self> {
        let n = payoffs.len();
        if n < 2 {
            return Err(Error::InsufficientPaths(n));
        }
        let value = pairwise_sum(payoffs) / n as f64;
        let dev: Vec<f64> = payoffs.iter().map(|x| (x - value) * (x - value)).collect();
        let var = pairwise_sum(&dev) / (n - 1) as f64;
        let stderr = (var / n as f64).sqrt();
        Ok(PremiumEstimate {
            value,
            stderr,
            ci95: [value - Z95 * stderr, value + Z95 * stderr],
            n_paths: n,
            seed,
            measure,
            retention,
            horizon,
        })
    }
}

fn check_retention(l: f64) -> Result<()> {
    if l.is_finite() && l >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "retention must be >= 0, got {l}"
        )))
    }
}

/// `C_t` on paths `0..n_paths` of `seed`.
pub fn simulate_claims(
    model: &dyn ClaimDynamics,
    settings: SimSettings,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n_paths < 2 {
        return Err(Error::InsufficientPaths(n_paths));
    }
    Simulator::new(model, settings)?.map_paths(seed, n_paths, |p| p.total_claims())
}

/// Premium estimate from already simulated claim totals.
pub fn premium_from_claims(
    claims: &[f64],
    retention: f64,
    seed: u64,
    measure: Measure,
    horizon: f64,
) -> Result<PremiumEstimate> {
    check_retention(retention)?;
    let payoffs: Vec<f64> = claims.iter().map(|c| (c - retention).max(0.0)).collect();
    PremiumEstimate::from_payoffs(&payoffs, seed, measure, retention, horizon)
}

pub fn stop_loss_premium(
    model: &dyn ClaimDynamics,
    measure: Measure,
    retention: f64,
    settings: SimSettings,
    n_paths: usize,
    seed: u64,
) -> Result<PremiumEstimate> {
    check_retention(retention)?;
    let claims = simulate_claims(model, settings, n_paths, seed)?;
    premium_from_claims(&claims, retention, seed, measure, settings.horizon)
}

/// One estimate per retention, all from the same simulated paths.
pub fn premium_table(
    model: &dyn ClaimDynamics,
    measure: Measure,
    retentions: &[f64],
    settings: SimSettings,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<PremiumEstimate>> {
    if retentions.is_empty() {
        return Ok(Vec::new());
    }
    for &l in retentions {
        check_retention(l)?;
    }
    let claims = simulate_claims(model, settings, n_paths, seed)?;
    retentions
        .iter()
        .map(|&l| premium_from_claims(&claims, l, seed, measure, settings.horizon))
        .collect()
}

/// Physical model together with its tilted counterpart over a horizon.
#[derive(Debug, Clone)]
pub struct MarketModel {
    physical: PhysicalModel,
    esscher: EsscherParams,
    tilted: TiltedModel,
}

impl MarketModel {
    /// Solves the B-curve on `grid_points` points per unit horizon and builds
    /// the tilted model.
    pub fn new(
        physical: PhysicalModel,
        esscher: EsscherParams,
        horizon: f64,
        grid_points: usize,
        representation: Representation,
    ) -> Result<Self> {
        esscher.validate(&physical)?;
        if grid_points < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be >= 3, got {grid_points}"
            )));
        }
        let n = (((grid_points - 1) as f64 * horizon).round() as usize).max(2);
        let curve = Arc::new(solve_b(&physical, &esscher, horizon, n)?);
        let tilted = tilt_model(&physical, &esscher, curve, representation)?;
        Ok(MarketModel {
            physical,
            esscher,
            tilted,
        })
    }

    pub fn physical(&self) -> &PhysicalModel {
        &self.physical
    }

    pub fn esscher(&self) -> &EsscherParams {
        &self.esscher
    }

    pub fn tilted(&self) -> &TiltedModel {
        &self.tilted
    }

    pub fn bcurve(&self) -> &BCurve {
        self.tilted.bcurve()
    }

    pub fn horizon(&self) -> f64 {
        self.tilted.horizon()
    }

    pub fn stationarity(&self) -> StationarityReport {
        self.tilted.stationarity()
    }

    pub fn dynamics(&self, measure: Measure) -> &dyn ClaimDynamics {
        match measure {
            Measure::P => &self.physical,
            Measure::Pstar => &self.tilted,
        }
    }

    /// `E[C_t]` or `E*[C_t]`.
    pub fn analytic_mean(&self, measure: Measure, t: f64) -> Result<f64> {
        match measure {
            Measure::P => mean_c_p(t, &self.physical),
            Measure::Pstar => mean_c_star(t, &self.tilted),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "psi")]
    Psi,
    #[serde(rename = "nu")]
    Nu,
    #[serde(rename = "L")]
    Retention,
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepParam::Theta => "theta",
            SweepParam::Psi => "psi",
            SweepParam::Nu => "nu",
            SweepParam::Retention => "L",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub settings: SimSettings,
    pub n_paths: usize,
    pub seed: u64,
    pub grid_points: usize,
    pub representation: Representation,
    /// Retention of the excess-of-loss column when sweeping tilting parameters.
    pub retention: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    /// Quadrature `E*[C_t]`.
    pub analytic: f64,
    /// Monte Carlo `E*[C_t]`.
    pub mean: PremiumEstimate,
    /// Monte Carlo `E*[(C_t - L)^+]`.
    pub excess: PremiumEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedValue {
    pub value: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub param: SweepParam,
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<SkippedValue>,
}

/// Re-solves the tilted model for every value of `param` and reports the
/// analytic mean, the Monte Carlo mean and the Monte Carlo excess premium.
/// Values that violate a parameter constraint or regime condition are
/// skipped with the reason; numerical failures abort the sweep.
pub fn sensitivity_sweep(
    physical: &PhysicalModel,
    esscher: &EsscherParams,
    param: SweepParam,
    values: &[f64],
    opts: &SweepOptions,
) -> Result<SweepReport> {
    let horizon = opts.settings.horizon;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut cached: Option<(MarketModel, Vec<f64>)> = None;
    for &v in values {
        let mut e = *esscher;
        let mut retention = opts.retention;
        match param {
            SweepParam::Theta => e.theta = v,
            SweepParam::Psi => e.psi = v,
            SweepParam::Nu => e.nu = v,
            SweepParam::Retention => retention = v,
        }
        let attempt = (|| -> Result<SweepRow> {
            check_retention(retention)?;
            let reuse = param == SweepParam::Retention && cached.is_some();
            if !reuse {
                let market =
                    MarketModel::new(*physical, e, horizon, opts.grid_points, opts.representation)?;
                let claims =
                    simulate_claims(market.tilted(), opts.settings, opts.n_paths, opts.seed)?;
                cached = Some((market, claims));
            }
            let (market, claims) = cached.as_ref().expect("filled above");
            Ok(SweepRow {
                value: v,
                analytic: market.analytic_mean(Measure::Pstar, horizon)?,
                mean: premium_from_claims(claims, 0.0, opts.seed, Measure::Pstar, horizon)?,
                excess: premium_from_claims(claims, retention, opts.seed, Measure::Pstar, horizon)?,
            })
        })();
        match attempt {
            Ok(row) => rows.push(row),
            Err(err) if err.kind() != ErrorKind::Numerical => skipped.push(SkippedValue {
                value: v,
                reason: err.to_string(),
            }),
            Err(err) => return Err(err),
        }
    }
    Ok(SweepReport {
        param,
        rows,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n_paths: usize) -> SweepOptions {
        SweepOptions {
            settings: SimSettings::new(1.0, 0.1).unwrap(),
            n_paths,
            seed: 5,
            grid_points: 501,
            representation: Representation::LambdaTildeSpace,
            retention: 25.0,
        }
    }

    #[test]
    fn estimate_statistics() {
        let e =
            PremiumEstimate::from_payoffs(&[1.0, 2.0, 3.0, 4.0], 0, Measure::P, 0.0, 1.0).unwrap();
        assert_eq!(e.value, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((e.stderr - sd / 2.0).abs() < 1e-15);
        assert!((e.ci95[1] - e.value - 1.96 * e.stderr).abs() < 1e-15);
        assert!(matches!(
            PremiumEstimate::from_payoffs(&[1.0], 0, Measure::P, 0.0, 1.0),
            Err(Error::InsufficientPaths(1))
        ));
    }

    #[test]
    fn table_uses_common_paths() {
        let m = PhysicalModel::reference();
        let s = SimSettings::new(1.0, 0.1).unwrap();
        let t = premium_table(&m, Measure::P, &[0.0, 25.0, 25.0, 1e6], s, 500, 1).unwrap();
        assert_eq!(t[1], t[2]);
        assert_eq!(t[3].value, 0.0);
        assert_eq!(t[3].stderr, 0.0);
        assert!(t[0].value >= t[1].value);
        assert!(premium_table(&m, Measure::P, &[], s, 500, 1)
            .unwrap()
            .is_empty());
        assert!(premium_table(&m, Measure::P, &[-1.0], s, 500, 1).is_err());
    }

    #[test]
    fn sweep_skips_invalid_values() {
        let m = PhysicalModel::reference();
        let r = sensitivity_sweep(
            &m,
            &EsscherParams::reference(),
            SweepParam::Nu,
            &[-0.05, -0.4],
            &opts(200),
        )
        .unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.skipped.len(), 1);
        assert!(r.skipped[0].reason.contains("nu"));
    }

    #[test]
    fn retention_sweep_reuses_paths() {
        let m = PhysicalModel::reference();
        let r = sensitivity_sweep(
            &m,
            &EsscherParams::reference(),
            SweepParam::Retention,
            &[0.0, 25.0, 50.0],
            &opts(300),
        )
        .unwrap();
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.rows[0].mean, r.rows[2].mean);
        assert_eq!(r.rows[0].excess.value, r.rows[0].mean.value);
        assert!(r.rows[1].excess.value >= r.rows[2].excess.value);
    }
}
