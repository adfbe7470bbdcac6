//! JSON run configuration. Every field has a default; the defaults are the
//! reference reinsurance setting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::esscher::Representation;
use crate::model::{EsscherParams, PhysicalModel};
use crate::pricing::{MarketModel, SweepOptions, SweepParam, DEFAULT_GRID_POINTS};
use crate::simulate::{SimSettings, DEFAULT_DT_MAX, DEFAULT_LAYER_HEIGHT};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_N_PATHS: usize = 10_000;
pub const TABLE_RETENTIONS: [f64; 6] = [0.0, 25.0, 38.15, 50.0, 75.0, 100.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "PhysicalModel::reference")]
    pub model: PhysicalModel,
    #[serde(default)]
    pub esscher: EsscherBlock,
    #[serde(default)]
    pub run: RunBlock,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: PhysicalModel::reference(),
            esscher: EsscherBlock::default(),
            run: RunBlock::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EsscherBlock {
    pub theta: f64,
    pub psi: f64,
    pub nu: f64,
    pub b: f64,
    /// B-curve grid points per unit horizon.
    pub grid_points: usize,
    pub representation: Representation,
}

impl Default for EsscherBlock {
    fn default() -> Self {
        let e = EsscherParams::reference();
        EsscherBlock {
            theta: e.theta,
            psi: e.psi,
            nu: e.nu,
            b: e.b,
            grid_points: DEFAULT_GRID_POINTS,
            representation: Representation::default(),
        }
    }
}

impl EsscherBlock {
    pub fn params(&self) -> EsscherParams {
        EsscherParams::new(self.theta, self.psi, self.nu, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunBlock {
    /// Horizon in years.
    pub t: f64,
    pub dt_max: f64,
    pub layer_height: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub retentions: Vec<f64>,
    /// Retention of the excess column in sweeps over tilting parameters.
    pub sweep_retention: f64,
    pub sweep: Vec<SweepSpec>,
    /// Paths written by `simulate`.
    pub log_paths: usize,
    /// Trajectory samples per path written by `simulate`.
    pub trajectory_points: usize,
    pub out_dir: Option<String>,
    pub format: OutputFormat,
}

impl Default for RunBlock {
    fn default() -> Self {
        RunBlock {
            t: 1.0,
            dt_max: DEFAULT_DT_MAX,
            layer_height: DEFAULT_LAYER_HEIGHT,
            n_paths: DEFAULT_N_PATHS,
            seed: DEFAULT_SEED,
            retentions: TABLE_RETENTIONS.to_vec(),
            sweep_retention: 25.0,
            sweep: table_sweeps(),
            log_paths: 5,
            trajectory_points: 501,
            out_dir: None,
            format: OutputFormat::Csv,
        }
    }
}

/// The three tilting-parameter sweeps plus the retention sweep.
pub fn table_sweeps() -> Vec<SweepSpec> {
    vec![
        SweepSpec {
            param: SweepParam::Theta,
            values: vec![1.0, 1.25, 1.5, 1.75],
        },
        SweepSpec {
            param: SweepParam::Psi,
            values: vec![1.0, 1.25, 1.5, 1.75],
        },
        SweepSpec {
            param: SweepParam::Nu,
            values: vec![-0.01, -0.05, -0.08, -0.1],
        },
    ]
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn esscher_params(&self) -> EsscherParams {
        self.esscher.params()
    }

    pub fn settings(&self) -> Result<SimSettings> {
        let s = SimSettings {
            horizon: self.run.t,
            dt_max: self.run.dt_max,
            layer_height: self.run.layer_height,
        };
        s.validate()?;
        Ok(s)
    }

    /// Re-checks every cross-field constraint, solving the B-curve to confirm
    /// the regime covers the horizon.
    pub fn validate(&self) -> Result<()> {
        self.settings()?;
        if self.run.n_paths < 2 {
            return Err(Error::InsufficientPaths(self.run.n_paths));
        }
        for &l in &self.run.retentions {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "retention must be >= 0, got {l}"
                )));
            }
        }
        if !(self.run.sweep_retention.is_finite() && self.run.sweep_retention >= 0.0) {
            return Err(Error::InvalidParameter(
                "sweep_retention must be >= 0".into(),
            ));
        }
        self.market().map(|_| ())
    }

    pub fn market(&self) -> Result<MarketModel> {
        MarketModel::new(
            self.model,
            self.esscher_params(),
            self.run.t,
            self.esscher.grid_points,
            self.esscher.representation,
        )
    }

    pub fn sweep_options(&self) -> Result<SweepOptions> {
        Ok(SweepOptions {
            settings: self.settings()?,
            n_paths: self.run.n_paths,
            seed: self.run.seed,
            grid_points: self.esscher.grid_points,
            representation: self.esscher.representation,
            retention: self.run.sweep_retention,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_reference_setting() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.model, PhysicalModel::reference());
        assert_eq!(cfg.esscher_params(), EsscherParams::reference());
        assert_eq!(cfg.run.n_paths, 10_000);
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn partial_blocks_fill_defaults() {
        let cfg =
            RunConfig::from_json(r#"{"esscher": {"theta": 1.5}, "run": {"n_paths": 50}}"#).unwrap();
        assert_eq!(cfg.esscher.theta, 1.5);
        assert_eq!(cfg.esscher.psi, 1.25);
        assert_eq!(cfg.run.n_paths, 50);
        assert_eq!(cfg.run.t, 1.0);
    }

    #[test]
    fn cross_field_violations() {
        for bad in [
            r#"{"esscher": {"nu": -0.5}}"#,
            r#"{"esscher": {"theta": 0.5}}"#,
            r#"{"esscher": {"theta": 3.0}}"#,
            r#"{"run": {"n_paths": 1}}"#,
            r#"{"run": {"retentions": [-1]}}"#,
            r#"{"run": {"t": 0}}"#,
            r#"{"model": {"lambda0": 1, "a": 1, "delta": -3, "rho": 4,
                "self_jump": {"kind": "exponential", "rate": 1},
                "external_jump": {"kind": "exponential", "rate": 2},
                "claim": {"kind": "gamma", "rate": 0.4, "shape": 3}}}"#,
            r#"{"unknown": 1}"#,
        ] {
            assert!(RunConfig::from_json(bad).is_err(), "{bad}");
        }
    }
}
