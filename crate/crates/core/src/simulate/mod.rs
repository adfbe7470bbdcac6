//! Path simulation of the compound dynamic contagion process by thinning.
//!
//! External events are points of a unit-rate Poisson random measure lying
//! below `rho(t)`; self-excited events are points lying below the event rate
//! `c(t) lambda_{t-}`, found window by window against a dominating bound.
//! Intensity marks and claims are drawn from generators keyed by the
//! accepted point, so common random numbers couple runs across parameter
//! values.

mod baseline;
mod layers;
mod path;
mod poisson;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use baseline::Baseline;
pub use layers::PathStream;
pub use path::{EventKind, EventRecord, ExternalEvent, SelfEvent, SimPath, TrajectoryPoint};
pub use poisson::{sample_inhomogeneous_poisson, BOUND_SAFETY, RATE_SCAN_POINTS};

use crate::dynamics::ClaimDynamics;
use crate::error::{Error, Result};
use layers::{mark_rng, LayeredMeasure, Point};

pub const DEFAULT_DT_MAX: f64 = 0.1;
pub const DEFAULT_LAYER_HEIGHT: f64 = 1.0;

const EXTERNAL_LAYERS: u64 = 0;
const SELF_LAYERS: u64 = 1;
const MARK_STREAM: u64 = 0;
const CLAIM_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub horizon: f64,
    /// Longest look-ahead window of the self-event thinning.
    pub dt_max: f64,
    /// Height of one band of the driving Poisson measure.
    pub layer_height: f64,
}

impl SimSettings {
    pub fn new(horizon: f64, dt_max: f64) -> Result<Self> {
        let s = SimSettings {
            horizon,
            dt_max,
            layer_height: DEFAULT_LAYER_HEIGHT,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be > 0, got {}",
                self.horizon
            )));
        }
        if !(self.dt_max.is_finite() && self.dt_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt_max must be > 0, got {}",
                self.dt_max
            )));
        }
        if !(self.layer_height.is_finite() && self.layer_height > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "layer_height must be > 0, got {}",
                self.layer_height
            )));
        }
        Ok(())
    }
}

/// Reusable simulator for one model and horizon.
pub struct Simulator<'a> {
    model: &'a dyn ClaimDynamics,
    settings: SimSettings,
    baseline: Arc<Baseline>,
    rho_max: f64,
}

impl<'a> Simulator<'a> {
    pub fn new(model: &'a dyn ClaimDynamics, settings: SimSettings) -> Result<Self> {
        settings.validate()?;
        let horizon = settings.horizon;
        if horizon > model.horizon() * (1.0 + 1e-12) {
            return Err(Error::OutOfHorizon {
                t: horizon,
                horizon: model.horizon(),
            });
        }
        let rho_max = model.sup_over(&|t| model.external_rate(t), 0.0, horizon) * BOUND_SAFETY;
        if !rho_max.is_finite() {
            return Err(Error::UnboundedRate { horizon });
        }
        Ok(Simulator {
            model,
            settings,
            baseline: Arc::new(Baseline::new(model, horizon)),
            rho_max,
        })
    }

    pub fn settings(&self) -> SimSettings {
        self.settings
    }

    fn external_events(&self, stream: PathStream) -> Result<Vec<ExternalEvent>> {
        let model = self.model;
        let mut measure = LayeredMeasure::new(
            stream,
            EXTERNAL_LAYERS,
            self.settings.horizon,
            self.settings.layer_height,
        );
        let mut cand = Vec::new();
        let bands = measure.bands_below(self.rho_max);
        measure.window(bands, f64::NEG_INFINITY, self.settings.horizon, &mut cand);
        let mut out = Vec::new();
        for p in cand {
            let r = model.external_rate(p.t);
            if r > self.rho_max {
                return Err(Error::DominationViolated {
                    t: p.t,
                    intensity: r,
                    bound: self.rho_max,
                });
            }
            if p.h < r {
                let mark = model
                    .external_jump(p.t)
                    .sample(&mut mark_rng(p.key, MARK_STREAM));
                out.push(ExternalEvent { time: p.t, mark });
            }
        }
        Ok(out)
    }

    /// Simulates one path.
    pub fn path(&self, stream: PathStream) -> Result<SimPath> {
        let model = self.model;
        let horizon = self.settings.horizon;
        let delta = model.delta();
        let baseline = &self.baseline;
        let external = self.external_events(stream)?;

        let mut measure =
            LayeredMeasure::new(stream, SELF_LAYERS, horizon, self.settings.layer_height);
        let mut cand: Vec<Point> = Vec::new();
        let mut own = Vec::new();
        // state at time s: decayed external and self-excited contributions,
        // with external events [0, ie) already folded into ext_s
        let mut s = 0.0;
        let mut ext_s = 0.0;
        let mut ie = 0;
        let mut hk = 0.0;
        let ext_before = |ie: usize, tau: f64, strict: bool| -> f64 {
            external[ie..]
                .iter()
                .take_while(|x| if strict { x.time < tau } else { x.time <= tau })
                .map(|x| x.mark * (-delta * (tau - x.time)).exp())
                .sum()
        };
        while s < horizon {
            let e = (s + self.settings.dt_max).min(horizon);
            let ext_window: f64 = external[ie..]
                .iter()
                .take_while(|x| x.time <= e)
                .map(|x| x.mark)
                .sum();
            let c_sup = model.sup_over(&|t| model.rate_multiplier(t), s, e);
            let d_sup = baseline.value(s).max(baseline.level_sup(s, e));
            let bound = c_sup * (d_sup + ext_s + ext_window + hk) * BOUND_SAFETY;
            if !bound.is_finite() {
                return Err(Error::UnboundedRate { horizon });
            }
            measure.window(measure.bands_below(bound), s, e, &mut cand);

            let mut accepted = None;
            for p in &cand {
                let tau = p.t;
                let decay = (-delta * (tau - s)).exp();
                let ext_now = ext_s * decay + ext_before(ie, tau, true);
                let lambda = baseline.value(tau) + ext_now + hk * decay;
                let rate = model.rate_multiplier(tau) * lambda;
                if rate > bound {
                    return Err(Error::DominationViolated {
                        t: tau,
                        intensity: rate,
                        bound,
                    });
                }
                if p.h < rate {
                    accepted = Some((*p, decay, ext_now, lambda, rate));
                    break;
                }
            }

            match accepted {
                Some((p, decay, ext_now, lambda, rate)) => {
                    let mark = model
                        .self_jump(p.t)
                        .sample(&mut mark_rng(p.key, MARK_STREAM));
                    let claim = model.claim().sample(&mut mark_rng(p.key, CLAIM_STREAM));
                    own.push(SelfEvent {
                        time: p.t,
                        mark,
                        claim,
                        intensity: lambda,
                        rate,
                    });
                    hk = hk * decay + mark;
                    ext_s = ext_now;
                    while ie < external.len() && external[ie].time < p.t {
                        ie += 1;
                    }
                    s = p.t;
                }
                None => {
                    let decay = (-delta * (e - s)).exp();
                    ext_s = ext_s * decay + ext_before(ie, e, false);
                    while ie < external.len() && external[ie].time <= e {
                        ie += 1;
                    }
                    hk *= decay;
                    s = e;
                }
            }
        }

        Ok(SimPath {
            horizon,
            delta,
            baseline: Arc::clone(baseline),
            external,
            self_events: own,
        })
    }

    /// Applies `f` to paths `0..n` of `seed` in parallel; results are in
    /// path order and do not depend on the number of worker threads.
    pub fn map_paths<T, F>(&self, seed: u64, n: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&SimPath) -> T + Sync,
    {
        (0..n as u64)
            .into_par_iter()
            .map(|i| self.path(PathStream::new(seed, i)).map(|p| f(&p)))
            .collect()
    }

    pub fn paths(&self, seed: u64, n: usize) -> Result<Vec<SimPath>> {
        (0..n as u64)
            .into_par_iter()
            .map(|i| self.path(PathStream::new(seed, i)))
            .collect()
    }
}

/// Simulates a single path; see [`Simulator`] for repeated use.
pub fn simulate_cdcp(
    model: &dyn ClaimDynamics,
    settings: SimSettings,
    stream: PathStream,
) -> Result<SimPath> {
    Simulator::new(model, settings)?.path(stream)
}
