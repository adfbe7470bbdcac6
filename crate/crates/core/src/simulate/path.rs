use std::sync::Arc;

use serde::Serialize;

use super::baseline::Baseline;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExternalEvent {
    pub time: f64,
    /// Intensity jump `X`.
    pub mark: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelfEvent {
    pub time: f64,
    /// Intensity jump `Y`.
    pub mark: f64,
    /// Claim size `Xi`.
    pub claim: f64,
    /// Intensity just before the event, as used by the accept/reject step.
    pub intensity: f64,
    /// Event rate `c(t) lambda_{t-}` the point was accepted against.
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    External,
    SelfExcited,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventRecord {
    pub kind: EventKind,
    pub time: f64,
    pub mark: f64,
    /// Claim size for self-excited events.
    pub claim: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub lambda: f64,
    pub claims: f64,
}

/// One realised trajectory on `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct SimPath {
    pub(crate) horizon: f64,
    pub(crate) delta: f64,
    pub(crate) baseline: Arc<Baseline>,
    pub(crate) external: Vec<ExternalEvent>,
    pub(crate) self_events: Vec<SelfEvent>,
}

impl SimPath {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn external_events(&self) -> &[ExternalEvent] {
        &self.external
    }

    pub fn self_events(&self) -> &[SelfEvent] {
        &self.self_events
    }

    fn check(&self, t: f64) -> Result<f64> {
        let slack = 1e-12 * self.horizon.max(1.0);
        if !(t >= 0.0 && t <= self.horizon + slack) {
            return Err(Error::OutOfHorizon {
                t,
                horizon: self.horizon,
            });
        }
        Ok(t.min(self.horizon))
    }

    fn decayed<'a>(&self, t: f64, jumps: impl Iterator<Item = (f64, f64)> + 'a) -> f64 {
        jumps
            .take_while(|&(time, _)| time <= t)
            .map(|(time, mark)| mark * (-self.delta * (t - time)).exp())
            .sum()
    }

    /// `lambda_t`, right-continuous (includes jumps at `t`).
    pub fn lambda_at(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        Ok(self.baseline.value(t)
            + self.decayed(t, self.external.iter().map(|e| (e.time, e.mark)))
            + self.decayed(t, self.self_events.iter().map(|e| (e.time, e.mark))))
    }

    /// `lambda_{t-}`.
    pub fn lambda_before(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        let strict = |jumps: &mut dyn Iterator<Item = (f64, f64)>| -> f64 {
            jumps
                .take_while(|&(time, _)| time < t)
                .map(|(time, mark)| mark * (-self.delta * (t - time)).exp())
                .sum()
        };
        Ok(self.baseline.value(t)
            + strict(&mut self.external.iter().map(|e| (e.time, e.mark)))
            + strict(&mut self.self_events.iter().map(|e| (e.time, e.mark))))
    }

    /// `Lambda_t = int_0^t lambda_u du`, exact per mark.
    pub fn lambda_integral(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        let d = self.delta;
        let term = |(time, mark): (f64, f64)| mark * -(-d * (t - time)).exp_m1() / d;
        let ext: f64 = self
            .external
            .iter()
            .map(|e| (e.time, e.mark))
            .take_while(|&(time, _)| time <= t)
            .map(term)
            .sum();
        let own: f64 = self
            .self_events
            .iter()
            .map(|e| (e.time, e.mark))
            .take_while(|&(time, _)| time <= t)
            .map(term)
            .sum();
        Ok(self.baseline.integral(t) + ext + own)
    }

    /// `N_t`, the number of self-excited (claim) events up to `t`.
    pub fn count_at(&self, t: f64) -> Result<usize> {
        let t = self.check(t)?;
        Ok(self.self_events.partition_point(|e| e.time <= t))
    }

    /// `M_t`, the number of external events up to `t`.
    pub fn external_count_at(&self, t: f64) -> Result<usize> {
        let t = self.check(t)?;
        Ok(self.external.partition_point(|e| e.time <= t))
    }

    /// `C_t`.
    pub fn claims_at(&self, t: f64) -> Result<f64> {
        let n = self.count_at(t)?;
        Ok(self.self_events[..n].iter().map(|e| e.claim).sum())
    }

    pub fn total_claims(&self) -> f64 {
        self.self_events.iter().map(|e| e.claim).sum()
    }

    /// `(t, lambda_t, C_t)` on `n_points` equally spaced times including 0
    /// and the horizon.
    pub fn trajectory(&self, n_points: usize) -> Vec<TrajectoryPoint> {
        let n = n_points.max(2) - 1;
        (0..=n)
            .map(|i| {
                let t = self.horizon * i as f64 / n as f64;
                TrajectoryPoint {
                    t,
                    lambda: self.lambda_at(t).expect("inside horizon"),
                    claims: self.claims_at(t).expect("inside horizon"),
                }
            })
            .collect()
    }

    /// All events merged in time order.
    pub fn events(&self) -> Vec<EventRecord> {
        let mut out: Vec<EventRecord> = self
            .external
            .iter()
            .map(|e| EventRecord {
                kind: EventKind::External,
                time: e.time,
                mark: e.mark,
                claim: None,
            })
            .chain(self.self_events.iter().map(|e| EventRecord {
                kind: EventKind::SelfExcited,
                time: e.time,
                mark: e.mark,
                claim: Some(e.claim),
            }))
            .collect();
        out.sort_by(|a, b| a.time.total_cmp(&b.time));
        out
    }
}
