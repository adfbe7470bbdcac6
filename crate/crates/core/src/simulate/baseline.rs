use crate::dynamics::ClaimDynamics;

/// Deterministic part of the intensity, `D' = delta (a(t) - D)`, `D(0) = lambda0`.
///
/// For time-varying levels `a` is taken piecewise linear between the model
/// knots, where the ODE has an exact solution; both the simulator and the
/// path accessors use the same interpolant so accept/reject decisions and
/// reconstructed intensities agree to rounding.
#[derive(Debug, Clone)]
pub enum Baseline {
    Constant {
        lambda0: f64,
        level: f64,
        delta: f64,
    },
    Grid {
        delta: f64,
        times: Vec<f64>,
        level: Vec<f64>,
        value: Vec<f64>,
        level_integral: Vec<f64>,
    },
}

/// `1 - e^{-x}` without cancellation.
fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

impl Baseline {
    pub fn new(model: &dyn ClaimDynamics, horizon: f64) -> Baseline {
        let delta = model.delta();
        let knots = model.knots();
        if knots.is_empty() {
            return Baseline::Constant {
                lambda0: model.lambda0(),
                level: model.level(0.0),
                delta,
            };
        }
        let mut times: Vec<f64> = knots.iter().copied().take_while(|&k| k < horizon).collect();
        if times.first() != Some(&0.0) {
            times.insert(0, 0.0);
        }
        times.push(horizon);
        let level: Vec<f64> = times.iter().map(|&t| model.level(t)).collect();
        let mut value = Vec::with_capacity(times.len());
        let mut level_integral = Vec::with_capacity(times.len());
        value.push(model.lambda0());
        level_integral.push(0.0);
        for i in 1..times.len() {
            let h = times[i] - times[i - 1];
            let slope = if h > 0.0 {
                (level[i] - level[i - 1]) / h
            } else {
                0.0
            };
            value.push(segment(value[i - 1], level[i - 1], slope, delta, h));
            level_integral.push(level_integral[i - 1] + 0.5 * h * (level[i] + level[i - 1]));
        }
        Baseline::Grid {
            delta,
            times,
            level,
            value,
            level_integral,
        }
    }

    fn locate(times: &[f64], t: f64) -> usize {
        times
            .partition_point(|&k| k <= t)
            .saturating_sub(1)
            .min(times.len() - 2)
    }

    /// `D(t)`.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Baseline::Constant {
                lambda0,
                level,
                delta,
            } => level + (lambda0 - level) * (-delta * t).exp(),
            Baseline::Grid {
                delta,
                times,
                level,
                value,
                ..
            } => {
                let i = Self::locate(times, t);
                let w = times[i + 1] - times[i];
                let slope = if w > 0.0 {
                    (level[i + 1] - level[i]) / w
                } else {
                    0.0
                };
                segment(value[i], level[i], slope, *delta, t - times[i])
            }
        }
    }

    /// `a(t)` as seen by the simulator.
    pub fn level(&self, t: f64) -> f64 {
        match self {
            Baseline::Constant { level, .. } => *level,
            Baseline::Grid { times, level, .. } => {
                let i = Self::locate(times, t);
                let w = times[i + 1] - times[i];
                if w <= 0.0 {
                    return level[i];
                }
                level[i] + (level[i + 1] - level[i]) * (t - times[i]) / w
            }
        }
    }

    /// `sup a` over `[s, e]`.
    pub fn level_sup(&self, s: f64, e: f64) -> f64 {
        match self {
            Baseline::Constant { level, .. } => *level,
            Baseline::Grid { times, level, .. } => {
                let lo = times.partition_point(|&k| k <= s);
                let hi = times.partition_point(|&k| k < e);
                level[lo..hi.max(lo)]
                    .iter()
                    .fold(self.level(s).max(self.level(e)), |acc, &v| acc.max(v))
            }
        }
    }

    /// `int_0^t D(u) du = int_0^t a - (D(t) - D(0)) / delta`.
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            Baseline::Constant {
                lambda0,
                level,
                delta,
            } => level * t + (lambda0 - level) * one_minus_exp(delta * t) / delta,
            Baseline::Grid {
                delta,
                times,
                level,
                value,
                level_integral,
            } => {
                let i = Self::locate(times, t);
                let h = t - times[i];
                let a_t = self.level(t);
                let int_a = level_integral[i] + 0.5 * h * (level[i] + a_t);
                int_a - (self.value(t) - value[0]) / delta
            }
        }
    }
}

/// Exact solution over a step `h` with `a(t0 + u) = a0 + slope u`.
fn segment(d0: f64, a0: f64, slope: f64, delta: f64, h: f64) -> f64 {
    let q = one_minus_exp(delta * h);
    d0 * (1.0 - q) + a0 * q + slope * (h - q / delta)
}
