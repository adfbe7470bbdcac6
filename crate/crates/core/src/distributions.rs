//! Positive jump-size laws (exponential and gamma) with the exponential
//! tilts used by the measure change.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JumpKind {
    Exponential,
    Gamma,
}

/// A jump-size distribution on `(0, inf)`.
///
/// `rate` is the inverse scale; `shape` is fixed to one for the exponential
/// law. Gamma shapes are real-valued and at least one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JumpDistSpec", into = "JumpDistSpec")]
pub struct JumpDist {
    kind: JumpKind,
    rate: f64,
    shape: f64,
}

/// Wire form: `{"kind": "exponential" | "gamma", "rate": r, "shape": k}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct JumpDistSpec {
    pub kind: JumpKind,
    pub rate: f64,
    #[serde(default)]
    pub shape: Option<f64>,
}

impl TryFrom<JumpDistSpec> for JumpDist {
    type Error = Error;

    fn try_from(spec: JumpDistSpec) -> Result<Self> {
        match spec.kind {
            JumpKind::Exponential => {
                if let Some(k) = spec.shape {
                    if k != 1.0 {
                        return Err(Error::InvalidParameter(format!(
                            "exponential law has shape 1, got {k}"
                        )));
                    }
                }
                JumpDist::exponential(spec.rate)
            }
            JumpKind::Gamma => JumpDist::gamma(spec.rate, spec.shape.unwrap_or(1.0)),
        }
    }
}

impl From<JumpDist> for JumpDistSpec {
    fn from(d: JumpDist) -> Self {
        JumpDistSpec {
            kind: d.kind,
            rate: d.rate,
            shape: Some(d.shape),
        }
    }
}

impl JumpDist {
    pub fn exponential(rate: f64) -> Result<Self> {
        check_positive("rate", rate)?;
        Ok(JumpDist {
            kind: JumpKind::Exponential,
            rate,
            shape: 1.0,
        })
    }

    pub fn gamma(rate: f64, shape: f64) -> Result<Self> {
        check_positive("rate", rate)?;
        if !(shape.is_finite() && shape >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma shape must be >= 1, got {shape}"
            )));
        }
        Ok(JumpDist {
            kind: JumpKind::Gamma,
            rate,
            shape,
        })
    }

    pub fn kind(&self) -> JumpKind {
        self.kind
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    /// Density, right-continuous at 0.
    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return if self.shape == 1.0 { self.rate } else { 0.0 };
        }
        match self.kind {
            JumpKind::Exponential => self.rate * (-self.rate * x).exp(),
            JumpKind::Gamma => (self.shape * self.rate.ln() + (self.shape - 1.0) * x.ln()
                - self.rate * x
                - libm::lgamma(self.shape))
            .exp(),
        }
    }

    /// `E[exp(-s X)]`, finite for `s > -rate`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if s <= -self.rate {
            return Err(Error::DivergentTransform {
                s,
                bound: -self.rate,
            });
        }
        let ratio = self.rate / (self.rate + s);
        Ok(match self.kind {
            JumpKind::Exponential => ratio,
            JumpKind::Gamma => ratio.powf(self.shape),
        })
    }

    /// `laplace(s) - 1` without cancellation for small `s`.
    pub fn laplace_m1(&self, s: f64) -> Result<f64> {
        if s <= -self.rate {
            return Err(Error::DivergentTransform {
                s,
                bound: -self.rate,
            });
        }
        Ok(match self.kind {
            JumpKind::Exponential => -s / (self.rate + s),
            JumpKind::Gamma => (-self.shape * (s / self.rate).ln_1p()).exp_m1(),
        })
    }

    /// Draws one jump. Exponential draws use inversion of a single uniform so
    /// that two laws fed the same stream are coupled monotonically in the rate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            JumpKind::Exponential => {
                let u: f64 = rng.random();
                -(1.0 - u).ln() / self.rate
            }
            JumpKind::Gamma => Gamma::new(self.shape, 1.0 / self.rate)
                .expect("validated gamma parameters")
                .sample(rng),
        }
    }

    /// Claim-size tilt `e^{-nu x} dJ(x) / j_hat(nu)` for `nu` in `(-rate, 0]`.
    pub fn tilt_claim(&self, nu: f64) -> Result<Self> {
        if !(nu > -self.rate && nu <= 0.0) {
            return Err(Error::InvalidTilt(format!(
                "nu must lie in ({}, 0], got {nu}",
                -self.rate
            )));
        }
        Ok(JumpDist {
            rate: self.rate + nu,
            ..*self
        })
    }

    /// Exponential tilt `e^{B x} dD(x) / d_hat(-B)`, defined for `B < rate`.
    pub fn exp_tilt(&self, b: f64) -> Result<Self> {
        if b.is_nan() || b >= self.rate || !b.is_finite() {
            return Err(Error::InvalidTilt(format!(
                "tilt {b} must be below the rate {}",
                self.rate
            )));
        }
        Ok(JumpDist {
            rate: self.rate - b,
            ..*self
        })
    }

    /// Law of `c X`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        check_positive("scale", c)?;
        Ok(JumpDist {
            rate: self.rate / c,
            ..*self
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Upper limit with gamma/exponential tail mass below 1e-12.
    fn x_max(d: &JumpDist) -> f64 {
        (d.shape + 40.0 + 8.0 * d.shape.sqrt()) / d.rate
    }

    fn integrate(d: &JumpDist, g: impl Fn(f64) -> f64) -> f64 {
        let f = |x: f64| g(x) * d.density(x);
        let top = x_max(d);
        // split near the mode so the adaptive rule sees the peak
        let mid = (d.shape - 1.0).max(0.5) / d.rate;
        adaptive_simpson(&f, 0.0, mid, 1e-13).unwrap()
            + adaptive_simpson(&f, mid, top, 1e-13).unwrap()
    }

    #[test]
    fn densities_integrate_to_one() {
        for d in [
            JumpDist::exponential(2.0).unwrap(),
            JumpDist::gamma(0.4, 3.0).unwrap(),
            JumpDist::gamma(1.3, 2.5).unwrap(),
        ] {
            assert!((integrate(&d, |_| 1.0) - 1.0).abs() < 1e-8, "{d:?}");
        }
    }

    #[test]
    fn means_against_quadrature() {
        assert_eq!(JumpDist::exponential(2.0).unwrap().mean(), 0.5);
        let g = JumpDist::gamma(0.4, 3.0).unwrap();
        assert!((integrate(&g, |x| x) - 7.5).abs() < 1e-7);
        assert!((g.mean() - 7.5).abs() < 1e-12);
        let gt = JumpDist::gamma(0.35, 3.0).unwrap();
        assert!((integrate(&gt, |x| x) - 8.571428571428571).abs() < 1e-7);
        assert!((gt.mean() - 3.0 / 0.35).abs() < 1e-12);
    }

    #[test]
    fn laplace_against_quadrature() {
        let e = JumpDist::exponential(2.0).unwrap();
        assert_eq!(e.laplace(0.0).unwrap(), 1.0);
        let q = integrate(&e, |x| (-x).exp());
        assert!((q - 2.0 / 3.0).abs() < 1e-9);
        assert!((e.laplace(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);

        let g = JumpDist::gamma(0.4, 3.0).unwrap();
        let q = integrate(&g, |x| (0.05 * x).exp());
        // frozen from the quadrature oracle: (0.4/0.35)^3
        assert!((q - 1.4927113702623906).abs() < 1e-8);
        assert!((g.laplace(-0.05).unwrap() - 1.4927113702623906).abs() < 1e-13);
    }

    #[test]
    fn laplace_diverges_past_rate() {
        let e = JumpDist::exponential(2.0).unwrap();
        assert!(matches!(
            e.laplace(-2.0),
            Err(Error::DivergentTransform { .. })
        ));
        assert!(e.laplace(-1.999).is_ok());
    }

    #[test]
    fn sample_means_converge() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let e = JumpDist::exponential(2.0).unwrap();
        let m: f64 = (0..n).map(|_| e.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((m - 0.5).abs() < 3.0 * 0.5 / 1e3, "{m}");

        let g = JumpDist::gamma(0.4, 3.0).unwrap();
        let se = (3.0f64).sqrt() / 0.4 / 1e3;
        let m: f64 = (0..n).map(|_| g.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((m - 7.5).abs() < 3.0 * se, "{m}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = JumpDist::gamma(0.4, 3.0).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100)
                .map(|_| g.sample(&mut rng).to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }

    #[test]
    fn claim_tilt() {
        let g = JumpDist::gamma(0.4, 3.0).unwrap();
        assert_eq!(g.tilt_claim(0.0).unwrap(), g);
        let t = g.tilt_claim(-0.05).unwrap();
        assert!((t.rate() - 0.35).abs() < 1e-15);
        assert_eq!(t.shape(), 3.0);
        assert!(matches!(g.tilt_claim(-0.4), Err(Error::InvalidTilt(_))));
        assert!(matches!(g.tilt_claim(0.1), Err(Error::InvalidTilt(_))));
    }

    #[test]
    fn claim_tilt_matches_normalized_product() {
        // the tilted law is Gamma(rate + nu, shape), not Gamma(rate, shape + nu)
        let g = JumpDist::gamma(0.4, 3.0).unwrap();
        let nu = -0.05;
        let norm = g.laplace(nu).unwrap();
        let t = g.tilt_claim(nu).unwrap();
        for i in 1..200 {
            let x = i as f64 * 0.25;
            let target = (-nu * x).exp() * g.density(x) / norm;
            assert!((t.density(x) - target).abs() < 1e-12 * target.max(1e-300) + 1e-16);
        }
    }

    #[test]
    fn exp_tilt() {
        let e = JumpDist::exponential(2.0).unwrap();
        assert_eq!(e.exp_tilt(0.0).unwrap(), e);
        assert!(matches!(e.exp_tilt(2.0), Err(Error::InvalidTilt(_))));

        // normalize e^{0.3 y} * e^{-y} by quadrature and compare pointwise
        let one = JumpDist::exponential(1.0).unwrap();
        let norm = integrate(&one, |y| (0.3 * y).exp());
        let t = one.exp_tilt(0.3).unwrap();
        assert!((t.rate() - 0.7).abs() < 1e-15);
        for i in 0..100 {
            let y = i as f64 * 0.2;
            let target = (0.3 * y).exp() * one.density(y) / norm;
            assert!((t.density(y) - target).abs() < 1e-10);
        }
    }

    #[test]
    fn scale_law() {
        let e = JumpDist::exponential(2.0).unwrap();
        assert_eq!(e.scale(1.0).unwrap(), e);
        let s = JumpDist::exponential(0.7).unwrap().scale(2.0).unwrap();
        assert!((s.rate() - 0.35).abs() < 1e-15);

        // Monte Carlo of 2 Y against the fitted rate
        let base = JumpDist::exponential(0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let m = (0..n).map(|_| 2.0 * base.sample(&mut rng)).sum::<f64>() / n as f64;
        let fitted = 1.0 / m;
        assert!((fitted - 0.35).abs() < 3.0 * 0.35 / (n as f64).sqrt() * 1.1);

        // lambda_h for the table parameters with B = 0.1
        let (alpha, beta, theta, b) = (2.0, 1.0, 1.25, 0.1);
        let jhat = (0.4f64 / 0.35).powi(3);
        let c = theta * jhat * beta / (beta - b);
        let h = JumpDist::exponential(alpha)
            .unwrap()
            .exp_tilt(b)
            .unwrap()
            .scale(c)
            .unwrap();
        let lambda_h = (alpha - b) / (theta * (1.0f64 - 0.05 / 0.4).powf(-3.0) * beta / (beta - b));
        assert!((h.rate() - lambda_h).abs() < 1e-12);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let d: JumpDist = serde_json::from_str(r#"{"kind":"gamma","rate":0.4,"shape":3}"#).unwrap();
        assert_eq!(d, JumpDist::gamma(0.4, 3.0).unwrap());
        let e: JumpDist = serde_json::from_str(r#"{"kind":"exponential","rate":2}"#).unwrap();
        assert_eq!(e.shape(), 1.0);
        assert!(
            serde_json::from_str::<JumpDist>(r#"{"kind":"exponential","rate":2,"shape":2}"#)
                .is_err()
        );
        assert!(
            serde_json::from_str::<JumpDist>(r#"{"kind":"gamma","rate":-1,"shape":2}"#).is_err()
        );
        let back: JumpDist = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
    }

    proptest! {
        #[test]
        fn laplace_strictly_decreasing(rate in 0.05f64..5.0, shape in 1.0f64..6.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let d = JumpDist::gamma(rate, shape).unwrap();
            let lo = -0.99 * rate;
            let s1 = lo + a.min(b) * 3.0 * rate;
            let s2 = lo + a.max(b) * 3.0 * rate + 1e-6;
            prop_assert!(d.laplace(s1).unwrap() > d.laplace(s2).unwrap());
            prop_assert_eq!(d.laplace(0.0).unwrap(), 1.0);
        }

        #[test]
        fn tilted_mean_is_shape_over_tilted_rate(rate in 0.05f64..5.0, shape in 1.0f64..6.0, frac in 0.0f64..0.99) {
            let nu = -frac * rate;
            let t = JumpDist::gamma(rate, shape).unwrap().tilt_claim(nu).unwrap();
            let expected = shape / (rate + nu);
            prop_assert!((t.mean() - expected).abs() <= 4.0 * f64::EPSILON * expected);
        }
    }
}
