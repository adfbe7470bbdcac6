use contagion::pricing::{
    premium_from_claims, premium_table, simulate_claims, DEFAULT_GRID_POINTS,
};
use contagion::simulate::SimSettings;
use contagion::{mean_c_p, EsscherParams, MarketModel, Measure, PhysicalModel, Representation};
use proptest::prelude::*;

fn settings() -> SimSettings {
    SimSettings::new(1.0, 0.1).unwrap()
}

#[test]
fn confidence_intervals_are_calibrated() {
    // 400 independent 500-path estimates of E[C_1]; about 95% of the
    // intervals must cover the closed form
    let m = PhysicalModel::reference();
    let target = mean_c_p(1.0, &m).unwrap();
    let claims = simulate_claims(&m, settings(), 200_000, 31).unwrap();
    let hits = claims
        .chunks(500)
        .filter(|chunk| {
            let est = premium_from_claims(chunk, 0.0, 31, Measure::P, 1.0).unwrap();
            est.ci95[0] <= target && target <= est.ci95[1]
        })
        .count();
    let rate = hits as f64 / 400.0;
    // binomial sd at 95% over 400 trials is 0.011
    assert!((0.90..=0.99).contains(&rate), "coverage {rate}");
}

#[test]
fn gross_premium_exceeds_net_premium() {
    let mkt = MarketModel::new(
        PhysicalModel::reference(),
        EsscherParams::reference(),
        1.0,
        DEFAULT_GRID_POINTS,
        Representation::LambdaTildeSpace,
    )
    .unwrap();
    let ls = [0.0, 25.0, 50.0];
    let net = premium_table(
        mkt.dynamics(Measure::P),
        Measure::P,
        &ls,
        settings(),
        20_000,
        2,
    )
    .unwrap();
    let gross = premium_table(
        mkt.dynamics(Measure::Pstar),
        Measure::Pstar,
        &ls,
        settings(),
        20_000,
        2,
    )
    .unwrap();
    for (n, g) in net.iter().zip(&gross) {
        assert!(
            g.value > n.value,
            "L={}: {} vs {}",
            n.retention,
            g.value,
            n.value
        );
        assert_eq!(g.measure, Measure::Pstar);
    }
}

#[test]
fn lambda_space_prices_above_lambda_tilde_space() {
    // with a nondecreasing multiplier the lambda-space intensity dominates
    let build = |r| {
        MarketModel::new(
            PhysicalModel::reference(),
            EsscherParams::reference(),
            1.0,
            1001,
            r,
        )
        .unwrap()
    };
    let lo = build(Representation::LambdaTildeSpace);
    let hi = build(Representation::LambdaSpace);
    let a = simulate_claims(lo.tilted(), settings(), 2000, 3).unwrap();
    let b = simulate_claims(hi.tilted(), settings(), 2000, 3).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| y >= x));
}

#[test]
fn invalid_inputs_are_rejected() {
    let m = PhysicalModel::reference();
    assert!(premium_table(&m, Measure::P, &[-1.0], settings(), 100, 1).is_err());
    assert!(premium_table(&m, Measure::P, &[0.0], settings(), 1, 1).is_err());
    assert!(premium_table(&m, Measure::P, &[], settings(), 100, 1)
        .unwrap()
        .is_empty());
}

proptest! {
    #[test]
    fn payoff_is_bounded_decreasing_and_convex(
        claims in prop::collection::vec(0.0f64..200.0, 2..60),
        l in 0.0f64..150.0,
        h in 0.01f64..20.0,
    ) {
        let p = |l: f64| premium_from_claims(&claims, l, 0, Measure::P, 1.0).unwrap().value;
        let mean = claims.iter().sum::<f64>() / claims.len() as f64;
        let (a, b, c) = (p(l), p(l + h), p(l + 2.0 * h));
        prop_assert!(a >= 0.0 && a <= mean + 1e-9);
        prop_assert!(a >= (mean - l).max(0.0) - 1e-9);
        prop_assert!(b <= a + 1e-12);
        prop_assert!(a - b <= h + 1e-9);
        prop_assert!(a + c >= 2.0 * b - 1e-9);
    }
}
