use contagion::config::{table_sweeps, TABLE_RETENTIONS};
use contagion::esscher::{b_plus_by_bisection, solve_k};
use contagion::moments::{moments_inhom, moments_p, moments_star, MomentReport};
use contagion::pricing::{premium_table, sensitivity_sweep, PremiumEstimate};
use contagion::simulate::EventKind;
use contagion::{
    b_plus, g_of_b, martingale_statistic, mean_c_inhom, mean_c_star, Error, EsscherParams,
    MarketModel, Measure, PhysicalModel, Representation, RunConfig, Simulator,
};
use serde_json::json;

use crate::output::{num, Artifact};

const MEASURES: [Measure; 2] = [Measure::P, Measure::Pstar];

/// The reinsurance example: reference model and tilt, unit horizon, the
/// retention grid and the three tilting-parameter sweeps.
pub fn reference_setting(mut cfg: RunConfig) -> RunConfig {
    let defaults = RunConfig::default();
    cfg.model = PhysicalModel::reference();
    cfg.esscher = defaults.esscher;
    cfg.run.t = 1.0;
    cfg.run.retentions = TABLE_RETENTIONS.to_vec();
    cfg.run.sweep = table_sweeps();
    cfg.run.sweep_retention = 25.0;
    cfg
}

fn tilted_report(t: f64, market: &MarketModel) -> contagion::Result<MomentReport> {
    match market.tilted().representation() {
        Representation::LambdaTildeSpace => moments_star(t, market.tilted()),
        Representation::LambdaSpace => moments_inhom(t, market.tilted(), Measure::Pstar),
    }
}

/// Exact `E*[C_t]` of the simulated tilted dynamics.
fn tilted_mean(t: f64, market: &MarketModel) -> contagion::Result<f64> {
    match market.tilted().representation() {
        Representation::LambdaTildeSpace => mean_c_star(t, market.tilted()),
        Representation::LambdaSpace => mean_c_inhom(t, market.tilted()),
    }
}

pub fn moments(cfg: &RunConfig, times: &[f64]) -> contagion::Result<Vec<Artifact>> {
    let market = cfg.market()?;
    let times = if times.is_empty() {
        vec![cfg.run.t]
    } else {
        times.to_vec()
    };
    let mut a = Artifact::new(
        "moments",
        vec!["t", "measure", "method", "mean_lambda", "mean_N", "mean_C"],
    );
    let mut reports = Vec::new();
    for &t in &times {
        if !(t >= 0.0 && t <= cfg.run.t) {
            return Err(Error::InvalidParameter(format!(
                "moment time {t} outside [0, {}] (run.t)",
                cfg.run.t
            )));
        }
        for r in [moments_p(t, market.physical())?, tilted_report(t, &market)?] {
            let method = serde_json::to_value(r.method).expect("enum serialises");
            a.push(vec![
                num(r.t),
                r.measure.to_string(),
                method.as_str().unwrap_or_default().to_string(),
                num(r.mean_lambda),
                num(r.mean_n),
                num(r.mean_c),
            ]);
            reports.push(r);
        }
    }
    a.json = json!(reports);
    Ok(vec![a])
}

pub fn bcurve(cfg: &RunConfig) -> contagion::Result<Vec<Artifact>> {
    let market = cfg.market()?;
    let curve = market.bcurve();
    let k = solve_k(market.physical(), market.esscher(), curve)?;
    let stationarity = market.stationarity();
    let mut a = Artifact::new("bcurve", vec!["t", "B", "K"]);
    let mut points = Vec::with_capacity(curve.len());
    for (i, (&b, &kv)) in curve.values().iter().zip(k.values()).enumerate() {
        let t = curve.time(i);
        a.push(vec![num(t), num(b), num(kv)]);
        points.push(json!({"t": t, "B": b, "K": kv}));
    }
    let regime = serde_json::to_value(curve.regime()).expect("regime serialises");
    a.notes = vec![
        format!("b_plus: {}", num(curve.b_plus())),
        format!("regime: {regime}"),
        format!(
            "stationarity: {}",
            serde_json::to_string(&stationarity).expect("report serialises")
        ),
    ];
    a.json = json!({
        "b_plus": curve.b_plus(),
        "regime": regime,
        "stationarity": stationarity,
        "points": points,
    });
    Ok(vec![a])
}

pub fn simulate(cfg: &RunConfig) -> contagion::Result<Vec<Artifact>> {
    let market = cfg.market()?;
    let settings = cfg.settings()?;
    let mut events = Artifact::new(
        "events",
        vec!["path_id", "measure", "event_type", "time", "mark", "claim"],
    );
    let mut traj = Artifact::new(
        "trajectories",
        vec!["path_id", "measure", "t", "lambda", "C"],
    );
    let mut ev_json = Vec::new();
    let mut tr_json = Vec::new();
    for measure in MEASURES {
        let sim = Simulator::new(market.dynamics(measure), settings)?;
        for (id, path) in sim
            .paths(cfg.run.seed, cfg.run.log_paths)?
            .iter()
            .enumerate()
        {
            for e in path.events() {
                let kind = match e.kind {
                    EventKind::External => "external",
                    EventKind::SelfExcited => "self",
                };
                events.push(vec![
                    id.to_string(),
                    measure.to_string(),
                    kind.into(),
                    num(e.time),
                    num(e.mark),
                    e.claim.map(num).unwrap_or_default(),
                ]);
                ev_json.push(json!({
                    "path_id": id, "measure": measure, "event_type": kind,
                    "time": e.time, "mark": e.mark, "claim": e.claim,
                }));
            }
            for p in path.trajectory(cfg.run.trajectory_points) {
                traj.push(vec![
                    id.to_string(),
                    measure.to_string(),
                    num(p.t),
                    num(p.lambda),
                    num(p.claims),
                ]);
                tr_json.push(json!({"path_id": id, "measure": measure, "t": p.t, "lambda": p.lambda, "C": p.claims}));
            }
        }
    }
    events.json = json!(ev_json);
    traj.json = json!(tr_json);
    Ok(vec![events, traj])
}

const PREMIUM_COLUMNS: [&str; 9] = [
    "param",
    "param_value",
    "L",
    "measure",
    "estimate",
    "stderr",
    "ci_lo",
    "ci_hi",
    "analytic",
];

fn premium_row(
    param: &str,
    value: Option<f64>,
    e: &PremiumEstimate,
    analytic: Option<f64>,
) -> Vec<String> {
    vec![
        param.into(),
        value.map(num).unwrap_or_default(),
        num(e.retention),
        e.measure.to_string(),
        num(e.value),
        num(e.stderr),
        num(e.ci95[0]),
        num(e.ci95[1]),
        analytic.map(num).unwrap_or_default(),
    ]
}

pub fn price(cfg: &RunConfig) -> contagion::Result<Vec<Artifact>> {
    let market = cfg.market()?;
    let settings = cfg.settings()?;
    let t = cfg.run.t;
    let mut a = Artifact::new("premiums", PREMIUM_COLUMNS.to_vec());
    let mut rows = Vec::new();
    for measure in MEASURES {
        let analytic = match measure {
            Measure::P => market.analytic_mean(Measure::P, t)?,
            Measure::Pstar => tilted_mean(t, &market)?,
        };
        let table = premium_table(
            market.dynamics(measure),
            measure,
            &cfg.run.retentions,
            settings,
            cfg.run.n_paths,
            cfg.run.seed,
        )?;
        for e in table {
            // E[(C - 0)^+] = E[C] is the only retention with a closed form
            let exact = (e.retention == 0.0).then_some(analytic);
            a.push(premium_row("", None, &e, exact));
            rows.push(json!({"estimate": e, "analytic": exact}));
        }
    }
    a.json = json!(rows);
    Ok(vec![a])
}

pub fn sweep(cfg: &RunConfig) -> contagion::Result<Vec<Artifact>> {
    let opts = cfg.sweep_options()?;
    let e: EsscherParams = cfg.esscher_params();
    let mut a = Artifact::new("sweep", PREMIUM_COLUMNS.to_vec());
    let mut reports = Vec::new();
    for spec in &cfg.run.sweep {
        let rep = sensitivity_sweep(&cfg.model, &e, spec.param, &spec.values, &opts)?;
        let name = spec.param.to_string();
        for row in &rep.rows {
            a.push(premium_row(
                &name,
                Some(row.value),
                &row.mean,
                Some(row.analytic),
            ));
            a.push(premium_row(&name, Some(row.value), &row.excess, None));
        }
        for s in &rep.skipped {
            let note = format!("skipped {name}={}: {}", num(s.value), s.reason);
            eprintln!("{note}");
            a.notes.push(note);
        }
        reports.push(rep);
    }
    a.json = json!(reports);
    Ok(vec![a])
}

struct Check {
    name: String,
    pass: bool,
    value: f64,
    target: f64,
    tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            pass: (value - target).abs() <= tolerance,
            value,
            target,
            tolerance,
        }
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// The invariant suite: B-curve identities, moments against Monte Carlo
/// under both measures and the density-process martingale. Returns the
/// report and whether every check passed.
pub fn validate(cfg: &RunConfig) -> contagion::Result<(Vec<Artifact>, bool)> {
    let market = cfg.market()?;
    let settings = cfg.settings()?;
    let (m, e) = (*market.physical(), *market.esscher());
    let t = cfg.run.t;
    let n = cfg.run.n_paths;
    let seed = cfg.run.seed;
    let curve = market.bcurve();
    let mut checks = Vec::new();

    let worst = curve
        .values()
        .iter()
        .enumerate()
        .map(|(i, &b)| g_of_b(b, &m, &e).map(|g| (g - curve.time(i)).abs()))
        .try_fold(0.0f64, |acc, r| r.map(|x| acc.max(x)))?;
    checks.push(Check::new("G(B(t)) - t on grid", worst, 0.0, 1e-6));
    checks.push(Check::new(
        "B+ closed form vs bisection",
        b_plus(&m, &e)?,
        b_plus_by_bisection(&m, &e)?,
        1e-10,
    ));

    let targets = [
        market.analytic_mean(Measure::P, t)?,
        tilted_mean(t, &market)?,
    ];
    for (measure, target) in MEASURES.into_iter().zip(targets) {
        let sim = Simulator::new(market.dynamics(measure), settings)?;
        let claims = sim.map_paths(seed, n, |p| p.total_claims())?;
        let (mean, se) = mean_and_stderr(&claims);
        checks.push(Check::new(
            format!("MC mean C_t under {measure}"),
            mean,
            target,
            3.0 * se,
        ));
    }

    let k = solve_k(&m, &e, curve)?;
    let times = [0.25 * t, 0.5 * t, t];
    let sim = Simulator::new(&m, settings)?;
    let stats = sim.map_paths(seed, n, |p| {
        times.map(|s| martingale_statistic(p, curve, &k, &m, &e, s).and_then(|x| x.value()))
    })?;
    let start = (e.b * m.lambda0()).exp();
    for (i, s) in times.iter().enumerate() {
        let xs = stats
            .iter()
            .map(|v| v[i].clone())
            .collect::<contagion::Result<Vec<f64>>>()?;
        let (mean, se) = mean_and_stderr(&xs);
        checks.push(Check::new(
            format!("martingale mean at t={}", num(*s)),
            mean,
            start,
            3.0 * se,
        ));
    }

    let mut a = Artifact::new(
        "validate",
        vec!["check", "status", "value", "target", "tolerance"],
    );
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        a.push(vec![
            c.name.clone(),
            status.into(),
            num(c.value),
            num(c.target),
            num(c.tolerance),
        ]);
    }
    a.json = json!(checks
        .iter()
        .map(|c| json!({"check": c.name, "pass": c.pass, "value": c.value, "target": c.target, "tolerance": c.tolerance}))
        .collect::<Vec<_>>());
    let all = checks.iter().all(|c| c.pass);
    Ok((vec![a], all))
}
