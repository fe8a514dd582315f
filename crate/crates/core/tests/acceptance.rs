//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Full replication counts by default; `MWLAB_ACCEPTANCE_REPS` lowers them
//! for a quick smoke run (tolerances are then not meaningful).

mod common;

use std::collections::HashMap;
use std::time::Instant;

use mwlab::dgp::canonical::{
    calibrate_alpha, canonical_employment, solve_equilibrium, solve_equilibrium_from, CanonicalParams,
    CesInputConvention,
};
use mwlab::dgp::markdown::{simulate_region, ExcessEmployment, MarkdownPolicy};
use mwlab::estimators::{ols_fe, tsls, Column, FixedEffects, Outcome, WageQuantile};
use mwlab::harness::{preset, run_scenario, McSummary, ScenarioConfig};
use mwlab::prob::NormalParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use WageQuantile::{P10, P25, P50, P90};

const EMP: Outcome = Outcome::Employment;
const P10_P50: Outcome = Outcome::QuantileGap(P10, P50);
const P25_P50: Outcome = Outcome::QuantileGap(P25, P50);
const P90_P50: Outcome = Outcome::QuantileGap(P90, P50);
const GAPS50: [Outcome; 4] = [EMP, P10_P50, P25_P50, P90_P50];
const LEVELS: [Outcome; 5] = [EMP, Outcome::Quantile(P10), Outcome::Quantile(P25), Outcome::Quantile(P50), Outcome::Quantile(P90)];

const OLS: &str = "Effective min. wage";
const FA: &str = "Fraction affected";
const GAP: &str = "Gap measure";

/// Sub-checks of one criterion.
#[derive(Default)]
struct Criterion {
    notes: Vec<(bool, String)>,
}

impl Criterion {
    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol + 1e-12;
        self.notes.push((ok, format!("{what}: {got:.4} vs {want:.3} +/- {tol}")));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.notes.push((ok, what.to_string()));
    }

    fn passed(&self) -> bool {
        self.notes.iter().all(|n| n.0)
    }
}

/// Union of scenarios that share a data-generating process; replications
/// draw the same regions, so every estimator sees the same panels it would
/// see in its own scenario.
fn merged(names: &[&str], reps: u64) -> ScenarioConfig {
    let mut base = preset(names[0]).unwrap();
    for name in &names[1..] {
        let other = preset(name).unwrap();
        assert_eq!(other.dgp, base.dgp, "{name} has a different DGP");
        assert_eq!(other.policy, base.policy, "{name} has a different policy");
        assert_eq!((other.seed, other.regions), (base.seed, base.regions));
        for o in other.outcomes {
            if !base.outcomes.contains(&o) {
                base.outcomes.push(o);
            }
        }
        for e in other.estimators {
            if !base.estimators.iter().any(|b| b.label() == e.label()) {
                base.estimators.push(e);
            }
        }
    }
    base.name = names.join("+");
    base.replications = reps;
    base
}

struct Runs {
    by_name: HashMap<String, McSummary>,
    seconds: HashMap<String, f64>,
}

impl Runs {
    fn get(&self, name: &str) -> &McSummary {
        self.by_name.get(name).unwrap_or_else(|| panic!("scenario {name} was not run"))
    }

    fn est(&self, name: &str, label: &str, o: Outcome) -> f64 {
        self.get(name).cell(label, o).unwrap_or_else(|| panic!("{name}: no cell {label} / {o}")).est_ate
    }

    fn se(&self, name: &str, label: &str, o: Outcome) -> f64 {
        self.get(name).cell(label, o).unwrap().se
    }

    fn truth(&self, name: &str, o: Outcome) -> f64 {
        self.get(name).true_ate(o).unwrap()
    }
}

fn run_all(reps: u64) -> Runs {
    let panels = ["A", "B", "C", "D"];
    let mut groups: Vec<Vec<String>> = Vec::new();
    for p in panels {
        groups.push(vec![format!("table1_panel{p}")]);
        groups.push(
            ["table6", "tableA5", "tableA6", "tableA7"].iter().map(|t| format!("{t}_panel{p}")).collect(),
        );
        groups.push(vec![format!("table7_panel{p}"), format!("tableA8_panel{p}")]);
        groups.push(vec![format!("tableA9_panel{p}")]);
    }
    groups.push(vec!["table3_panelA".into(), "table4_panelA".into()]);
    for name in ["table2_panelB", "table2_panelC", "table5_panelB", "table5_panelC", "tableA3_panelA", "tableA4_panelA"] {
        groups.push(vec![name.into()]);
    }
    for p in ["A", "B", "C", "D", "E"] {
        groups.push(vec![format!("tableA10_panel{p}"), format!("tableA11_panel{p}")]);
    }
    let mut by_name = HashMap::new();
    let mut seconds = HashMap::new();
    for g in groups {
        let names: Vec<&str> = g.iter().map(String::as_str).collect();
        let started = Instant::now();
        let summary = run_scenario(&merged(&names, reps)).unwrap_or_else(|e| panic!("{}: {e}", names.join("+")));
        let secs = started.elapsed().as_secs_f64();
        println!("  ran {:<60} {secs:>6.1}s", names.join(" + "));
        for n in names {
            by_name.insert(n.to_string(), summary.clone());
            seconds.insert(n.to_string(), secs);
        }
    }
    Runs { by_name, seconds }
}

fn criterion_1(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    let s = "table1_panelA";
    let truth = [-0.010, 0.019, 0.006, -0.004];
    let est = [-0.010, 0.020, 0.006, -0.004];
    for (k, o) in GAPS50.iter().enumerate() {
        c.near(&format!("truth {o}"), r.truth(s, *o), truth[k], 0.002);
        c.near(&format!("estimate {o}"), r.est(s, OLS, *o), est[k], 0.002);
        // SEs are reported to three decimals, so compare at that precision.
        let se = r.se(s, OLS, *o);
        let shown = (se * 1000.0).round() / 1000.0;
        c.holds(&format!("mean SE {o} = {se:.4}, reported {shown:.3} <= 0.001"), shown <= 0.001);
    }
    let secs = r.seconds[s];
    c.holds(&format!("runtime {secs:.1}s < 120s"), secs < 120.0);
    c
}

fn criterion_2(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    for (p, emp, p90) in [("B", -0.007, -0.023), ("C", -0.014, -0.080), ("D", -0.003, -0.047)] {
        let s = format!("table1_panel{p}");
        c.near(&format!("{p} emp"), r.est(&s, OLS, EMP), emp, 0.003);
        c.near(&format!("{p} p90-p50"), r.est(&s, OLS, P90_P50), p90, 0.008);
    }
    c
}

fn criterion_3(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    c.near("B emp", r.est("table2_panelB", OLS, EMP), -0.002, 0.003);
    c.near("B p10-p50", r.est("table2_panelB", OLS, P10_P50), 0.077, 0.008);
    let flip = r.est("table2_panelC", OLS, P90_P50);
    c.holds(&format!("C p90-p50 estimate {flip:.4} > 0"), flip > 0.0);
    c
}

fn criterion_4(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    let s = "table3_panelA";
    let no_region = [-0.010, 0.022, 0.007, -0.007];
    let no_time = [-0.007, 0.052, 0.024, -0.041];
    for (k, o) in GAPS50.iter().enumerate() {
        c.near(&format!("no region FE {o}"), r.est(s, "Effective min. wage, no region FE", *o), no_region[k], 0.003);
        c.near(&format!("no time FE {o}"), r.est(s, "Effective min. wage, no time FE", *o), no_time[k], 0.008);
    }
    c
}

fn criterion_5(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    let s = "table4_panelA";
    let label = "Effective min. wage, p90";
    let outcomes = Outcome::gaps_against(P90, &[P10, P25, P90]);
    let want = [0.009, 0.219, 0.176, 0.000];
    for (k, o) in outcomes.iter().enumerate() {
        c.near(&format!("{o}"), r.est(s, label, *o), want[k], 0.01);
    }
    let identity = Outcome::QuantileGap(P90, P90);
    let (est, se) = (r.est(s, label, identity), r.se(s, label, identity));
    c.holds(&format!("p90-p90 estimate {est:e} and SE {se:e} are exactly 0"), est == 0.0 && se == 0.0);
    c
}

fn criterion_6(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    let two = "Two instruments";
    let ams = "Three instruments (AMS)";
    for (p, ols, iv2, iv3) in [("B", -0.015, -0.015, -0.017), ("C", -0.019, -0.020, -0.020)] {
        let s = format!("table5_panel{p}");
        c.near(&format!("{p} OLS emp"), r.est(&s, OLS, EMP), ols, 0.003);
        c.near(&format!("{p} two-IV emp"), r.est(&s, two, EMP), iv2, 0.003);
        c.near(&format!("{p} AMS emp"), r.est(&s, ams, EMP), iv3, 0.003);
        let truth = r.truth(&s, P10_P50);
        let bias = |l: &str| (r.est(&s, l, P10_P50) - truth).abs();
        for l in [two, ams] {
            c.holds(
                &format!("{p} p10-p50 |bias| {l} {:.4} < OLS {:.4}", bias(l), bias(OLS)),
                bias(l) < bias(OLS),
            );
        }
    }
    c
}

type Row = [f64; 5];

const T6: [(&str, Row, Row); 4] = [
    ("A", [-0.008, 0.020, 0.010, 0.006, 0.003], [-0.006, 0.015, 0.007, 0.004, 0.002]),
    ("B", [-0.039, 0.185, 0.044, 0.026, 0.013], [-0.028, 0.127, 0.031, 0.019, 0.009]),
    ("C", [0.002, 0.067, -0.002, -0.001, -0.000], [0.001, 0.052, -0.001, -0.001, -0.000]),
    ("D", [-0.038, 0.132, 0.143, 0.026, 0.012], [-0.028, 0.090, 0.102, 0.019, 0.008]),
];

fn criterion_7(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    for (p, fa, gap) in T6 {
        let s = format!("table6_panel{p}");
        for (label, row) in [(FA, fa), (GAP, gap)] {
            for (k, o) in LEVELS.iter().enumerate() {
                let tol = if k == 0 { 0.003 } else { 0.01 };
                c.near(&format!("{p} {label} {o}"), r.est(&s, label, *o), row[k], tol);
            }
        }
    }
    c.near("C true emp", r.truth("table6_panelC", EMP), 0.010, 0.002);
    let fa_c = r.est("table6_panelC", FA, EMP);
    c.holds(&format!("C FA emp {fa_c:.4} <= 0.004"), fa_c <= 0.004);
    c
}

fn criterion_8(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    let gap7 = [-0.009, -0.007, -0.007, -0.004];
    let fa8 = [-0.013, -0.010, -0.008, -0.005];
    for (i, p) in ["A", "B", "C", "D"].iter().enumerate() {
        c.near(&format!("T7 {p} Gap emp"), r.est(&format!("table7_panel{p}"), GAP, EMP), gap7[i], 0.004);
        c.near(&format!("A8 {p} FA emp"), r.est(&format!("tableA8_panel{p}"), FA, EMP), fa8[i], 0.004);
        let s = r.get(&format!("tableA9_panel{p}"));
        let zero = s.truth.iter().all(|t| t.ate == 0.0 && t.ate0 == 0.0 && t.ate1 == 0.0);
        c.holds(&format!("A9 {p} true effects identically 0"), zero);
        if *p != "A" {
            let g = r.est(&format!("tableA9_panel{p}"), GAP, EMP);
            c.holds(&format!("A9 {p} Gap emp {g:.4} > 0"), g > 0.0);
        }
    }
    c
}

fn criterion_9(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    c.near("A3 A true emp", r.truth("tableA3_panelA", EMP), -0.000, 0.002);
    c.near("A4 A true emp", r.truth("tableA4_panelA", EMP), 0.009, 0.002);
    c
}

fn criterion_10(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    let tables: [(&str, [(&str, [f64; 4]); 2], [f64; 4]); 3] = [
        (
            "tableA5",
            [("Binary measure, 50% treated", [-0.003, -0.009, 0.001, -0.008]), ("Binary measure, 90% treated", [-0.004, -0.017, 0.003, -0.013])],
            [-0.006, -0.031, 0.010, -0.003],
        ),
        (
            "tableA6",
            [("FA instrumented by GAP", [-0.008, -0.040, 0.002, -0.039]), ("GAP instrumented by FA", [-0.006, -0.028, 0.001, -0.027])],
            [-0.006, -0.031, 0.010, -0.002],
        ),
        (
            "tableA7",
            [("Quadratic on FA", [-0.007, -0.034, 0.007, -0.013]), ("Quadratic on GAP", [-0.006, -0.030, 0.004, -0.019])],
            [-0.006, -0.031, 0.010, -0.003],
        ),
    ];
    for (t, rows, truth) in tables {
        for (i, p) in ["A", "B", "C", "D"].iter().enumerate() {
            let s = format!("{t}_panel{p}");
            c.near(&format!("{t} {p} truth emp"), r.truth(&s, EMP), truth[i], 0.004);
            for (label, vals) in rows {
                c.near(&format!("{t} {p} {label} emp"), r.est(&s, label, EMP), vals[i], 0.004);
            }
        }
    }
    let s = "tableA5_panelB";
    let truth = r.truth(s, EMP);
    let b50 = (r.est(s, "Binary measure, 50% treated", EMP) - truth).abs();
    let fa = (r.est(s, FA, EMP) - truth).abs();
    c.holds(&format!("B |bias| binary 50% {b50:.4} > FA {fa:.4}"), b50 > fa);
    c
}

fn criterion_11(r: &Runs) -> Criterion {
    let mut c = Criterion::default();
    c.near("A10 A FA emp", r.est("tableA10_panelA", FA, EMP), -0.009, 0.002);
    c.near("A10 E true emp", r.truth("tableA10_panelE", EMP), -0.086, 0.003);
    for p in ["A", "B", "C", "D", "E"] {
        let e = r.est(&format!("tableA11_panel{p}"), OLS, EMP);
        c.holds(&format!("A11 {p} both-FE emp {e:.4} > 0"), e > 0.0);
    }
    let pw = CesInputConvention::PriceWeighted;
    for (e, want) in [(3.0, 0.563), (1.4, 0.493)] {
        let alpha = calibrate_alpha(e, 0.5, 0.224, -2.2, 0.5, pw).unwrap();
        c.near(&format!("alpha(E={e})"), alpha, want, 0.002);
        for (mw, emp) in [(-2.2, 0.995), (-1.8, 0.966), (-1.5, 0.896)] {
            let params = CanonicalParams { alpha, elasticity: e, dispersion: 0.5, skill_share: 0.224 };
            c.near(&format!("initial employment E={e} mw={mw}"), canonical_employment(&params, mw, pw).unwrap(), emp, 0.003);
        }
    }
    c
}

fn criterion_12() -> Criterion {
    let started = Instant::now();
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);

    let mut galois = true;
    let mut mass = 0.0f64;
    let mut moment = 0.0f64;
    for i in 0..1000 {
        let latent = NormalParams::new(rng.random_range(-0.6..0.6), rng.random_range(0.15..0.9)).unwrap();
        let height = if i % 2 == 0 { 0.0 } else { rng.random_range(0.0..2.0) };
        let mut policy = MarkdownPolicy::new(rng.random_range(-1.6..-0.3), rng.random_range(0.4..1.0))
            .with_positive_effects(height, 0.25);
        policy.excess = ExcessEmployment::Allow;
        let d = simulate_region(&latent, &policy).unwrap();
        for _ in 0..5 {
            let q: f64 = rng.random_range(0.001..0.999);
            let x = d.quantile(q).unwrap();
            let below_ok = x <= d.spike_point() || d.cdf(x - 1e-9) < q + 1e-12;
            galois &= d.cdf(x) >= q - 1e-12 && below_ok;
        }
        let parts = d.spike_mass() + d.segments().iter().map(|s| s.mass).sum::<f64>();
        mass = mass.max((parts - d.employment()).abs()).max((d.cdf(f64::INFINITY) - 1.0).abs());
        if i % 10 == 0 {
            let top = common::upper_limit(&d);
            let mw = d.spike_point();
            let want = (d.spike_mass() * mw.exp() + common::continuous_integral(&d, &|w| w.exp(), top)) / d.employment();
            moment = moment.max((d.mean_level() - want).abs() / want);
            let cut = mw + 0.2;
            let ec = cut.exp();
            let gap = (d.spike_mass() * (ec - mw.exp()) + common::continuous_integral(&d, &|w| ec - w.exp(), cut)) / d.employment();
            moment = moment.max((d.gap_numerator(cut) - gap).abs() / gap);
        }
    }
    c.holds("quantile/cdf Galois inversion on 1000 random mixed laws", galois);
    c.holds(&format!("mass conservation {mass:.1e} <= 1e-12"), mass <= 1e-12);
    c.holds(&format!("moments vs quadrature rel {moment:.1e} <= 1e-8"), moment <= 1e-8);

    let mut fwl = 0.0f64;
    let mut iv = 0.0f64;
    for trial in 0..20 {
        let regions = 10 + trial * 5;
        let n = 2 * regions;
        let x: Vec<Vec<f64>> = (0..2).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect();
        let y: Vec<f64> = (0..n).map(|i| x[0][i] - 0.3 * x[1][i] + rng.sample::<f64, _>(StandardNormal)).collect();
        let panel = common::synthetic_panel(regions, &vec![0.1; regions]);
        let cols = [Column::new("a", x[0].clone()), Column::new("b", x[1].clone())];
        let fit = ols_fe(&panel, &y, &cols, FixedEffects::BOTH).unwrap();
        let (beta, cov) = common::dummy_regression(&y, &x, regions, true, true, 3);
        for j in 0..2 {
            fwl = fwl.max((fit.coefficients[j] - beta[j]).abs());
            for k in 0..2 {
                fwl = fwl.max((fit.covariance[2 * j + k] - cov[(j, k)]).abs());
            }
        }
        let two = tsls(&panel, &y, &cols, &cols, FixedEffects::BOTH).unwrap();
        for (a, b) in fit.coefficients.iter().zip(&two.coefficients).chain(fit.covariance.iter().zip(&two.covariance)) {
            iv = iv.max((a - b).abs());
        }
    }
    c.holds(&format!("FWL vs dummy regression {fwl:.1e} <= 1e-9"), fwl <= 1e-9);
    c.holds(&format!("IV with X as instruments vs OLS {iv:.1e} <= 1e-9"), iv <= 1e-9);

    let pw = CesInputConvention::PriceWeighted;
    let mut residual = 0.0f64;
    let mut spread = 0.0f64;
    for (alpha, e) in [(0.5629, 3.0), (0.4926, 1.4)] {
        for mw in [-2.2, -1.8, -1.5] {
            for s in [0.12, 0.224, 0.35] {
                let params = CanonicalParams { alpha, elasticity: e, dispersion: 0.5, skill_share: s };
                let eq = solve_equilibrium(&params, mw, pw).unwrap();
                residual = residual.max(eq.residual);
                for _ in 0..10 {
                    let start = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                    let other = solve_equilibrium_from(&params, mw, pw, start).unwrap();
                    residual = residual.max(other.residual);
                    spread = spread.max((other.p1 - eq.p1).abs()).max((other.p2 - eq.p2).abs());
                }
            }
        }
    }
    c.holds(&format!("CES residual {residual:.1e} <= 1e-10"), residual <= 1e-10);
    c.holds(&format!("CES start invariance {spread:.1e} <= 1e-8"), spread <= 1e-8);

    let mut cfg = preset("table5_panelC").unwrap();
    cfg.replications = 8;
    cfg.regions = 100;
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| run_scenario(&cfg)).unwrap();
    let b = many.install(|| run_scenario(&cfg)).unwrap();
    c.holds("identical summaries on 1 and 4 threads", a == b);

    let secs = started.elapsed().as_secs_f64();
    c.holds(&format!("property suite runtime {secs:.1}s < 60s"), secs < 60.0);
    c
}

fn main() {
    // `cargo test` passes filter arguments to every target; honour `--list`.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let reps: u64 = std::env::var("MWLAB_ACCEPTANCE_REPS").ok().and_then(|v| v.parse().ok()).unwrap_or(1000);
    let started = Instant::now();
    println!("acceptance run, {reps} replications per scenario");
    let runs = run_all(reps);
    let mc_secs = started.elapsed().as_secs_f64();

    let titles = [
        "Table 1 Panel A, pure location heterogeneity",
        "Table 1 Panels B-D, dispersion heterogeneity",
        "Table 2, location-dispersion correlation",
        "Table 3, alternative fixed effects",
        "Table 4, p90 deflator",
        "Table 5, local minimum wages and IV",
        "Table 6, FA and Gap misspecification",
        "Tables 7/A8/A9, stability and placebo",
        "Tables A3/A4, positive employment calibration",
        "Tables A5-A7, binary, cross-IV, quadratic",
        "Tables A10/A11, canonical model and calibration gates",
        "Property suite",
    ];
    let results = [
        criterion_1(&runs),
        criterion_2(&runs),
        criterion_3(&runs),
        criterion_4(&runs),
        criterion_5(&runs),
        criterion_6(&runs),
        criterion_7(&runs),
        criterion_8(&runs),
        criterion_9(&runs),
        criterion_10(&runs),
        criterion_11(&runs),
        criterion_12(),
    ];
    println!();
    for (i, (title, c)) in titles.iter().zip(&results).enumerate() {
        let failing: Vec<&str> = c.notes.iter().filter(|n| !n.0).map(|n| n.1.as_str()).collect();
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        let tail = if failing.is_empty() { String::new() } else { format!(" [{}]", failing.join("; ")) };
        println!("criterion {:>2} {verdict}  {title}{tail}", i + 1);
    }
    println!();
    for (i, c) in results.iter().enumerate() {
        for (ok, note) in &c.notes {
            println!("  {:>2} {} {note}", i + 1, if *ok { "ok  " } else { "MISS" });
        }
    }
    let failed = results.iter().filter(|c| !c.passed()).count();
    println!(
        "\n{} of {} criteria passed; Monte Carlo {:.0}s, total {:.0}s",
        results.len() - failed,
        results.len(),
        mc_secs,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
