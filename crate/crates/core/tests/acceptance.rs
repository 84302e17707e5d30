//! Acceptance gate: one verdict line per criterion, nonzero exit if any fails.

mod common;

use std::time::Instant;

use common::{bisect, derivative, integrate_log, integrate_support, ks_critical_1pct, order_stat_cdf, parameter_grid, probe_levels};
use rand::Rng;
use tgiw::estimation::likelihood::{log_likelihood, score};
use tgiw::estimation::{normal_critical, observed_information};
use tgiw::selection::{compare, ks_distance, CompareConfig};
use tgiw::study::{failure_times, published_giw, reproduce};
use tgiw::{fit_lse, fit_mle, fit_wlse, Dataset, Error, FitConfig, Mode, OrderSpec, ReducedParams, Solution, SubModel, TgiwParams};

struct Verdict {
    failures: Vec<String>,
    summary: String,
}

impl Verdict {
    fn new() -> Self {
        Self { failures: Vec::new(), summary: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn criterion_1() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let report = reproduce(&FitConfig::default()).expect("reproduction runs");
    let elapsed = start.elapsed().as_secs_f64();
    for c in report.failures() {
        v.failures.push(format!("{}: computed {} expected {} +/- {}", c.name, c.computed, c.expected, c.tolerance));
    }
    v.require(elapsed < 60.0, || format!("took {elapsed:.1}s"));
    let get = |name: &str| report.check(name).map_or(f64::NAN, |c| c.computed);
    v.summary = format!(
        "-loglik GIW {:.4} TGIW {:.4}, AIC {:.3}/{:.3}, AICC {:.3}/{:.3}, K-S {:.4}/{:.4}, omega {:.4} > {:.3}, {} checks in {elapsed:.2}s",
        get("giw.neg_log_lik"),
        get("tgiw.neg_log_lik"),
        get("giw.aic"),
        get("tgiw.aic"),
        get("giw.aicc"),
        get("tgiw.aicc"),
        get("giw.ks"),
        get("tgiw.ks"),
        get("lr.omega"),
        get("lr.critical"),
        report.checks.len()
    );
    for note in &report.notes {
        match note.reference {
            Some(r) => println!("    note {}: {:.6} (published point {:.6})", note.name, note.computed, r),
            None => println!("    note {}: {:.6}", note.name, note.computed),
        }
    }
    v
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new();
    let grid = parameter_grid();
    let (mut worst_norm, mut worst_fd, mut worst_q) = (0.0f64, 0.0f64, 0.0f64);
    for p in &grid {
        let total = integrate_support(p, |x| p.pdf(x).unwrap(), 1e-8, 1e-10);
        worst_norm = worst_norm.max((total - 1.0).abs());
        for k in 1..20 {
            let x = p.quantile(k as f64 / 20.0).unwrap();
            let fd = derivative(|t| p.cdf(t).unwrap(), x, 1e-3 * x);
            let pdf = p.pdf(x).unwrap();
            worst_fd = worst_fd.max(((fd - pdf) / pdf).abs());
        }
        for q in probe_levels() {
            let x = p.quantile(q).unwrap();
            let (f, s) = (p.cdf(x).unwrap(), p.survival(x).unwrap());
            worst_q = worst_q.max((f - q).abs());
            v.require(f + s == 1.0, || format!("{p:?}: cdf + survival != 1 at {x}"));
            if p.lambda() == 0.0 {
                let z = p.gamma() * (p.alpha() * x).powf(-p.beta());
                let base_cdf = (-z).exp();
                let base_pdf = p.beta() * z / x * (-z).exp();
                // Both sides round z independently; exp(-z) amplifies that by z.
                let ulps = f64::EPSILON * (1.0 + z);
                v.require((f - base_cdf).abs() <= 4.0 * ulps * base_cdf, || format!("{p:?}: cdf reduction at {x}"));
                let pdf = p.pdf(x).unwrap();
                v.require((pdf - base_pdf).abs() <= 16.0 * ulps * base_pdf, || format!("{p:?}: pdf reduction at {x}"));
            }
        }
    }
    v.require(worst_norm < 1e-6, || format!("normalization error {worst_norm:e}"));
    v.require(worst_fd < 1e-6, || format!("pdf/cdf derivative error {worst_fd:e}"));
    v.require(worst_q <= 1e-10, || format!("quantile round trip error {worst_q:e}"));
    v.summary = format!(
        "{} grid points: normalization {worst_norm:.1e}, derivative {worst_fd:.1e}, round trip {worst_q:.1e}",
        grid.len()
    );
    v
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new();
    let (mut worst, mut checked) = (0.0f64, 0);
    for p in parameter_grid() {
        for r in 1..=6u32 {
            let res = p.raw_moment(r);
            if f64::from(r) >= p.beta() {
                v.require(matches!(res, Err(Error::MomentDoesNotExist { .. })), || format!("{p:?}: moment {r} should not exist"));
                continue;
            }
            v.require(res.is_ok(), || format!("{p:?}: moment {r} should exist"));
            if r <= 3 && f64::from(r) < p.beta() - 0.5 {
                let exact = res.unwrap();
                let numeric = integrate_support(&p, |x| x.powi(r as i32) * p.pdf(x).unwrap(), 1e-15, 1e-12 * exact);
                worst = worst.max(((numeric - exact) / exact).abs());
                checked += 1;
            }
        }
    }
    v.require(worst < 1e-5, || format!("moment relative error {worst:e}"));
    v.summary = format!("{checked} moments vs quadrature, worst relative error {worst:.1e}; existence boundary exact");
    v
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new();
    let points = [
        TgiwParams::new(1.0, 3.0, 1.0, 0.0).unwrap(),
        TgiwParams::new(2.0, 5.0, 0.5, 0.5).unwrap(),
        TgiwParams::new(0.5, 2.5, 3.0, -0.5).unwrap(),
        TgiwParams::new(1.0, 1.5, 1.0, 1.0).unwrap(),
        TgiwParams::new(1.0, 0.7, 2.0, -1.0).unwrap(),
    ];
    let n = 100_000;
    let critical = ks_critical_1pct(n);
    let mut worst_ks = 0.0f64;
    let mut worst_z = 0.0f64;
    for (idx, p) in points.iter().enumerate() {
        let mut draws = p.sample(n, 500 + idx as u64);
        draws.sort_by(f64::total_cmp);
        let ks = ks_distance(&draws, |x| p.cdf(x).unwrap());
        worst_ks = worst_ks.max(ks);
        v.require(ks < critical, || format!("{p:?}: K-S {ks} >= {critical}"));
        if p.beta() > 2.0 {
            let nf = n as f64;
            let mean = draws.iter().sum::<f64>() / nf;
            let sd = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
            let z = (mean - p.mean().unwrap()).abs() / (sd / nf.sqrt());
            worst_z = worst_z.max(z);
            v.require(z < 3.0, || format!("{p:?}: mean off by {z:.2} SE"));
        }
    }
    v.summary = format!("5 points x 1e5 draws: max K-S {worst_ks:.5} < {critical:.5}, max mean deviation {worst_z:.2} SE");
    v
}

fn criterion_5() -> Verdict {
    let mut v = Verdict::new();
    let p = TgiwParams::new(1.0, 2.0, 1.0, 0.5).unwrap();
    let mut worst_sum = 0.0f64;
    for n in [1u64, 3, 5, 10, 40] {
        for q in [0.01, 0.25, 0.5, 0.75, 0.99] {
            let x = p.quantile(q).unwrap();
            let total: f64 = (1..=n).map(|i| p.os_density(OrderSpec::new(n, i).unwrap(), x).unwrap()).sum();
            let target = n as f64 * p.pdf(x).unwrap();
            worst_sum = worst_sum.max(((total - target) / target).abs());
        }
    }
    v.require(worst_sum < 1e-13, || format!("sum identity error {worst_sum:e}"));

    let lo = p.quantile(1e-15).unwrap();
    let hi = p.quantile(1.0 - 1e-13).unwrap();
    let mut worst_bin = 0.0f64;
    let mut worst_int = 0.0f64;
    let reps = 100_000;
    for (n, i) in [(3u64, 1u64), (3, 3), (5, 3)] {
        let spec = OrderSpec::new(n, i).unwrap();
        let total = integrate_log(|x| p.os_density(spec, x).unwrap(), lo, hi, 1e-10);
        worst_int = worst_int.max((total - 1.0).abs());
        let mut edges = vec![lo];
        for k in 1..20 {
            let u = bisect(|u| order_stat_cdf(n, i, u) - k as f64 / 20.0, 0.0, 1.0, 1e-15);
            edges.push(p.quantile(u).unwrap());
        }
        edges.push(hi);
        let mut counts = [0usize; 20];
        let mut rng = tgiw::sampling::rng_from_seed(77 + n * 10 + i);
        for _ in 0..reps {
            let mut s = p.sample_with(n as usize, &mut rng);
            s.sort_by(f64::total_cmp);
            let x = s[(i - 1) as usize];
            counts[edges[1..20].partition_point(|&e| e < x)] += 1;
        }
        for (k, pair) in edges.windows(2).enumerate() {
            let prob = integrate_log(|x| p.os_density(spec, x).unwrap(), pair[0], pair[1], 1e-12);
            let se = (reps as f64 * prob * (1.0 - prob)).sqrt();
            let z = (counts[k] as f64 - reps as f64 * prob).abs() / se;
            worst_bin = worst_bin.max(z);
        }
    }
    v.require(worst_bin < 4.0, || format!("histogram deviation {worst_bin:.2} SE"));
    v.require(worst_int < 1e-5, || format!("integral error {worst_int:e}"));
    v.summary = format!("sum identity {worst_sum:.1e}, worst histogram bin {worst_bin:.2} SE, integrals within {worst_int:.1e}");
    v
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new();
    let d = failure_times();
    let mut rng = tgiw::sampling::rng_from_seed(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = [
            rng.random_range(0.3..3.0),
            rng.random_range(0.2..2.0),
            rng.random_range(0.3..3.0),
            rng.random_range(-0.95..0.95),
        ];
        let p = TgiwParams::new(x[0], x[1], x[2], x[3]).unwrap();
        let g = score(&p, &d);
        for k in 0..4 {
            let at = |t: f64| {
                let mut w = x;
                w[k] = t;
                log_likelihood(&TgiwParams::new(w[0], w[1], w[2], w[3]).unwrap(), &d)
            };
            let fd = derivative(at, x[k], 1e-4 * x[k].abs().max(0.1));
            worst = worst.max((g[k] - fd).abs() / fd.abs().max(1.0));
        }
    }
    v.require(worst < 1e-5, || format!("score error {worst:e}"));

    let global = FitConfig { solution: Solution::Global, ..FitConfig::new(SubModel::Tgiw) };
    let best = fit_mle(&d, &global).unwrap();
    let random_best = (0..1000)
        .map(|_| {
            let r = ReducedParams::new(rng.random_range(-3.0f64..3.0).exp(), rng.random_range(-2.5f64..1.5).exp(), rng.random_range(-1.0..=1.0)).unwrap();
            -log_likelihood(&r.expand(), &d)
        })
        .fold(f64::INFINITY, f64::min);
    v.require(best.neg_log_lik <= random_best, || format!("random search {random_best} beats {}", best.neg_log_lik));

    let giw = fit_mle(&d, &FitConfig::new(SubModel::Giw)).unwrap();
    let tgiw = fit_mle(&d, &FitConfig::new(SubModel::Tgiw)).unwrap();
    v.require(giw.neg_log_lik >= tgiw.neg_log_lik, || "nesting order violated".into());

    let p0 = ReducedParams::new(1.5, 1.2, 0.4).unwrap().expand();
    let values = (1..=50).map(|j| p0.quantile(j as f64 / 51.0).unwrap()).collect();
    let calibrated = Dataset::new(values, "calibrated").unwrap();
    let mut worst_ls = 0.0f64;
    for fr in [
        fit_lse(&calibrated, &FitConfig::new(SubModel::Tgiw)).unwrap(),
        fit_wlse(&calibrated, &FitConfig::new(SubModel::Tgiw)).unwrap(),
    ] {
        let r = fr.reduced;
        worst_ls = worst_ls.max((r.theta() - 1.5).abs()).max((r.beta() - 1.2).abs()).max((r.lambda() - 0.4).abs());
    }
    v.require(worst_ls < 1e-3, || format!("least-squares recovery error {worst_ls:e}"));
    v.summary = format!(
        "score error {worst:.1e}; MLE {:.4} <= random search {random_best:.4}; GIW {:.4} >= TGIW {:.4}; LSE/WLSE recovery {worst_ls:.1e}",
        best.neg_log_lik, giw.neg_log_lik, tgiw.neg_log_lik
    );
    v
}

fn criterion_7() -> Verdict {
    let mut v = Verdict::new();
    let d = failure_times();
    let fr = fit_mle(&d, &FitConfig::new(SubModel::Tgiw)).unwrap();
    let info = observed_information(&fr.params, &d, SubModel::Tgiw, Mode::Reduced).unwrap();
    v.require(info.positive_definite(), || format!("eigenvalues {:?}", info.eigenvalues));
    let full = fit_mle(&d, &FitConfig { mode: Mode::Full, ..FitConfig::new(SubModel::Tgiw) }).unwrap();
    let cond = full.information.as_ref().and_then(|i| i.condition_number);
    v.require(cond.is_none_or(|c| c > 1e6), || format!("full-mode condition number {cond:?}"));
    v.require(full.warnings.iter().any(|w| w.contains("ill-conditioned")), || "no ill-conditioning warning".into());
    let z = normal_critical(0.05).unwrap();
    v.require((z - 1.959_964).abs() < 1e-6, || format!("z = {z}"));
    for (k, ci) in fr.conf_intervals.iter().enumerate() {
        let se = fr.std_errors[k].unwrap_or(f64::NAN);
        let ok = ci.is_some_and(|(lo, hi)| {
            (lo - (fr.estimates[k] - z * se)).abs() < 1e-12 && (hi - (fr.estimates[k] + z * se)).abs() < 1e-12 && hi > lo
        });
        v.require(ok, || format!("interval {k} does not follow estimate +/- z se"));
    }
    v.summary = format!(
        "reduced eigenvalues {:.3e}..{:.3e}; full-mode condition {}; z = {z:.6}",
        info.eigenvalues[0],
        info.eigenvalues[info.eigenvalues.len() - 1],
        cond.map_or("infinite".into(), |c| format!("{c:.2e}"))
    );
    v
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new();
    let truth = published_giw();
    let mut rejections = 0;
    for seed in 1..=20u64 {
        let d = Dataset::new(truth.sample(50, seed), "h0").unwrap();
        let r = compare(&d, &[SubModel::Giw, SubModel::Tgiw], &CompareConfig::default()).unwrap();
        match r.lr[0].test {
            Some(t) => rejections += usize::from(t.reject),
            None => v.failures.push(format!("seed {seed}: {:?}", r.lr[0].error)),
        }
    }
    v.require(rejections <= 3, || format!("{rejections} rejections"));
    v.summary = format!("{rejections} of 20 GIW datasets rejected at 0.05");
    v
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 8] = [
        ("paper reproduction", criterion_1),
        ("distribution functions", criterion_2),
        ("moments", criterion_3),
        ("sampler", criterion_4),
        ("order statistics", criterion_5),
        ("estimation", criterion_6),
        ("inference", criterion_7),
        ("LR under H0", criterion_8),
    ];
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let verdict = run();
        let status = if verdict.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} ({name}): {status}: {}", idx + 1, verdict.summary);
        for f in &verdict.failures {
            println!("    {f}");
        }
        failed += usize::from(!verdict.failures.is_empty());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
