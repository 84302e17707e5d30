//! Subcommand implementations.

use std::fmt::Write as _;

use serde::Serialize;
use tgiw::selection::{ks_statistic, CompareConfig, ComparisonReport};
use tgiw::study::StudyReport;
use tgiw::{Dataset, FitConfig, FitResult, Method, Mode, ReducedParams, Solution, SubModel, TgiwParams};

use crate::cli::{CompareArgs, FitArgs, ReproduceArgs, SampleArgs, SolutionArg, TabulateArgs};
use crate::error::CliError;
use crate::input::load_dataset;
use crate::output::{emit, g6, sig, to_json, RunManifest, VERSION};

#[derive(Serialize)]
struct FitBody<'a> {
    dataset: &'a str,
    n: usize,
    ks: f64,
    expanded: TgiwParams,
    reduced: ReducedParams,
    result: &'a FitResult,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Mle => "MLE",
        Method::Lse => "LSE",
        Method::Wlse => "WLSE",
    }
}

fn describe_config(cfg: &FitConfig) -> String {
    let mode = match cfg.mode {
        Mode::Reduced => "reduced",
        Mode::Full => "full",
    };
    let solution = match cfg.solution {
        Solution::Stationary => "stationary",
        Solution::Global => "global",
    };
    format!("{mode} mode, {solution} solution, {} restarts, seed {}", cfg.multistart, cfg.seed)
}

fn fit_text(d: &Dataset, cfg: &FitConfig, fr: &FitResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} fit by {} on {} (n = {})", fr.model, method_name(fr.method), d.label(), d.len());
    let _ = writeln!(s, "  {}", describe_config(cfg));
    let confidence = format!("{}% interval", g6(100.0 * (1.0 - fr.level)));
    let _ = writeln!(s, "  {:<10}{:>14}{:>14}  {confidence}", "parameter", "estimate", "std. error");
    for (k, param) in fr.free_params.iter().enumerate() {
        let se = fr.std_errors[k].map_or_else(|| "-".to_string(), g6);
        let ci = fr.conf_intervals[k].map_or_else(|| "-".to_string(), |(lo, hi)| format!("[{}, {}]", g6(lo), g6(hi)));
        let _ = writeln!(s, "  {:<10}{:>14}{:>14}  {ci}", param.name(), g6(fr.estimates[k]), se);
    }
    let p = fr.params;
    let r = fr.reduced;
    let _ = writeln!(
        s,
        "  expanded: alpha = {}, beta = {}, gamma = {}, lambda = {}",
        g6(p.alpha()),
        g6(p.beta()),
        g6(p.gamma()),
        g6(p.lambda())
    );
    let _ = writeln!(s, "  reduced:  theta = {}, beta = {}, lambda = {}", g6(r.theta()), g6(r.beta()), g6(r.lambda()));
    let _ = writeln!(s, "  -loglik = {}", g6(fr.neg_log_lik));
    if fr.method != Method::Mle {
        let _ = writeln!(s, "  {} objective = {}", method_name(fr.method), sig(fr.objective, 6));
    }
    let _ = writeln!(s, "  K-S = {}", g6(ks_statistic(&fr.params, d)));
    let converged = if fr.converged { "yes" } else { "no" };
    if fr.method == Method::Mle {
        let _ = writeln!(
            s,
            "  converged: {converged} ({} iterations, score norm per observation {})",
            fr.iterations,
            sig(fr.gradient_norm, 3)
        );
    } else {
        let _ = writeln!(s, "  converged: {converged} ({} iterations)", fr.iterations);
    }
    for w in &fr.warnings {
        let _ = writeln!(s, "  warning: {w}");
    }
    s
}

pub fn fit(args: FitArgs) -> Result<(), CliError> {
    let d = load_dataset(&args.data.data, args.data.column.as_deref())?;
    let cfg = args.optimizer.config(args.model, args.method)?;
    let fr = tgiw::fit(&d, &cfg)?;
    let content = if args.output.json {
        let manifest = RunManifest::new("fit", &args.data.data, Some(cfg.clone()), Some(cfg.seed));
        let body = FitBody {
            dataset: d.label(),
            n: d.len(),
            ks: ks_statistic(&fr.params, &d),
            expanded: fr.params,
            reduced: fr.reduced,
            result: &fr,
        };
        to_json(&manifest, &body)?
    } else {
        fit_text(&d, &cfg, &fr)
    };
    emit(args.output.out.as_deref(), &content)?;
    if !fr.converged {
        return Err(CliError::Convergence(format!("{} fit did not converge", fr.model)));
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareBody<'a> {
    dataset: &'a str,
    report: &'a ComparisonReport,
}

fn compare_text(d: &Dataset, report: &ComparisonReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Model comparison on {} (n = {}, k counts {})",
        d.label(),
        report.n,
        if report.paper_k { "every natural parameter" } else { "identifiable parameters" }
    );
    let _ = writeln!(s, "{:<10}{:>3}{:>12}{:>12}{:>12}{:>12}", "Model", "k", "K-S", "-2l", "AIC", "AICC");
    for row in &report.rows {
        match (&row.error, row.ks, row.neg2_log_lik, row.aic, row.aicc) {
            (None, Some(ks), Some(n2), Some(aic), Some(aicc)) => {
                let _ = writeln!(
                    s,
                    "{:<10}{:>3}{:>12}{:>12}{:>12}{:>12}",
                    row.model.name(),
                    row.k,
                    g6(ks),
                    g6(n2),
                    g6(aic),
                    g6(aicc)
                );
            }
            (err, ..) => {
                let _ = writeln!(s, "{:<10}{:>3}  failed: {}", row.model.name(), row.k, err.as_deref().unwrap_or("unknown"));
            }
        }
    }
    for lr in &report.lr {
        let _ = writeln!(s);
        match (&lr.test, &lr.error) {
            (Some(t), _) => {
                let _ = writeln!(s, "{} vs {} (df = {}, level {})", lr.restricted, lr.full, t.df, g6(t.level));
                let verdict = if t.reject {
                    format!("ω = {:.3} > {:.3}: reject H0", t.omega, t.critical)
                } else {
                    format!("ω = {:.3} <= {:.3}: do not reject H0", t.omega, t.critical)
                };
                let _ = writeln!(s, "{verdict}");
            }
            (None, err) => {
                let _ = writeln!(s, "{} vs {}: LR test unavailable: {}", lr.restricted, lr.full, err.as_deref().unwrap_or("unknown"));
            }
        }
    }
    let notes: Vec<String> = report
        .rows
        .iter()
        .filter_map(|r| r.fit.as_ref().map(|f| (r.model, f)))
        .flat_map(|(m, f)| f.warnings.iter().map(move |w| format!("{m}: {w}")))
        .collect();
    if !notes.is_empty() {
        let _ = writeln!(s);
        for n in notes {
            let _ = writeln!(s, "note: {n}");
        }
    }
    s
}

pub fn compare(args: CompareArgs) -> Result<(), CliError> {
    if args.models.len() < 2 {
        return Err(CliError::Input("compare needs at least 2 models".into()));
    }
    let d = load_dataset(&args.data.data, args.data.column.as_deref())?;
    let fit = args.optimizer.config(args.models[0], crate::cli::MethodArg::Mle)?;
    let cfg = CompareConfig {
        fit: fit.clone(),
        paper_k: args.paper_k,
        ..CompareConfig::default()
    };
    let report = tgiw::selection::compare(&d, &args.models, &cfg)?;
    let content = if args.output.json {
        let manifest = RunManifest::new("compare", &args.data.data, Some(fit), Some(cfg.fit.seed));
        to_json(&manifest, &CompareBody { dataset: d.label(), report: &report })?
    } else {
        compare_text(&d, &report)
    };
    emit(args.output.out.as_deref(), &content)?;
    let stalled: Vec<&str> = report
        .rows
        .iter()
        .filter(|r| r.fit.as_ref().is_some_and(|f| !f.converged))
        .map(|r| r.model.name())
        .collect();
    if !stalled.is_empty() {
        return Err(CliError::Convergence(format!("fits did not converge: {}", stalled.join(", "))));
    }
    Ok(())
}

pub fn sample(args: SampleArgs) -> Result<(), CliError> {
    let a = &args.params;
    let p = TgiwParams::new(a.alpha, a.beta, a.gamma, a.lambda)?;
    if args.n == 0 {
        return Err(CliError::Input("-n must be at least 1".into()));
    }
    let mut s = format!(
        "# tgiw {VERSION} sample: alpha={} beta={} gamma={} lambda={} n={} seed={}\n",
        a.alpha, a.beta, a.gamma, a.lambda, args.n, args.seed
    );
    for x in p.sample(args.n, args.seed) {
        let _ = writeln!(s, "{x}");
    }
    emit(args.out.as_deref(), &s)
}

fn tabulated_params(args: &TabulateArgs, data: Option<&Dataset>) -> Result<TgiwParams, CliError> {
    let given = [args.alpha, args.beta, args.gamma, args.lambda];
    if let Some(model) = args.fit {
        if given.iter().any(Option::is_some) {
            return Err(CliError::Input("--fit replaces --alpha/--beta/--gamma/--lambda; give one or the other".into()));
        }
        let d = data.expect("--fit requires --data");
        return Ok(tgiw::fit_mle(d, &FitConfig::new(model))?.params);
    }
    match given {
        [Some(a), Some(b), Some(g), Some(l)] => Ok(TgiwParams::new(a, b, g, l)?),
        _ => {
            let missing: Vec<&str> = ["alpha", "beta", "gamma", "lambda"]
                .into_iter()
                .zip(given)
                .filter(|(_, v)| v.is_none())
                .map(|(n, _)| n)
                .collect();
            Err(CliError::Input(format!("missing parameters: --{}", missing.join(", --"))))
        }
    }
}

fn grid(args: &TabulateArgs, p: &TgiwParams) -> Result<Vec<f64>, CliError> {
    if !args.x.is_empty() {
        if let Some(bad) = args.x.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
            return Err(CliError::Input(format!("grid point {bad} is not positive")));
        }
        return Ok(args.x.clone());
    }
    let min = args.min.unwrap_or_else(|| p.quantile(0.001).expect("valid level"));
    let max = args.max.unwrap_or_else(|| p.quantile(0.99).expect("valid level"));
    if !(min > 0.0 && min.is_finite() && max.is_finite()) {
        return Err(CliError::Input(format!("grid bounds must be positive and finite, got min = {min}, max = {max}")));
    }
    if min >= max {
        return Err(CliError::Input(format!("grid needs min < max, got min = {min}, max = {max}")));
    }
    if args.points < 2 {
        return Err(CliError::Input(format!("grid needs at least 2 points, got {}", args.points)));
    }
    let last = (args.points - 1) as f64;
    Ok((0..args.points)
        .map(|k| {
            let t = k as f64 / last;
            if k + 1 == args.points {
                max
            } else if args.log {
                (min.ln() + t * (max.ln() - min.ln())).exp()
            } else {
                min + t * (max - min)
            }
        })
        .collect())
}

pub fn tabulate(args: TabulateArgs) -> Result<(), CliError> {
    let data = match &args.data {
        Some(src) => Some(load_dataset(src, args.column.as_deref())?),
        None => None,
    };
    let p = tabulated_params(&args, data.as_ref())?;
    let xs = grid(&args, &p)?;
    let fmt = |v: f64| if args.full_precision { format!("{v}") } else { g6(v) };
    let csv_err = |e: csv::Error| CliError::Input(format!("CSV output failed: {e}"));

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "pdf", "cdf", "survival", "hazard"]).map_err(csv_err)?;
    for &x in &xs {
        let hazard = p.hazard(x).unwrap_or(f64::INFINITY);
        w.write_record([fmt(x), fmt(p.pdf(x)?), fmt(p.cdf(x)?), fmt(p.survival(x)?), fmt(hazard)])
            .map_err(csv_err)?;
    }
    let mut out = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;

    if let Some(d) = &data {
        out.push(b'\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "ecdf_before", "ecdf_after", "cdf", "gap"]).map_err(csv_err)?;
        let n = d.len() as f64;
        for (idx, &x) in d.values().iter().enumerate() {
            let (before, after) = (idx as f64 / n, (idx + 1) as f64 / n);
            let f = p.cdf(x)?;
            let gap = (after - f).abs().max((f - before).abs());
            w.write_record([fmt(x), fmt(before), fmt(after), fmt(f), fmt(gap)]).map_err(csv_err)?;
        }
        out.extend(w.into_inner().map_err(|e| CliError::Input(e.to_string()))?);
    }
    emit(args.out.as_deref(), &String::from_utf8(out).expect("CSV output is UTF-8"))
}

#[derive(Serialize)]
struct ReproduceBody<'a> {
    verdict: &'a str,
    #[serde(flatten)]
    report: &'a StudyReport,
}

fn reproduce_text(report: &StudyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Embedded 50-item failure-time study: computed vs published");
    let _ = writeln!(s, "{:<20}{:>14}{:>14}{:>11}  result", "check", "computed", "published", "tolerance");
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{:<20}{:>14}{:>14}{:>11}  {}",
            c.name,
            g6(c.computed),
            g6(c.expected),
            g6(c.tolerance),
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    if !report.notes.is_empty() {
        let _ = writeln!(s, "\nFor information (not checked):");
        for n in &report.notes {
            match n.reference {
                Some(r) => {
                    let _ = writeln!(s, "  {:<30}{:>14}  published point {}", n.name, g6(n.computed), g6(r));
                }
                None => {
                    let _ = writeln!(s, "  {:<30}{:>14}", n.name, g6(n.computed));
                }
            }
        }
    }
    for r in &report.remarks {
        let _ = writeln!(s, "note: {r}");
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(s, "\n{passed} of {} checks pass", report.checks.len());
    s
}

pub fn reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    let cfg = FitConfig {
        solution: match args.solution {
            SolutionArg::Stationary => Solution::Stationary,
            SolutionArg::Global => Solution::Global,
        },
        multistart: args.multistart,
        seed: args.seed,
        ..FitConfig::new(SubModel::Tgiw)
    };
    cfg.validate()?;
    let report = tgiw::study::reproduce(&cfg)?;
    let content = if args.output.json {
        let manifest = RunManifest::new("reproduce-paper", tgiw::study::DATASET_TAG, Some(cfg.clone()), Some(cfg.seed));
        let verdict = if report.all_pass { "pass" } else { "fail" };
        to_json(&manifest, &ReproduceBody { verdict, report: &report })?
    } else {
        reproduce_text(&report)
    };
    emit(args.output.out.as_deref(), &content)?;
    if !report.all_pass {
        let failing: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        return Err(CliError::Reproduction(failing.join(", ")));
    }
    Ok(())
}
