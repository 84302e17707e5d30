//! Independent numerical oracles shared by the integration tests.

#![allow(dead_code)]

use tgiw::TgiwParams;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point Gauss rule.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let dx = h * XGK[k];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (est, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return est;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    adapt(&f, a, b, tol, 40)
}

/// Quadrature over `[lo, hi]` in `t = ln x`, suited to heavy right tails.
pub fn integrate_log(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let g = |t: f64| {
        let x = t.exp();
        f(x) * x
    };
    adapt(&g, lo.ln(), hi.ln(), tol, 40)
}

/// Integral of `f` against the TGIW law's support, cut where the cdf is
/// below `1e-15` or above `1 - tail`.
pub fn integrate_support(p: &TgiwParams, f: impl Fn(f64) -> f64, tail: f64, tol: f64) -> f64 {
    let lo = p.quantile(1e-15).unwrap();
    let hi = p.quantile(1.0 - tail).unwrap();
    integrate_log(f, lo, hi, tol)
}

/// Root of a sign-changing `f` on `[lo, hi]` by bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    while hi - lo > tol * lo.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Five-point central difference.
pub fn derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Coarse grid followed by compass-search refinement; minimizes `f` over a box.
pub fn grid_minimize(f: impl Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], points: usize) -> (Vec<f64>, f64) {
    let dim = lo.len();
    let mut best = lo.to_vec();
    let mut best_f = f64::INFINITY;
    let total = points.pow(dim as u32);
    for idx in 0..total {
        let mut rest = idx;
        let x: Vec<f64> = (0..dim)
            .map(|k| {
                let i = rest % points;
                rest /= points;
                lo[k] + (hi[k] - lo[k]) * i as f64 / (points - 1) as f64
            })
            .collect();
        let v = f(&x);
        if v < best_f {
            best_f = v;
            best = x;
        }
    }
    let mut step: Vec<f64> = (0..dim).map(|k| (hi[k] - lo[k]) / (points - 1) as f64).collect();
    while step.iter().any(|&s| s > 1e-12) {
        let mut improved = false;
        for k in 0..dim {
            for sign in [-1.0, 1.0] {
                let mut x = best.clone();
                x[k] += sign * step[k];
                let v = f(&x);
                if v < best_f {
                    best_f = v;
                    best = x;
                    improved = true;
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    (best, best_f)
}

/// `P(X_(i:n) <= x)` from the binomial sum over the number of draws below `x`.
pub fn order_stat_cdf(n: u64, i: u64, f: f64) -> f64 {
    (i..=n)
        .map(|k| binomial(n, k) * f.powi(k as i32) * (1.0 - f).powi((n - k) as i32))
        .sum()
}

pub fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, m| acc * (n - m) as f64 / (m + 1) as f64)
}

/// Sixty-point grid: `beta` in {0.5, 1, 2, 5}, `gamma` in {0.5, 1, 3},
/// `lambda` in {-1, -0.5, 0, 0.5, 1}, `alpha = 1`.
pub fn parameter_grid() -> Vec<TgiwParams> {
    let mut out = Vec::with_capacity(60);
    for beta in [0.5, 1.0, 2.0, 5.0] {
        for gamma in [0.5, 1.0, 3.0] {
            for lambda in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                out.push(TgiwParams::new(1.0, beta, gamma, lambda).unwrap());
            }
        }
    }
    out
}

/// Probabilities at which distribution functions are probed.
pub fn probe_levels() -> Vec<f64> {
    let mut q = vec![1e-6];
    q.extend((1..=99).map(|k| k as f64 / 100.0));
    q.push(1.0 - 1e-6);
    q
}

/// Asymptotic one-sample K-S critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.627_6 / (n as f64).sqrt()
}
