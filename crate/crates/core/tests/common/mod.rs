//! Independent numerical oracles shared by the integration suites.
#![allow(dead_code)]

use iatpcs::censoring::{self, CensoringPlan, IatSample};
use iatpcs::model::RatePair;
use rand::Rng;

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7-15 panel: (Kronrod estimate, |Kronrod - Gauss|).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`: the
/// panel with the largest error estimate is bisected until the summed error
/// falls below `rel_tol` times the estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (k, e) = gk15(&f, a, b);
    let mut panels = vec![(a, b, k, e)];
    for _ in 0..5000 {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= rel_tol * total.abs() {
            break;
        }
        let worst = (0..panels.len()).max_by(|&i, &j| panels[i].3.total_cmp(&panels[j].3)).unwrap();
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (k1, e1) = gk15(&f, lo, mid);
        let (k2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, k1, e1));
        panels.push((mid, hi, k2, e2));
    }
    panels.iter().map(|p| p.2).sum()
}

/// `ln ∫ exp(h(u)) du` for a concave log-integrand `h` on the real line.
pub fn log_integral(h: impl Fn(f64) -> f64) -> f64 {
    // bracket the maximum, then golden-section search
    let (mut lo, mut hi) = (-1.0, 1.0);
    while h(lo - 1.0) > h(lo) {
        lo -= 2.0 * (1.0 + lo.abs());
    }
    while h(hi + 1.0) > h(hi) {
        hi += 2.0 * (1.0 + hi.abs());
    }
    lo -= 1.0;
    hi += 1.0;
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if h(x1) < h(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let u_star = 0.5 * (lo + hi);
    let h_star = h(u_star);
    let cut = 90.0;
    let mut left = u_star;
    let mut step = 0.125;
    while h(left) - h_star > -cut {
        left -= step;
        step *= 1.25;
    }
    let mut right = u_star;
    step = 0.125;
    while h(right) - h_star > -cut {
        right += step;
        step *= 1.25;
    }
    let g = |u: f64| (h(u) - h_star).exp();
    let body = integrate(g, left, u_star, 1e-14) + integrate(g, u_star, right, 1e-14);
    h_star + body.ln()
}

/// Unnormalized posterior kernel of one rate after the substitution `τ = e^u`:
/// `τ^(d + a) exp(-(A + b) τ)`, the Jacobian absorbed into the exponent.
fn kernel(d: f64, a_stat: f64, a: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |u: f64| (d + a) * u - (a_stat + b) * u.exp()
}

/// Posterior mean by quadrature.
pub fn quad_self(d: f64, a_stat: f64, a: f64, b: f64) -> f64 {
    let k = kernel(d, a_stat, a, b);
    (log_integral(|u| k(u) + u) - log_integral(&k)).exp()
}

/// `-(1/p) ln E[exp(-p τ)]` by quadrature.
pub fn quad_linex(d: f64, a_stat: f64, a: f64, b: f64, p: f64) -> f64 {
    let k = kernel(d, a_stat, a, b);
    let log_ratio = log_integral(|u| k(u) - p * u.exp()) - log_integral(&k);
    -log_ratio / p
}

/// `E[τ^(-q)]^(-1/q)` by quadrature.
pub fn quad_gelf(d: f64, a_stat: f64, a: f64, b: f64, q: f64) -> f64 {
    let k = kernel(d, a_stat, a, b);
    let log_moment = log_integral(|u| k(u) - q * u) - log_integral(&k);
    (-log_moment / q).exp()
}

/// Nelder-Mead minimization; returns the best vertex and its value.
pub fn nelder_mead(f: impl Fn(&[f64; 2]) -> f64, x0: [f64; 2], step: f64, max_iter: usize) -> ([f64; 2], f64) {
    let mut simplex = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut values = simplex.map(|x| f(&x));
    let along = |a: &[f64; 2], b: &[f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let size = (simplex[1][0] - simplex[0][0]).abs().max((simplex[1][1] - simplex[0][1]).abs())
            .max((simplex[2][0] - simplex[0][0]).abs().max((simplex[2][1] - simplex[0][1]).abs()));
        if size < 1e-13 {
            break;
        }
        let centroid = [0.5 * (simplex[0][0] + simplex[1][0]), 0.5 * (simplex[0][1] + simplex[1][1])];
        let reflected = along(&centroid, &simplex[2], -1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(&centroid, &simplex[2], -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] {
                along(&centroid, &reflected, 0.5)
            } else {
                along(&centroid, &simplex[2], 0.5)
            };
            let fc = f(&contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = along(&simplex[0], &simplex[i], 0.5);
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    (simplex[best], values[best])
}

/// Log-likelihood maximizer found numerically in log-rate coordinates, with
/// the total-time-on-test statistic recomputed from the raw sample.
pub fn numeric_mle(sample: &IatSample, corrected: bool) -> [f64; 2] {
    let observed: f64 = sample
        .times()
        .iter()
        .zip(sample.effective_removals())
        .map(|(x, &r)| (1.0 + r as f64) * x)
        .sum();
    let weight = if corrected { sample.r_star() as f64 } else { 1.0 };
    let a = observed + weight * sample.t_star();
    let (d1, d2) = (sample.d1() as f64, sample.d2() as f64);
    let nll = |th: &[f64; 2]| -(d1 * th[0] + d2 * th[1] - (th[0].exp() + th[1].exp()) * a);
    let mut x = [0.0, 0.0];
    for _ in 0..4 {
        x = nelder_mead(nll, x, 0.5, 20_000).0;
    }
    [x[0].exp(), x[1].exp()]
}

/// A random valid plan with `n ≤ max_n`.
pub fn random_plan<R: Rng>(rng: &mut R, max_n: usize) -> CensoringPlan {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=n);
    let mut removals = vec![0usize; m];
    for _ in 0..n - m {
        removals[rng.random_range(0..m)] += 1;
    }
    let t1 = rng.random_range(0.05..2.0);
    let t2 = t1 + rng.random_range(0.05..2.0);
    CensoringPlan::new(n, m, removals, t1, t2).unwrap()
}

/// A random sample with at least one failure of each cause.
pub fn random_sample<R: Rng>(rng: &mut R, max_n: usize) -> IatSample {
    loop {
        let plan = random_plan(rng, max_n);
        let rates = RatePair::new(rng.random_range(0.1..3.0), rng.random_range(0.1..3.0)).unwrap();
        let s = censoring::generate(&plan, &rates, rng);
        if s.d1() > 0 && s.d2() > 0 {
            return s;
        }
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}
