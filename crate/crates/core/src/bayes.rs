//! Conjugate Bayesian inference with independent gamma priors.
//!
//! Under gamma priors the posterior factorizes into two independent gamma
//! marginals, `τ1 | x ~ Gamma(a + D1, b + A)` and `τ2 | x ~ Gamma(c + D2, d + A)`
//! (shape/rate), so every Bayes estimator has a closed form and credible
//! intervals come from direct posterior draws.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::censoring::IatSample;
use crate::estimate::{check_gamma, stat_a, AMode, IntervalEstimate};
use crate::model::Cause;
use crate::{Error, Result};

pub use crate::special::log_gamma;

/// Default number of posterior draws used for HPD intervals.
pub const DEFAULT_HPD_DRAWS: usize = 5000;

/// Independent gamma priors: `τ1 ~ Gamma(a, b)`, `τ2 ~ Gamma(c, d)` (shape, rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPrior {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GammaPrior {
    /// The improper non-informative prior, all hyperparameters zero.
    pub const NONINFORMATIVE: GammaPrior = GammaPrior { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("prior hyperparameter {name} must be >= 0, got {v}")));
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// Informative prior centred on `(0.6, 0.8)`.
    pub fn prior_one() -> Self {
        GammaPrior { a: 3.0, b: 5.0, c: 4.0, d: 5.0 }
    }

    /// Informative prior centred on `(1, 1.5)`.
    pub fn prior_two() -> Self {
        GammaPrior { a: 2.0, b: 2.0, c: 3.0, d: 3.0 }
    }

    pub fn is_noninformative(&self) -> bool {
        *self == Self::NONINFORMATIVE
    }
}

/// Loss function defining a Bayes point estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LossSpec {
    /// Squared error.
    Squared,
    /// Linear-exponential with shape `p != 0`.
    Linex { p: f64 },
    /// General entropy with shape `q != 0`.
    Gelf { q: f64 },
}

impl LossSpec {
    pub fn linex(p: f64) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(Error::validation(format!("LINEX parameter must be nonzero and finite, got {p}")));
        }
        Ok(LossSpec::Linex { p })
    }

    pub fn gelf(q: f64) -> Result<Self> {
        if q == 0.0 || !q.is_finite() {
            return Err(Error::validation(format!("GELF parameter must be nonzero and finite, got {q}")));
        }
        Ok(LossSpec::Gelf { q })
    }

    /// The five losses of the standard study: SELF, LINEX(-0.05, 0.5), GELF(-0.05, 0.5).
    pub fn standard_set() -> Vec<LossSpec> {
        vec![
            LossSpec::Squared,
            LossSpec::Linex { p: -0.05 },
            LossSpec::Linex { p: 0.5 },
            LossSpec::Gelf { q: -0.05 },
            LossSpec::Gelf { q: 0.5 },
        ]
    }
}

impl fmt::Display for LossSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossSpec::Squared => f.write_str("SELF"),
            LossSpec::Linex { p } => write!(f, "LINEX(p={p})"),
            LossSpec::Gelf { q } => write!(f, "GELF(q={q})"),
        }
    }
}

/// Parses `self`, `linex:<p>` or `gelf:<q>`.
impl FromStr for LossSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (kind, arg) = match lower.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (lower.as_str(), None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::validation(format!("loss {kind} needs a parameter, e.g. {kind}:0.5")))?
                .parse::<f64>()
                .map_err(|e| Error::validation(format!("bad loss parameter in {s:?}: {e}")))
        };
        match kind {
            "self" | "squared" if arg.is_none() => Ok(LossSpec::Squared),
            "linex" | "llf" => LossSpec::linex(num(arg)?),
            "gelf" => LossSpec::gelf(num(arg)?),
            _ => Err(Error::validation(format!("unknown loss {s:?}, expected self, linex:<p> or gelf:<q>"))),
        }
    }
}

/// A gamma distribution in shape/rate form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPosterior {
    pub shape: f64,
    pub rate: f64,
}

impl GammaPosterior {
    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }

    /// Mode `(shape - 1) / rate`, defined for `shape >= 1`.
    pub fn mode(&self) -> Option<f64> {
        (self.shape >= 1.0).then(|| (self.shape - 1.0) / self.rate)
    }

    pub fn ln_pdf(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() - crate::special::log_gamma(self.shape).unwrap_or(f64::NAN)
            + (self.shape - 1.0) * tau.ln()
            - self.rate * tau
    }

    /// Second derivative of the log density, `-(shape - 1) / τ²`.
    pub fn ln_pdf_curvature(&self, tau: f64) -> f64 {
        -(self.shape - 1.0) / (tau * tau)
    }
}

/// The two independent marginal posteriors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorParams {
    pub tau1: GammaPosterior,
    pub tau2: GammaPosterior,
}

impl PosteriorParams {
    pub fn get(&self, cause: Cause) -> &GammaPosterior {
        match cause {
            Cause::One => &self.tau1,
            Cause::Two => &self.tau2,
        }
    }
}

/// Posterior from sufficient statistics `(D1, D2, A)`.
pub fn posterior_from_stats(d1: usize, d2: usize, a_stat: f64, prior: &GammaPrior) -> Result<PosteriorParams> {
    let make = |cause: u8, shape: f64, rate: f64| {
        if shape > 0.0 && rate > 0.0 && shape.is_finite() && rate.is_finite() {
            Ok(GammaPosterior { shape, rate })
        } else {
            Err(Error::ImproperPosterior { cause, shape, rate })
        }
    };
    Ok(PosteriorParams {
        tau1: make(1, prior.a + d1 as f64, prior.b + a_stat)?,
        tau2: make(2, prior.c + d2 as f64, prior.d + a_stat)?,
    })
}

pub fn posterior(sample: &IatSample, prior: &GammaPrior, mode: AMode) -> Result<PosteriorParams> {
    posterior_from_stats(sample.d1(), sample.d2(), stat_a(sample, mode), prior)
}

/// Posterior means.
pub fn estimate_self(post: &PosteriorParams) -> (f64, f64) {
    (post.tau1.mean(), post.tau2.mean())
}

fn linex_one(g: &GammaPosterior, p: f64, cause: u8) -> Result<f64> {
    if !(g.rate + p > 0.0) {
        return Err(Error::EstimateNonexistent {
            cause,
            reason: format!("LINEX p={p} requires p > -rate = {}", -g.rate),
        });
    }
    // -(shape/p) ln(rate / (rate + p)) == (shape/p) ln(1 + p/rate)
    Ok(g.shape / p * (p / g.rate).ln_1p())
}

/// Bayes estimates under LINEX loss, `-(1/p) ln E[exp(-pτ)]`.
pub fn estimate_linex(post: &PosteriorParams, p: f64) -> Result<(f64, f64)> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::validation(format!("LINEX parameter must be nonzero and finite, got {p}")));
    }
    Ok((linex_one(&post.tau1, p, 1)?, linex_one(&post.tau2, p, 2)?))
}

/// `Γ(shape + k) / Γ(shape)`, exact as a product when `k` is a small positive integer.
fn gamma_ratio(shape: f64, k: f64) -> f64 {
    if k > 0.0 && k.fract() == 0.0 && k <= 64.0 {
        (0..k as u32).map(|i| shape + i as f64).product()
    } else {
        let lg = |x: f64| crate::special::log_gamma(x).expect("positive argument");
        (lg(shape + k) - lg(shape)).exp()
    }
}

fn gelf_one(g: &GammaPosterior, q: f64, cause: u8) -> Result<f64> {
    if !(q < g.shape) {
        return Err(Error::EstimateNonexistent {
            cause,
            reason: format!("GELF q={q} requires q < shape = {}", g.shape),
        });
    }
    // E[τ^-q] = Γ(shape - q) / (Γ(shape) rate^-q)
    let moment = if q < 0.0 {
        gamma_ratio(g.shape, -q) / g.rate.powf(-q)
    } else {
        gamma_ratio(g.shape, -q) * g.rate.powf(q)
    };
    Ok(moment.powf(-1.0 / q))
}

/// Bayes estimates under general entropy loss, `E[τ^-q]^(-1/q)`.
pub fn estimate_gelf(post: &PosteriorParams, q: f64) -> Result<(f64, f64)> {
    if q == 0.0 || !q.is_finite() {
        return Err(Error::validation(format!("GELF parameter must be nonzero and finite, got {q}")));
    }
    Ok((gelf_one(&post.tau1, q, 1)?, gelf_one(&post.tau2, q, 2)?))
}

pub fn bayes_estimate(post: &PosteriorParams, loss: &LossSpec) -> Result<(f64, f64)> {
    match *loss {
        LossSpec::Squared => Ok(estimate_self(post)),
        LossSpec::Linex { p } => estimate_linex(post, p),
        LossSpec::Gelf { q } => estimate_gelf(post, q),
    }
}

fn standard_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = 1.0 - rng.random::<f64>();
        return standard_gamma(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// One gamma variate (shape/rate) by the Marsaglia–Tsang squeeze method.
pub fn sample_gamma<R: Rng + ?Sized>(g: &GammaPosterior, rng: &mut R) -> f64 {
    standard_gamma(g.shape, rng) / g.rate
}

/// `n_draws` independent draws from each marginal posterior, alternating
/// τ1 and τ2 draws from the stream.
pub fn sample_posterior<R: Rng + ?Sized>(post: &PosteriorParams, n_draws: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mut first = Vec::with_capacity(n_draws);
    let mut second = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        first.push(sample_gamma(&post.tau1, rng));
        second.push(sample_gamma(&post.tau2, rng));
    }
    (first, second)
}

/// Number of order-statistic gaps spanned by a `1 - gamma` window over `n` draws.
fn window_len(n: usize, gamma: f64) -> usize {
    // the nudge keeps products like (1 - 0.05) * 100 from flooring to 94
    ((1.0 - gamma) * n as f64 + 1e-9).floor() as usize
}

/// Shortest window over sorted draws covering a `1 - gamma` fraction.
///
/// Returns `(s[j*], s[j* + w])` with `w = floor((1 - gamma) N)`, where `j*`
/// minimizes `s[j + w] - s[j]`; ties go to the smallest `j`.
pub fn hpd(draws: &[f64], gamma: f64) -> Result<IntervalEstimate> {
    let mut sorted = draws.to_vec();
    if sorted.iter().any(|x| x.is_nan()) {
        return Err(Error::validation("HPD draws contain NaN"));
    }
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    hpd_sorted(&sorted, gamma)
}

/// [`hpd`] for draws already in ascending order.
pub fn hpd_sorted(sorted: &[f64], gamma: f64) -> Result<IntervalEstimate> {
    check_gamma(gamma)?;
    let n = sorted.len();
    let w = window_len(n, gamma);
    if n < 2 || w == 0 || w >= n {
        return Err(Error::validation(format!(
            "{n} draws are too few for a {:.4} HPD window",
            1.0 - gamma
        )));
    }
    let (mut best_j, mut best_width) = (0, f64::INFINITY);
    for j in 0..n - w {
        let width = sorted[j + w] - sorted[j];
        if width < best_width {
            best_width = width;
            best_j = j;
        }
    }
    Ok(IntervalEstimate {
        lower: sorted[best_j],
        upper: sorted[best_j + w],
        level: 1.0 - gamma,
    })
}

/// HPD intervals for both rates from `n_draws` posterior draws.
pub fn hpd_intervals<R: Rng + ?Sized>(
    post: &PosteriorParams,
    n_draws: usize,
    gamma: f64,
    rng: &mut R,
) -> Result<(IntervalEstimate, IntervalEstimate)> {
    let (mut first, mut second) = sample_posterior(post, n_draws, rng);
    first.sort_unstable_by(|a, b| a.total_cmp(b));
    second.sort_unstable_by(|a, b| a.total_cmp(b));
    Ok((hpd_sorted(&first, gamma)?, hpd_sorted(&second, gamma)?))
}
