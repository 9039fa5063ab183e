//! Maximum likelihood estimation and asymptotic confidence intervals.
//!
//! The exponential likelihood depends on the data only through `D1`, `D2`
//! and the total-time-on-test statistic `A`, so the MLEs are `D_j / A`.

use std::fmt;
use std::str::FromStr;

use crate::censoring::IatSample;
use crate::model::Cause;
use crate::{Error, Result};

pub use crate::special::normal_quantile;

/// How the terminal withdrawal enters the statistic `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AMode {
    /// `Σ (r_i + 1) x_i + T*`: terminal term unweighted.
    #[default]
    Paper,
    /// `Σ (r_i + 1) x_i + R* T*`: terminal term weighted by the units withdrawn.
    Corrected,
}

impl fmt::Display for AMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AMode::Paper => "paper",
            AMode::Corrected => "corrected",
        })
    }
}

impl FromStr for AMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" => Ok(AMode::Paper),
            "corrected" => Ok(AMode::Corrected),
            other => Err(Error::validation(format!("unknown A-statistic mode {other:?}"))),
        }
    }
}

/// Total-time-on-test statistic `A`, built from the effective removals.
pub fn stat_a(sample: &IatSample, mode: AMode) -> f64 {
    let observed: f64 = sample
        .times()
        .iter()
        .zip(sample.effective_removals())
        .map(|(&x, &r)| (r as f64 + 1.0) * x)
        .sum();
    let terminal = match mode {
        AMode::Paper => sample.t_star(),
        AMode::Corrected => sample.r_star() as f64 * sample.t_star(),
    };
    observed + terminal
}

fn check_rates(tau1: f64, tau2: f64) -> Result<()> {
    if tau1 > 0.0 && tau2 > 0.0 && tau1.is_finite() && tau2.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("rates must be positive, got ({tau1}, {tau2})")))
    }
}

/// `D1 log τ1 + D2 log τ2 - (τ1 + τ2) A`.
pub fn log_likelihood(tau1: f64, tau2: f64, sample: &IatSample, mode: AMode) -> Result<f64> {
    check_rates(tau1, tau2)?;
    let a = stat_a(sample, mode);
    Ok(sample.d1() as f64 * tau1.ln() + sample.d2() as f64 * tau2.ln() - (tau1 + tau2) * a)
}

/// Gradient of the log-likelihood.
pub fn score(tau1: f64, tau2: f64, sample: &IatSample, mode: AMode) -> Result<[f64; 2]> {
    check_rates(tau1, tau2)?;
    let a = stat_a(sample, mode);
    Ok([sample.d1() as f64 / tau1 - a, sample.d2() as f64 / tau2 - a])
}

/// Hessian of the log-likelihood; the cross term vanishes identically.
pub fn hessian(tau1: f64, tau2: f64, sample: &IatSample) -> Result<[[f64; 2]; 2]> {
    check_rates(tau1, tau2)?;
    Ok([
        [-(sample.d1() as f64) / (tau1 * tau1), 0.0],
        [0.0, -(sample.d2() as f64) / (tau2 * tau2)],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleResult {
    pub tau1_hat: f64,
    pub tau2_hat: f64,
    pub a_stat: f64,
    /// Asymptotic variance of `tau1_hat` from the inverse observed information.
    pub var1: f64,
    pub var2: f64,
}

impl MleResult {
    pub fn estimate(&self, cause: Cause) -> f64 {
        match cause {
            Cause::One => self.tau1_hat,
            Cause::Two => self.tau2_hat,
        }
    }
}

/// Closed-form MLEs; each exists only when its cause has at least one failure.
pub fn mle(sample: &IatSample, mode: AMode) -> Result<MleResult> {
    let (d1, d2) = (sample.d1(), sample.d2());
    if d1 == 0 {
        return Err(Error::MleNonexistent { cause: 1 });
    }
    if d2 == 0 {
        return Err(Error::MleNonexistent { cause: 2 });
    }
    let a = stat_a(sample, mode);
    let tau1_hat = d1 as f64 / a;
    let tau2_hat = d2 as f64 / a;
    Ok(MleResult {
        tau1_hat,
        tau2_hat,
        a_stat: a,
        var1: tau1_hat * tau1_hat / d1 as f64,
        var2: tau2_hat * tau2_hat / d2 as f64,
    })
}

/// A two-sided interval estimate at nominal coverage `level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl IntervalEstimate {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("significance level must lie in (0, 1), got {gamma}")))
    }
}

/// Wald intervals `τ̂_j ± z_{γ/2} √var_j`, lower bounds clamped at zero.
pub fn asymptotic_ci(result: &MleResult, gamma: f64) -> Result<(IntervalEstimate, IntervalEstimate)> {
    check_gamma(gamma)?;
    let z = normal_quantile(1.0 - gamma / 2.0)?;
    let level = 1.0 - gamma;
    let wald = |est: f64, var: f64| {
        let half = z * var.sqrt();
        IntervalEstimate {
            lower: (est - half).max(0.0),
            upper: est + half,
            level,
        }
    };
    Ok((wald(result.tau1_hat, result.var1), wald(result.tau2_hat, result.var2)))
}
