//! Two-cause exponential latent failure-time model.
//!
//! Each unit carries two independent latent lifetimes `X1 ~ Exp(tau1)` and
//! `X2 ~ Exp(tau2)`, parameterized by hazard *rates*. Only the minimum and the
//! cause that produced it are observed.

use std::fmt;

use crate::{Error, Result};

/// Cause of an observed failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cause {
    One,
    Two,
}

impl Cause {
    /// Numeric label, 1 or 2.
    pub fn index(self) -> u8 {
        match self {
            Cause::One => 1,
            Cause::Two => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Cause::One),
            2 => Ok(Cause::Two),
            other => Err(Error::validation(format!("cause must be 1 or 2, got {other}"))),
        }
    }

    /// The indicator δ: 1 for cause 1, 0 for cause 2.
    pub fn delta(self) -> u8 {
        match self {
            Cause::One => 1,
            Cause::Two => 0,
        }
    }
}

impl fmt::Display for Cause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Hazard rates of the two competing causes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    tau1: f64,
    tau2: f64,
}

impl RatePair {
    pub fn new(tau1: f64, tau2: f64) -> Result<Self> {
        for (j, t) in [(1, tau1), (2, tau2)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::validation(format!("tau{j} must be a positive finite rate, got {t}")));
            }
        }
        Ok(Self { tau1, tau2 })
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn tau2(&self) -> f64 {
        self.tau2
    }

    pub fn get(&self, cause: Cause) -> f64 {
        match cause {
            Cause::One => self.tau1,
            Cause::Two => self.tau2,
        }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.tau1, self.tau2]
    }
}

fn check_time(x: f64) -> Result<()> {
    if x >= 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be nonnegative, got {x}")))
    }
}

/// Latent CDF `1 - exp(-tau_j x)`.
pub fn cdf(cause: Cause, x: f64, rates: &RatePair) -> Result<f64> {
    check_time(x)?;
    Ok(-(-rates.get(cause) * x).exp_m1())
}

/// Latent survival `exp(-tau_j x)`, evaluated directly.
pub fn survival(cause: Cause, x: f64, rates: &RatePair) -> Result<f64> {
    check_time(x)?;
    Ok((-rates.get(cause) * x).exp())
}

/// Latent density `tau_j exp(-tau_j x)`.
pub fn pdf(cause: Cause, x: f64, rates: &RatePair) -> Result<f64> {
    check_time(x)?;
    let t = rates.get(cause);
    Ok(t * (-t * x).exp())
}

/// Constant hazard `tau_j`.
pub fn hazard(cause: Cause, x: f64, rates: &RatePair) -> Result<f64> {
    check_time(x)?;
    Ok(rates.get(cause))
}

/// Law of the observed minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinLaw {
    /// Rate of the exponential minimum, `tau1 + tau2`.
    pub total_rate: f64,
    /// Probability the minimum comes from cause 1, independent of its value.
    pub cause1_prob: f64,
}

pub fn min_law(rates: &RatePair) -> MinLaw {
    let total_rate = rates.tau1 + rates.tau2;
    MinLaw {
        total_rate,
        cause1_prob: rates.tau1 / total_rate,
    }
}
