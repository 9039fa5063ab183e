//! Improved adaptive type-II progressive censoring: plans, realized samples,
//! sequential generation and replay of already-observed progressive samples.
//!
//! Planned removals `R_i` are carried out only at failures strictly before
//! `t1`. Between `t1` and `t2` failures accrue without intermediate removals,
//! and the test stops at `T* = min(X_{m:m:n}, t2)`, withdrawing every unit
//! still on test.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;

use crate::model::{min_law, Cause, RatePair};
use crate::{Error, Result};

/// Experiment design: `n` units, `m` target failures, planned removals and the
/// two time thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoringPlan {
    n: usize,
    m: usize,
    removals: Vec<usize>,
    t1: f64,
    t2: f64,
}

impl CensoringPlan {
    pub fn new(n: usize, m: usize, removals: Vec<usize>, t1: f64, t2: f64) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::validation(format!("plan requires 1 <= m <= n, got n={n}, m={m}")));
        }
        if removals.len() != m {
            return Err(Error::validation(format!(
                "removal vector must have m={m} entries, got {}",
                removals.len()
            )));
        }
        let total: usize = removals.iter().sum();
        if total != n - m {
            return Err(Error::validation(format!(
                "removals must sum to n-m={}, got {total}",
                n - m
            )));
        }
        if !(t1.is_finite() && t1 > 0.0) {
            return Err(Error::validation(format!("t1 must be positive, got {t1}")));
        }
        if !(t2.is_finite() && t1 < t2) {
            return Err(Error::validation(format!("thresholds must satisfy 0 < t1 < t2, got t1={t1}, t2={t2}")));
        }
        Ok(Self { n, m, removals, t1, t2 })
    }

    /// Plan whose removal vector comes from one of the standard schemes.
    pub fn with_scheme(kind: Scheme, n: usize, m: usize, t1: f64, t2: f64) -> Result<Self> {
        Self::new(n, m, scheme(kind, n, m)?, t1, t2)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn removals(&self) -> &[usize] {
        &self.removals
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }
}

/// The three standard removal schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// All `n - m` survivors removed at the m-th failure.
    I,
    /// One unit removed at each of the first `m - 1` failures, the rest at the m-th.
    II,
    /// `(n - m) / m` units removed at every failure.
    III,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::I => "I",
            Scheme::II => "II",
            Scheme::III => "III",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Scheme::I),
            "II" | "2" => Ok(Scheme::II),
            "III" | "3" => Ok(Scheme::III),
            other => Err(Error::validation(format!("unknown scheme {other:?}, expected I, II or III"))),
        }
    }
}

/// Removal vector of a standard scheme.
pub fn scheme(kind: Scheme, n: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 || m > n {
        return Err(Error::validation(format!("scheme requires 1 <= m <= n, got n={n}, m={m}")));
    }
    match kind {
        Scheme::I => {
            let mut r = vec![0; m];
            r[m - 1] = n - m;
            Ok(r)
        }
        Scheme::II => {
            if n + 1 < 2 * m {
                return Err(Error::validation(format!(
                    "scheme II requires n >= 2m-1, got n={n}, m={m}"
                )));
            }
            let mut r = vec![1; m];
            r[m - 1] = n + 1 - 2 * m;
            Ok(r)
        }
        Scheme::III => {
            if !(n - m).is_multiple_of(m) {
                return Err(Error::validation(format!(
                    "scheme III requires m to divide n-m, got n={n}, m={m}"
                )));
            }
            Ok(vec![(n - m) / m; m])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    I,
    II,
    III,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
        })
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" => Ok(CaseTag::I),
            "II" => Ok(CaseTag::II),
            "III" => Ok(CaseTag::III),
            other => Err(Error::validation(format!("unknown case {other:?}"))),
        }
    }
}

/// Terminal configuration of a realized experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub tag: CaseTag,
    /// Failures strictly before `t1`.
    pub k1: usize,
    /// Failures strictly before `t2`.
    pub k2: usize,
}

fn check_increasing(times: &[f64]) -> Result<()> {
    if let Some(&first) = times.first() {
        if !(first.is_finite() && first > 0.0) {
            return Err(Error::validation(format!("failure times must be positive, got {first}")));
        }
    }
    for (i, w) in times.windows(2).enumerate() {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(Error::validation(format!(
                "failure times must be strictly increasing: times[{}]={} then times[{}]={}",
                i,
                w[0],
                i + 1,
                w[1]
            )));
        }
    }
    Ok(())
}

/// Classifies observed failure times into Case I, II or III.
///
/// `times` are the failures actually observed, so at most `m` of them.
pub fn classify(times: &[f64], m: usize, t1: f64, t2: f64) -> Result<Case> {
    check_increasing(times)?;
    if times.len() > m {
        return Err(Error::validation(format!(
            "{} failure times observed but the plan stops at m={m}",
            times.len()
        )));
    }
    let k1 = times.iter().take_while(|&&x| x < t1).count();
    let k2 = times.iter().take_while(|&&x| x < t2).count();
    let tag = match times.get(m - 1) {
        Some(&x) if times.len() == m && x < t1 => CaseTag::I,
        Some(&x) if times.len() == m && x < t2 => CaseTag::II,
        _ => CaseTag::III,
    };
    Ok(Case { tag, k1, k2 })
}

/// One realized IAT-II PCS competing-risks dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct IatSample {
    n: usize,
    m: usize,
    t1: f64,
    t2: f64,
    times: Vec<f64>,
    causes: Vec<Cause>,
    effective_removals: Vec<usize>,
    case: Case,
    r_star: usize,
    t_star: f64,
}

impl IatSample {
    /// Assembles a sample from its parts, checking every invariant.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n: usize,
        m: usize,
        t1: f64,
        t2: f64,
        times: Vec<f64>,
        causes: Vec<Cause>,
        effective_removals: Vec<usize>,
        r_star: usize,
        t_star: f64,
    ) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::validation(format!("sample requires 1 <= m <= n, got n={n}, m={m}")));
        }
        if !(t1 > 0.0 && t1 < t2 && t2.is_finite()) {
            return Err(Error::validation(format!("thresholds must satisfy 0 < t1 < t2, got t1={t1}, t2={t2}")));
        }
        if causes.len() != times.len() || effective_removals.len() != times.len() {
            return Err(Error::validation("times, causes and removals must have equal length"));
        }
        let case = classify(&times, m, t1, t2)?;
        if case.k2 != times.len() {
            return Err(Error::validation(format!("observed failure at or after t2={t2}")));
        }
        for (i, (&x, &r)) in times.iter().zip(&effective_removals).enumerate() {
            if x >= t1 && r != 0 {
                return Err(Error::validation(format!(
                    "removal {r} recorded at failure {} (time {x}) after t1={t1}",
                    i + 1
                )));
            }
        }
        let accounted = times.len() + effective_removals.iter().sum::<usize>() + r_star;
        if accounted != n {
            return Err(Error::validation(format!(
                "unit accounting fails: D + sum(r_i) + r_star = {accounted}, expected n={n}"
            )));
        }
        let expected_t_star = if times.len() == m { times[m - 1] } else { t2 };
        if t_star != expected_t_star {
            return Err(Error::validation(format!(
                "t_star must be min(m-th failure, t2) = {expected_t_star}, got {t_star}"
            )));
        }
        if case.tag == CaseTag::I && r_star != 0 {
            return Err(Error::validation("Case I sample must have r_star = 0"));
        }
        Ok(Self { n, m, t1, t2, times, causes, effective_removals, case, r_star, t_star })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn causes(&self) -> &[Cause] {
        &self.causes
    }

    pub fn effective_removals(&self) -> &[usize] {
        &self.effective_removals
    }

    pub fn case(&self) -> Case {
        self.case
    }

    /// Number of observed failures `D`.
    pub fn d(&self) -> usize {
        self.times.len()
    }

    pub fn d1(&self) -> usize {
        self.causes.iter().filter(|&&c| c == Cause::One).count()
    }

    pub fn d2(&self) -> usize {
        self.causes.iter().filter(|&&c| c == Cause::Two).count()
    }

    /// Failures from the given cause.
    pub fn count(&self, cause: Cause) -> usize {
        match cause {
            Cause::One => self.d1(),
            Cause::Two => self.d2(),
        }
    }

    /// Units withdrawn at termination.
    pub fn r_star(&self) -> usize {
        self.r_star
    }

    /// Termination time `min(X_{m:m:n}, t2)`.
    pub fn t_star(&self) -> f64 {
        self.t_star
    }
}

/// Simulates one IAT-II PCS sample.
///
/// Uses sequential exponential spacings: with `a` units on test the gap to the
/// next failure is `Exp(a * (tau1 + tau2))` and the failing cause is drawn
/// independently with probability `tau1 / (tau1 + tau2)`. The adaptive removal
/// rule makes this exact where a static spacings transform would not be.
pub fn generate<R: Rng + ?Sized>(plan: &CensoringPlan, rates: &RatePair, rng: &mut R) -> IatSample {
    let law = min_law(rates);
    let m = plan.m;
    let mut active = plan.n;
    let mut clock = 0.0;
    let mut times = Vec::with_capacity(m);
    let mut causes = Vec::with_capacity(m);
    let mut removals = Vec::with_capacity(m);

    while times.len() < m && active > 0 {
        let gap: f64 = rng.sample::<f64, _>(Exp1) / (active as f64 * law.total_rate);
        let next = clock + gap;
        let cause = if rng.random::<f64>() < law.cause1_prob { Cause::One } else { Cause::Two };
        if !(next < plan.t2) {
            break;
        }
        active -= 1;
        let r = if next < plan.t1 {
            plan.removals[times.len()].min(active)
        } else {
            0
        };
        active -= r;
        times.push(next);
        causes.push(cause);
        removals.push(r);
        clock = next;
    }

    finish(plan, times, causes, removals, active)
}

/// Applies the IAT-II PCS rules to an already-observed progressive sample.
///
/// `times` and `causes` are the failures recorded under the plan's full
/// removal scheme, in time order. Failures at or after `t2` and beyond the
/// m-th are discarded; planned removals after `t1` are cancelled and the
/// terminal withdrawal recomputed. A planned removal larger than the number of
/// units left is truncated.
pub fn replay(plan: &CensoringPlan, times: &[f64], causes: &[Cause]) -> Result<IatSample> {
    if times.len() != causes.len() {
        return Err(Error::validation("times and causes must have equal length"));
    }
    check_increasing(times)?;
    let mut active = plan.n;
    let mut kept_times = Vec::new();
    let mut kept_causes = Vec::new();
    let mut removals = Vec::new();
    let mut reached_t2 = false;

    for (&x, &c) in times.iter().zip(causes) {
        if kept_times.len() == plan.m {
            break;
        }
        if !(x < plan.t2) {
            reached_t2 = true;
            break;
        }
        if active == 0 {
            return Err(Error::validation(format!(
                "failure at time {x} but no units remain on test (n={})",
                plan.n
            )));
        }
        active -= 1;
        let r = if x < plan.t1 {
            plan.removals[kept_times.len()].min(active)
        } else {
            0
        };
        active -= r;
        kept_times.push(x);
        kept_causes.push(c);
        removals.push(r);
    }

    if kept_times.len() < plan.m && !reached_t2 && active > 0 {
        return Err(Error::validation(format!(
            "data end after {} failures, all before t2={}; the experiment had not terminated",
            kept_times.len(),
            plan.t2
        )));
    }
    Ok(finish(plan, kept_times, kept_causes, removals, active))
}

fn finish(
    plan: &CensoringPlan,
    times: Vec<f64>,
    causes: Vec<Cause>,
    effective_removals: Vec<usize>,
    active: usize,
) -> IatSample {
    let t_star = if times.len() == plan.m { times[plan.m - 1] } else { plan.t2 };
    let case = classify(&times, plan.m, plan.t1, plan.t2).expect("generated times are increasing");
    IatSample {
        n: plan.n,
        m: plan.m,
        t1: plan.t1,
        t2: plan.t2,
        times,
        causes,
        effective_removals,
        case,
        r_star: active,
        t_star,
    }
}
