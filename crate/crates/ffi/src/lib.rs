//! C ABI for the `iatpcs` library.
//!
//! Every fallible function returns an [`IatpcsStatus`] and writes results
//! through out-pointers. On failure the message is kept per thread and can be
//! read with [`iatpcs_last_error_message`]. Plans, samples and reports are
//! opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use iatpcs::bayes::{self, GammaPosterior, GammaPrior, LossSpec, PosteriorParams};
use iatpcs::censoring::{self, CaseTag, CensoringPlan, IatSample, Scheme};
use iatpcs::dataset;
use iatpcs::estimate::{self, AMode, IntervalEstimate, MleResult};
use iatpcs::model::{Cause, RatePair};
use iatpcs::montecarlo::{self, LabeledPrior, SimConfig, SimReport};
use iatpcs::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IatpcsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument lies outside the mathematical domain.
    Domain = 2,
    /// Inconsistent plan, sample or configuration.
    Validation = 3,
    /// The requested estimate does not exist for this sample or prior.
    Nonexistent = 4,
    Parse = 5,
    Io = 6,
    /// A caller buffer is too small; the required length was written.
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque censoring plan.
pub struct IatpcsPlan(CensoringPlan);

/// Opaque censored competing-risks sample.
pub struct IatpcsSample(IatSample);

/// Opaque Monte Carlo report.
pub struct IatpcsReport(SimReport);

/// Summary statistics of a sample. `case_tag` is 1, 2 or 3.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IatpcsSampleInfo {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub d1: usize,
    pub d2: usize,
    pub k1: usize,
    pub k2: usize,
    pub r_star: usize,
    pub t_star: f64,
    pub case_tag: u8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IatpcsMle {
    pub tau1_hat: f64,
    pub tau2_hat: f64,
    pub a_stat: f64,
    pub var1: f64,
    pub var2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IatpcsInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// Independent gamma priors: `tau1 ~ Gamma(a, b)`, `tau2 ~ Gamma(c, d)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IatpcsPrior {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Gamma posteriors (shape, rate) for both rates.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IatpcsPosterior {
    pub shape1: f64,
    pub rate1: f64,
    pub shape2: f64,
    pub rate2: f64,
}

/// Per-parameter summary of one estimator; index 0 is tau1.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IatpcsPointSummary {
    pub average: [f64; 2],
    pub bias: [f64; 2],
    pub mse: [f64; 2],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IatpcsIntervalSummary {
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub length: [f64; 2],
    pub coverage: [f64; 2],
}

pub const IATPCS_LOSS_SELF: i32 = 0;
pub const IATPCS_LOSS_LINEX: i32 = 1;
pub const IATPCS_LOSS_GELF: i32 = 2;

pub const IATPCS_A_PAPER: i32 = 0;
pub const IATPCS_A_CORRECTED: i32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> IatpcsStatus {
    match e {
        Error::Domain(_) => IatpcsStatus::Domain,
        Error::Parse { .. } => IatpcsStatus::Parse,
        Error::Io(_) => IatpcsStatus::Io,
        e if e.is_nonexistence() => IatpcsStatus::Nonexistent,
        _ => IatpcsStatus::Validation,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Buffer(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IatpcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IatpcsStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_last_error(format!("null pointer argument `{name}`"));
            IatpcsStatus::NullPointer
        }
        Ok(Err(Fail::Buffer(msg))) => {
            set_last_error(msg);
            IatpcsStatus::BufferTooSmall
        }
        Err(_) => {
            set_last_error("internal panic".into());
            IatpcsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn input_slice<'a, T>(p: *const T, len: usize, name: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(Fail::Null(name))
    } else {
        Ok(slice::from_raw_parts(p, len))
    }
}

fn a_mode(mode: i32) -> Result<AMode, Fail> {
    match mode {
        IATPCS_A_PAPER => Ok(AMode::Paper),
        IATPCS_A_CORRECTED => Ok(AMode::Corrected),
        other => Err(Error::Validation(format!("unknown A-statistic mode {other}")).into()),
    }
}

fn scheme_kind(kind: i32) -> Result<Scheme, Fail> {
    match kind {
        1 => Ok(Scheme::I),
        2 => Ok(Scheme::II),
        3 => Ok(Scheme::III),
        other => Err(Error::Validation(format!("unknown scheme {other}; expected 1, 2 or 3")).into()),
    }
}

fn to_prior(p: &IatpcsPrior) -> Result<GammaPrior, Fail> {
    Ok(GammaPrior::new(p.a, p.b, p.c, p.d)?)
}

fn to_posterior(p: &IatpcsPosterior) -> PosteriorParams {
    PosteriorParams {
        tau1: GammaPosterior { shape: p.shape1, rate: p.rate1 },
        tau2: GammaPosterior { shape: p.shape2, rate: p.rate2 },
    }
}

fn check_posterior(p: &IatpcsPosterior) -> Result<PosteriorParams, Fail> {
    let post = to_posterior(p);
    for (cause, g) in [(1u8, &post.tau1), (2, &post.tau2)] {
        if !(g.shape > 0.0 && g.rate > 0.0 && g.shape.is_finite() && g.rate.is_finite()) {
            return Err(Error::ImproperPosterior { cause, shape: g.shape, rate: g.rate }.into());
        }
    }
    Ok(post)
}

fn interval(ci: IntervalEstimate) -> IatpcsInterval {
    IatpcsInterval { lower: ci.lower, upper: ci.upper, level: ci.level }
}

fn c_string_out(s: String, dst: *mut *mut c_char) -> Result<(), Fail> {
    let dst = unsafe { out(dst, "out")? };
    *dst = CString::new(s)
        .map_err(|_| Error::Validation("output contains a NUL byte".into()))?
        .into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn iatpcs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn iatpcs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library (e.g. [`iatpcs_sample_to_csv`]) and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Inverse standard normal CDF for `p` in (0, 1).
///
/// # Safety
/// `out_value` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_normal_quantile(p: f64, out_value: *mut f64) -> IatpcsStatus {
    guard(|| {
        *out(out_value, "out_value")? = estimate::normal_quantile(p)?;
        Ok(())
    })
}

/// `ln Γ(x)` for `x > 0`.
///
/// # Safety
/// `out_value` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_log_gamma(x: f64, out_value: *mut f64) -> IatpcsStatus {
    guard(|| {
        *out(out_value, "out_value")? = bayes::log_gamma(x)?;
        Ok(())
    })
}

/// Creates a plan from an explicit removal vector of length `m`.
///
/// # Safety
/// `removals` must point to `len` readable values; `out_plan` must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_plan_new(
    n: usize,
    m: usize,
    removals: *const usize,
    len: usize,
    t1: f64,
    t2: f64,
    out_plan: *mut *mut IatpcsPlan,
) -> IatpcsStatus {
    guard(|| {
        let r = input_slice(removals, len, "removals")?.to_vec();
        let plan = CensoringPlan::new(n, m, r, t1, t2)?;
        *out(out_plan, "out_plan")? = Box::into_raw(Box::new(IatpcsPlan(plan)));
        Ok(())
    })
}

/// Creates a plan from a standard scheme: 1 = all removals at the m-th
/// failure, 2 = one at each of the first m-1 failures, 3 = equal removals.
///
/// # Safety
/// `out_plan` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_plan_with_scheme(
    scheme: i32,
    n: usize,
    m: usize,
    t1: f64,
    t2: f64,
    out_plan: *mut *mut IatpcsPlan,
) -> IatpcsStatus {
    guard(|| {
        let plan = CensoringPlan::with_scheme(scheme_kind(scheme)?, n, m, t1, t2)?;
        *out(out_plan, "out_plan")? = Box::into_raw(Box::new(IatpcsPlan(plan)));
        Ok(())
    })
}

/// # Safety
/// `plan` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_plan_free(plan: *mut IatpcsPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Simulates one sample under `plan` with the given cause rates.
///
/// # Safety
/// `plan` must be a live plan handle; `out_sample` must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_generate(
    plan: *const IatpcsPlan,
    tau1: f64,
    tau2: f64,
    seed: u64,
    out_sample: *mut *mut IatpcsSample,
) -> IatpcsStatus {
    guard(|| {
        let plan = &deref(plan, "plan")?.0;
        let rates = RatePair::new(tau1, tau2)?;
        let s = censoring::generate(plan, &rates, &mut ChaCha8Rng::seed_from_u64(seed));
        *out(out_sample, "out_sample")? = Box::into_raw(Box::new(IatpcsSample(s)));
        Ok(())
    })
}

/// Applies `plan` to increasing failure times with causes 1 or 2.
///
/// # Safety
/// `times` and `causes` must each point to `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_sample_replay(
    plan: *const IatpcsPlan,
    times: *const f64,
    causes: *const u8,
    len: usize,
    out_sample: *mut *mut IatpcsSample,
) -> IatpcsStatus {
    guard(|| {
        let plan = &deref(plan, "plan")?.0;
        let times = input_slice(times, len, "times")?;
        let causes = input_slice(causes, len, "causes")?
            .iter()
            .map(|&c| Cause::from_index(c))
            .collect::<iatpcs::Result<Vec<_>>>()?;
        let s = censoring::replay(plan, times, &causes)?;
        *out(out_sample, "out_sample")? = Box::into_raw(Box::new(IatpcsSample(s)));
        Ok(())
    })
}

/// # Safety
/// `sample` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_sample_free(sample: *mut IatpcsSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// # Safety
/// `sample` and `info` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_sample_info(sample: *const IatpcsSample, info: *mut IatpcsSampleInfo) -> IatpcsStatus {
    guard(|| {
        let s = &deref(sample, "sample")?.0;
        let case = s.case();
        *out(info, "info")? = IatpcsSampleInfo {
            n: s.n(),
            m: s.m(),
            d: s.d(),
            d1: s.d1(),
            d2: s.d2(),
            k1: case.k1,
            k2: case.k2,
            r_star: s.r_star(),
            t_star: s.t_star(),
            case_tag: match case.tag {
                CaseTag::I => 1,
                CaseTag::II => 2,
                CaseTag::III => 3,
            },
        };
        Ok(())
    })
}

/// Copies the observed failure times, causes (1 or 2) and effective removals
/// into caller buffers of capacity `cap`. Any buffer may be null to skip it.
/// If `cap` is smaller than D, writes D to `needed` and fails.
///
/// # Safety
/// Non-null buffers must have room for `cap` elements; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_sample_data(
    sample: *const IatpcsSample,
    times: *mut f64,
    causes: *mut u8,
    removals: *mut usize,
    cap: usize,
    needed: *mut usize,
) -> IatpcsStatus {
    guard(|| {
        let s = &deref(sample, "sample")?.0;
        let d = s.d();
        if let Some(n) = needed.as_mut() {
            *n = d;
        }
        if cap < d {
            return Err(Fail::Buffer(format!("buffer holds {cap} elements, sample has {d}")));
        }
        if !times.is_null() {
            slice::from_raw_parts_mut(times, d).copy_from_slice(s.times());
        }
        if !causes.is_null() {
            for (dst, c) in slice::from_raw_parts_mut(causes, d).iter_mut().zip(s.causes()) {
                *dst = c.index();
            }
        }
        if !removals.is_null() {
            slice::from_raw_parts_mut(removals, d).copy_from_slice(s.effective_removals());
        }
        Ok(())
    })
}

/// Serializes the sample in the CLI's CSV format. Free with [`iatpcs_string_free`].
///
/// # Safety
/// `sample` and `out_csv` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_sample_to_csv(sample: *const IatpcsSample, out_csv: *mut *mut c_char) -> IatpcsStatus {
    guard(|| {
        let s = &deref(sample, "sample")?.0;
        let mut buf = Vec::new();
        dataset::write_sample(s, &mut buf)?;
        c_string_out(String::from_utf8(buf).expect("writer emits UTF-8"), out_csv)
    })
}

/// Parses a sample written by [`iatpcs_sample_to_csv`] or `iatpcs generate`.
///
/// # Safety
/// `csv` must be a NUL-terminated string; `out_sample` must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_sample_from_csv(csv: *const c_char, out_sample: *mut *mut IatpcsSample) -> IatpcsStatus {
    guard(|| {
        if csv.is_null() {
            return Err(Fail::Null("csv"));
        }
        let text = CStr::from_ptr(csv)
            .to_str()
            .map_err(|e| Error::Parse { line: 0, message: e.to_string() })?;
        let s = dataset::parse_sample(text)?;
        *out(out_sample, "out_sample")? = Box::into_raw(Box::new(IatpcsSample(s)));
        Ok(())
    })
}

/// Total-time-on-test statistic under `mode` (`IATPCS_A_PAPER` or `IATPCS_A_CORRECTED`).
///
/// # Safety
/// `sample` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_stat_a(sample: *const IatpcsSample, mode: i32, out_value: *mut f64) -> IatpcsStatus {
    guard(|| {
        let s = &deref(sample, "sample")?.0;
        *out(out_value, "out_value")? = estimate::stat_a(s, a_mode(mode)?);
        Ok(())
    })
}

/// # Safety
/// `sample` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_log_likelihood(
    sample: *const IatpcsSample,
    tau1: f64,
    tau2: f64,
    mode: i32,
    out_value: *mut f64,
) -> IatpcsStatus {
    guard(|| {
        let s = &deref(sample, "sample")?.0;
        *out(out_value, "out_value")? = estimate::log_likelihood(tau1, tau2, s, a_mode(mode)?)?;
        Ok(())
    })
}

/// Closed-form MLEs; fails with `Nonexistent` when a cause has no failures.
///
/// # Safety
/// `sample` and `out_mle` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_mle(sample: *const IatpcsSample, mode: i32, out_mle: *mut IatpcsMle) -> IatpcsStatus {
    guard(|| {
        let s = &deref(sample, "sample")?.0;
        let r = estimate::mle(s, a_mode(mode)?)?;
        *out(out_mle, "out_mle")? = IatpcsMle {
            tau1_hat: r.tau1_hat,
            tau2_hat: r.tau2_hat,
            a_stat: r.a_stat,
            var1: r.var1,
            var2: r.var2,
        };
        Ok(())
    })
}

/// Asymptotic `100(1 - gamma)%` intervals with lower bounds clamped at 0.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_asymptotic_ci(
    mle: *const IatpcsMle,
    gamma: f64,
    out_tau1: *mut IatpcsInterval,
    out_tau2: *mut IatpcsInterval,
) -> IatpcsStatus {
    guard(|| {
        let m = deref(mle, "mle")?;
        let r = MleResult { tau1_hat: m.tau1_hat, tau2_hat: m.tau2_hat, a_stat: m.a_stat, var1: m.var1, var2: m.var2 };
        let (c1, c2) = estimate::asymptotic_ci(&r, gamma)?;
        *out(out_tau1, "out_tau1")? = interval(c1);
        *out(out_tau2, "out_tau2")? = interval(c2);
        Ok(())
    })
}

/// Conjugate gamma posterior of both rates.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_posterior(
    sample: *const IatpcsSample,
    prior: *const IatpcsPrior,
    mode: i32,
    out_post: *mut IatpcsPosterior,
) -> IatpcsStatus {
    guard(|| {
        let s = &deref(sample, "sample")?.0;
        let prior = to_prior(deref(prior, "prior")?)?;
        let p = bayes::posterior(s, &prior, a_mode(mode)?)?;
        *out(out_post, "out_post")? = IatpcsPosterior {
            shape1: p.tau1.shape,
            rate1: p.tau1.rate,
            shape2: p.tau2.shape,
            rate2: p.tau2.rate,
        };
        Ok(())
    })
}

/// Bayes estimates under `loss` (`IATPCS_LOSS_SELF`, `_LINEX` with `p = param`,
/// `_GELF` with `q = param`; `param` is ignored for SELF).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_bayes_estimate(
    post: *const IatpcsPosterior,
    loss: i32,
    param: f64,
    out_tau1: *mut f64,
    out_tau2: *mut f64,
) -> IatpcsStatus {
    guard(|| {
        let p = check_posterior(deref(post, "post")?)?;
        let spec = match loss {
            IATPCS_LOSS_SELF => LossSpec::Squared,
            IATPCS_LOSS_LINEX => LossSpec::linex(param)?,
            IATPCS_LOSS_GELF => LossSpec::gelf(param)?,
            other => return Err(Error::Validation(format!("unknown loss {other}")).into()),
        };
        let (e1, e2) = bayes::bayes_estimate(&p, &spec)?;
        *out(out_tau1, "out_tau1")? = e1;
        *out(out_tau2, "out_tau2")? = e2;
        Ok(())
    })
}

/// HPD intervals from `n_draws` posterior draws seeded by `seed`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_hpd(
    post: *const IatpcsPosterior,
    n_draws: usize,
    gamma: f64,
    seed: u64,
    out_tau1: *mut IatpcsInterval,
    out_tau2: *mut IatpcsInterval,
) -> IatpcsStatus {
    guard(|| {
        let p = check_posterior(deref(post, "post")?)?;
        let (h1, h2) = bayes::hpd_intervals(&p, n_draws, gamma, &mut ChaCha8Rng::seed_from_u64(seed))?;
        *out(out_tau1, "out_tau1")? = interval(h1);
        *out(out_tau2, "out_tau2")? = interval(h2);
        Ok(())
    })
}

/// HPD interval of an arbitrary set of draws (not required to be sorted).
///
/// # Safety
/// `draws` must point to `len` readable values; `out_interval` must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_hpd_from_draws(
    draws: *const f64,
    len: usize,
    gamma: f64,
    out_interval: *mut IatpcsInterval,
) -> IatpcsStatus {
    guard(|| {
        let d = input_slice(draws, len, "draws")?;
        *out(out_interval, "out_interval")? = interval(bayes::hpd(d, gamma)?);
        Ok(())
    })
}

/// Runs a Monte Carlo study of `plan`. Priors are labelled `prior0`,
/// `prior1`, ... in order; losses are SELF, LINEX(-0.05, 0.5) and
/// GELF(-0.05, 0.5). Estimator labels read e.g. `MLE`, `SELF/prior0`,
/// `GELF(q=0.5)/prior1`; interval labels `ACI`, `HPD/prior0`.
///
/// # Safety
/// `priors` must point to `n_priors` values; `plan` and `out_report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_simulate(
    plan: *const IatpcsPlan,
    tau1: f64,
    tau2: f64,
    reps: usize,
    seed: u64,
    priors: *const IatpcsPrior,
    n_priors: usize,
    level: f64,
    hpd_draws: usize,
    mode: i32,
    out_report: *mut *mut IatpcsReport,
) -> IatpcsStatus {
    guard(|| {
        let plan = deref(plan, "plan")?.0.clone();
        let rates = RatePair::new(tau1, tau2)?;
        let mut config = SimConfig::new(plan, rates, reps, seed);
        config.priors = input_slice(priors, n_priors, "priors")?
            .iter()
            .enumerate()
            .map(|(i, p)| Ok(LabeledPrior::new(format!("prior{i}"), to_prior(p)?)))
            .collect::<Result<_, Fail>>()?;
        config.level = level;
        config.hpd_draws = hpd_draws;
        config.a_mode = a_mode(mode)?;
        let report = montecarlo::run(&config)?;
        *out(out_report, "out_report")? = Box::into_raw(Box::new(IatpcsReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_report_free(report: *mut IatpcsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of degenerate samples redrawn during the run.
///
/// # Safety
/// `report` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_report_skipped(report: *const IatpcsReport, out_value: *mut usize) -> IatpcsStatus {
    guard(|| {
        *out(out_value, "out_value")? = deref(report, "report")?.0.skipped;
        Ok(())
    })
}

unsafe fn label<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null("label"));
    }
    Ok(CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Error::Validation(format!("label is not UTF-8: {e}")))?)
}

/// # Safety
/// `report`, `estimator` (NUL-terminated) and `out_summary` must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_report_point(
    report: *const IatpcsReport,
    estimator: *const c_char,
    out_summary: *mut IatpcsPointSummary,
) -> IatpcsStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        let name = label(estimator)?;
        let p = r
            .point(name)
            .ok_or_else(|| Error::Validation(format!("no estimator labelled {name:?}")))?;
        *out(out_summary, "out_summary")? = IatpcsPointSummary { average: p.average, bias: p.bias, mse: p.mse };
        Ok(())
    })
}

/// # Safety
/// `report`, `method` (NUL-terminated) and `out_summary` must be valid.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_report_interval(
    report: *const IatpcsReport,
    method: *const c_char,
    out_summary: *mut IatpcsIntervalSummary,
) -> IatpcsStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        let name = label(method)?;
        let i = r
            .interval(name)
            .ok_or_else(|| Error::Validation(format!("no interval method labelled {name:?}")))?;
        *out(out_summary, "out_summary")? = IatpcsIntervalSummary {
            lower: i.lower,
            upper: i.upper,
            length: i.length,
            coverage: i.coverage,
        };
        Ok(())
    })
}

/// Summary table of the report as CSV. Free with [`iatpcs_string_free`].
///
/// # Safety
/// `report` and `out_csv` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn iatpcs_report_to_csv(report: *const IatpcsReport, out_csv: *mut *mut c_char) -> IatpcsStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        let mut buf = Vec::new();
        montecarlo::write_csv(&montecarlo::summarize(r), &mut buf)?;
        c_string_out(String::from_utf8(buf).expect("csv writer emits UTF-8"), out_csv)
    })
}
