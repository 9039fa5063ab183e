//! Seeded Monte Carlo replication of the estimator study.
//!
//! Every replicate owns a ChaCha8 stream selected by its index from the root
//! seed, so results do not depend on how rayon schedules the work. Replicate
//! outcomes are collected in index order and summed sequentially with
//! compensated summation.

use std::fmt::Write as _;
use std::io;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bayes::{self, GammaPrior, LossSpec, DEFAULT_HPD_DRAWS};
use crate::censoring::{generate, CensoringPlan, IatSample, Scheme};
use crate::estimate::{asymptotic_ci, mle, AMode, IntervalEstimate};
use crate::model::RatePair;
use crate::{Error, Result};

/// Redraws allowed per replicate before the configuration is declared degenerate.
pub const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPrior {
    pub label: String,
    pub prior: GammaPrior,
}

impl LabeledPrior {
    pub fn new(label: impl Into<String>, prior: GammaPrior) -> Self {
        Self { label: label.into(), prior }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub plan: CensoringPlan,
    /// Scheme that produced the plan's removals, used only for labelling.
    pub scheme: Option<Scheme>,
    pub rates: RatePair,
    pub reps: usize,
    pub priors: Vec<LabeledPrior>,
    pub losses: Vec<LossSpec>,
    /// Nominal interval coverage, e.g. 0.95.
    pub level: f64,
    pub hpd_draws: usize,
    pub seed: u64,
    pub a_mode: AMode,
}

impl SimConfig {
    /// Configuration with the study defaults: 95% intervals, 5000 HPD draws,
    /// paper-mode `A`, the standard five losses and Prior 0 only.
    pub fn new(plan: CensoringPlan, rates: RatePair, reps: usize, seed: u64) -> Self {
        Self {
            plan,
            scheme: None,
            rates,
            reps,
            priors: vec![LabeledPrior::new("Prior 0", GammaPrior::NONINFORMATIVE)],
            losses: LossSpec::standard_set(),
            level: 0.95,
            hpd_draws: DEFAULT_HPD_DRAWS,
            seed,
            a_mode: AMode::Paper,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::validation("reps must be at least 1"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::validation(format!("level must lie in (0, 1), got {}", self.level)));
        }
        if self.hpd_draws < 2 {
            return Err(Error::validation("hpd_draws must be at least 2"));
        }
        Ok(())
    }

    fn gamma(&self) -> f64 {
        1.0 - self.level
    }

    /// Labels of the point estimators, in report order.
    pub fn estimator_labels(&self) -> Vec<String> {
        let mut labels = vec!["MLE".to_string()];
        for p in &self.priors {
            for l in &self.losses {
                labels.push(format!("{l}/{}", p.label));
            }
        }
        labels
    }

    /// Labels of the interval methods, in report order.
    pub fn interval_labels(&self) -> Vec<String> {
        let mut labels = vec!["ACI".to_string()];
        labels.extend(self.priors.iter().map(|p| format!("HPD/{}", p.label)));
        labels
    }
}

/// Everything computed from one accepted replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub sample: IatSample,
    /// Point estimates in [`SimConfig::estimator_labels`] order.
    pub estimates: Vec<[f64; 2]>,
    /// Intervals in [`SimConfig::interval_labels`] order.
    pub intervals: Vec<[IntervalEstimate; 2]>,
    /// Degenerate draws discarded before this one was accepted.
    pub skipped: usize,
}

/// Random stream for replicate `index`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

type Evaluation = (Vec<[f64; 2]>, Vec<[IntervalEstimate; 2]>);

fn evaluate(config: &SimConfig, sample: &IatSample, rng: &mut ChaCha8Rng) -> Result<Evaluation> {
    let gamma = config.gamma();
    let m = mle(sample, config.a_mode)?;
    let mut estimates = vec![[m.tau1_hat, m.tau2_hat]];
    let (aci1, aci2) = asymptotic_ci(&m, gamma)?;
    let mut intervals = vec![[aci1, aci2]];

    let mut posteriors = Vec::with_capacity(config.priors.len());
    for p in &config.priors {
        let post = bayes::posterior_from_stats(sample.d1(), sample.d2(), m.a_stat, &p.prior)?;
        for loss in &config.losses {
            let (e1, e2) = bayes::bayes_estimate(&post, loss)?;
            estimates.push([e1, e2]);
        }
        posteriors.push(post);
    }
    for post in &posteriors {
        let (h1, h2) = bayes::hpd_intervals(post, config.hpd_draws, gamma, rng)?;
        intervals.push([h1, h2]);
    }
    Ok((estimates, intervals))
}

/// Runs replicate `index`, redrawing samples whose estimators do not exist.
pub fn run_replicate(config: &SimConfig, index: u64) -> Result<ReplicateOutcome> {
    let mut rng = replicate_rng(config.seed, index);
    for skipped in 0..=MAX_REDRAWS {
        let sample = generate(&config.plan, &config.rates, &mut rng);
        match evaluate(config, &sample, &mut rng) {
            Ok((estimates, intervals)) => {
                return Ok(ReplicateOutcome { sample, estimates, intervals, skipped });
            }
            Err(e) if e.is_nonexistence() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::validation(format!(
        "replicate {index}: no usable sample in {} draws; both causes are almost never observed under this plan",
        MAX_REDRAWS + 1
    )))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Average, bias and MSE of one point estimator, per parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub estimator: String,
    pub average: [f64; 2],
    pub bias: [f64; 2],
    pub mse: [f64; 2],
    /// Monte Carlo standard error of the MSE.
    pub mse_se: [f64; 2],
}

/// Average bounds, length and coverage of one interval method, per parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSummary {
    pub method: String,
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub length: [f64; 2],
    pub coverage: [f64; 2],
    /// Monte Carlo standard error of the average length.
    pub length_se: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub n: usize,
    pub m: usize,
    pub scheme: String,
    pub t1: f64,
    pub t2: f64,
    pub rates: [f64; 2],
    pub reps: usize,
    pub skipped: usize,
    pub points: Vec<PointSummary>,
    pub intervals: Vec<IntervalSummary>,
}

impl SimReport {
    pub fn point(&self, estimator: &str) -> Option<&PointSummary> {
        self.points.iter().find(|p| p.estimator == estimator)
    }

    pub fn interval(&self, method: &str) -> Option<&IntervalSummary> {
        self.intervals.iter().find(|i| i.method == method)
    }
}

/// Runs every replicate (in parallel) and aggregates the report.
pub fn run(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let outcomes: Vec<ReplicateOutcome> = (0..config.reps as u64)
        .into_par_iter()
        .map(|i| run_replicate(config, i))
        .collect::<Result<_>>()?;
    Ok(aggregate(config, &outcomes))
}

/// Aggregates replicate outcomes, in the given order, into a report.
pub fn aggregate(config: &SimConfig, outcomes: &[ReplicateOutcome]) -> SimReport {
    let truth = config.rates.as_array();
    let reps = outcomes.len() as f64;

    let points = config
        .estimator_labels()
        .into_iter()
        .enumerate()
        .map(|(k, estimator)| {
            let mut sum = [KahanSum::default(); 2];
            let mut sq = [KahanSum::default(); 2];
            let mut quad = [KahanSum::default(); 2];
            for o in outcomes {
                for j in 0..2 {
                    let e = o.estimates[k][j];
                    let err2 = (e - truth[j]).powi(2);
                    sum[j].add(e);
                    sq[j].add(err2);
                    quad[j].add(err2 * err2);
                }
            }
            let average = [sum[0].value() / reps, sum[1].value() / reps];
            let mse = [sq[0].value() / reps, sq[1].value() / reps];
            PointSummary {
                estimator,
                average,
                bias: [average[0] - truth[0], average[1] - truth[1]],
                mse,
                mse_se: [0, 1].map(|j| standard_error(quad[j].value(), mse[j], reps)),
            }
        })
        .collect();

    let intervals = config
        .interval_labels()
        .into_iter()
        .enumerate()
        .map(|(k, method)| {
            let mut lo = [KahanSum::default(); 2];
            let mut hi = [KahanSum::default(); 2];
            let mut len = [KahanSum::default(); 2];
            let mut len_sq = [KahanSum::default(); 2];
            let mut covered = [0usize; 2];
            for o in outcomes {
                for j in 0..2 {
                    let ci = &o.intervals[k][j];
                    lo[j].add(ci.lower);
                    hi[j].add(ci.upper);
                    len[j].add(ci.length());
                    len_sq[j].add(ci.length() * ci.length());
                    covered[j] += usize::from(ci.contains(truth[j]));
                }
            }
            let mean_len = [len[0].value() / reps, len[1].value() / reps];
            let se = |j: usize| standard_error(len_sq[j].value(), mean_len[j], reps);
            IntervalSummary {
                method,
                lower: [lo[0].value() / reps, lo[1].value() / reps],
                upper: [hi[0].value() / reps, hi[1].value() / reps],
                length: mean_len,
                coverage: [covered[0] as f64 / reps, covered[1] as f64 / reps],
                length_se: [se(0), se(1)],
            }
        })
        .collect();

    SimReport {
        n: config.plan.n(),
        m: config.plan.m(),
        scheme: config.scheme.map_or_else(|| "custom".to_string(), |s| s.to_string()),
        t1: config.plan.t1(),
        t2: config.plan.t2(),
        rates: truth,
        reps: outcomes.len(),
        skipped: outcomes.iter().map(|o| o.skipped).sum(),
        points,
        intervals,
    }
}

/// Standard error of a sample mean from the sum of squares and the mean.
fn standard_error(sum_sq: f64, mean: f64, count: f64) -> f64 {
    if count < 2.0 {
        return 0.0;
    }
    let var = (sum_sq - count * mean * mean) / (count - 1.0);
    (var.max(0.0) / count).sqrt()
}

/// One line of a summary table. Point rows fill `average`/`bias`/`mse`;
/// interval rows fill `lower`/`upper`/`length`/`coverage`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub m: usize,
    pub scheme: String,
    pub t1: f64,
    pub t2: f64,
    pub parameter: String,
    pub estimator: String,
    pub average: Option<f64>,
    pub bias: Option<f64>,
    pub mse: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub length: Option<f64>,
    pub coverage: Option<f64>,
}

pub const TABLE_HEADER: [&str; 14] = [
    "n", "m", "scheme", "t1", "t2", "parameter", "estimator", "average", "bias", "mse", "lower", "upper", "length",
    "coverage",
];

const PARAMETERS: [&str; 2] = ["tau1", "tau2"];

/// Flattens a report into table rows keyed by (n, m, scheme, parameter, estimator).
pub fn summarize(report: &SimReport) -> Vec<TableRow> {
    let base = |parameter: &str, estimator: &str| TableRow {
        n: report.n,
        m: report.m,
        scheme: report.scheme.clone(),
        t1: report.t1,
        t2: report.t2,
        parameter: parameter.to_string(),
        estimator: estimator.to_string(),
        average: None,
        bias: None,
        mse: None,
        lower: None,
        upper: None,
        length: None,
        coverage: None,
    };
    let mut rows = Vec::new();
    for (j, param) in PARAMETERS.iter().enumerate() {
        for p in &report.points {
            rows.push(TableRow {
                average: Some(p.average[j]),
                bias: Some(p.bias[j]),
                mse: Some(p.mse[j]),
                ..base(param, &p.estimator)
            });
        }
        for i in &report.intervals {
            rows.push(TableRow {
                lower: Some(i.lower[j]),
                upper: Some(i.upper[j]),
                length: Some(i.length[j]),
                coverage: Some(i.coverage[j]),
                ..base(param, &i.method)
            });
        }
    }
    rows
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes rows as CSV with full-precision numbers.
pub fn write_csv<W: io::Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(TABLE_HEADER).map_err(io_err)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            r.scheme.clone(),
            r.t1.to_string(),
            r.t2.to_string(),
            r.parameter.clone(),
            r.estimator.clone(),
            opt(r.average),
            opt(r.bias),
            opt(r.mse),
            opt(r.lower),
            opt(r.upper),
            opt(r.length),
            opt(r.coverage),
        ])
        .map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses CSV produced by [`write_csv`]. Lines starting with `#` are ignored.
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<TableRow>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = rdr.headers().map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;
    if header.iter().ne(TABLE_HEADER) {
        return Err(Error::Parse { line: 1, message: format!("unexpected header {header:?}") });
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let perr = |field: &str, e: String| Error::Parse { line, message: format!("{field}: {e}") };
        let num = |i: usize| -> Result<Option<f64>> {
            match &rec[i] {
                "" => Ok(None),
                s => s.parse::<f64>().map(Some).map_err(|e| perr(TABLE_HEADER[i], e.to_string())),
            }
        };
        let req = |i: usize| -> Result<f64> { num(i)?.ok_or_else(|| perr(TABLE_HEADER[i], "missing".into())) };
        rows.push(TableRow {
            n: rec[0].parse().map_err(|e: std::num::ParseIntError| perr("n", e.to_string()))?,
            m: rec[1].parse().map_err(|e: std::num::ParseIntError| perr("m", e.to_string()))?,
            scheme: rec[2].to_string(),
            t1: req(3)?,
            t2: req(4)?,
            parameter: rec[5].to_string(),
            estimator: rec[6].to_string(),
            average: num(7)?,
            bias: num(8)?,
            mse: num(9)?,
            lower: num(10)?,
            upper: num(11)?,
            length: num(12)?,
            coverage: num(13)?,
        });
    }
    Ok(rows)
}

/// Renders `x` with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

/// Renders rows as an aligned Markdown table, six significant digits.
pub fn render_markdown(rows: &[TableRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let o = |v: Option<f64>| v.map(sig6).unwrap_or_default();
            vec![
                r.n.to_string(),
                r.m.to_string(),
                r.scheme.clone(),
                sig6(r.t1),
                sig6(r.t2),
                r.parameter.clone(),
                r.estimator.clone(),
                o(r.average),
                o(r.bias),
                o(r.mse),
                o(r.lower),
                o(r.upper),
                o(r.length),
                o(r.coverage),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..TABLE_HEADER.len())
        .map(|i| {
            cells
                .iter()
                .map(|c| c[i].chars().count())
                .chain(std::iter::once(TABLE_HEADER[i].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, fields: &mut dyn Iterator<Item = String>| {
        out.push('|');
        for (f, w) in fields.zip(&widths) {
            let _ = write!(out, " {f:<w$} |");
        }
        out.push('\n');
    };
    line(&mut out, &mut TABLE_HEADER.iter().map(|s| s.to_string()));
    line(&mut out, &mut widths.iter().map(|&w| "-".repeat(w)));
    for c in cells {
        line(&mut out, &mut c.into_iter());
    }
    out
}

/// A cross-product of designs to simulate.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub pairs: Vec<(usize, usize)>,
    pub schemes: Vec<Scheme>,
    pub thresholds: Vec<(f64, f64)>,
    pub rates: RatePair,
    pub reps: usize,
    pub priors: Vec<LabeledPrior>,
    pub losses: Vec<LossSpec>,
    pub level: f64,
    pub hpd_draws: usize,
    pub seed: u64,
    pub a_mode: AMode,
}

/// Identifies one cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CellKey {
    pub n: usize,
    pub m: usize,
    pub scheme: Scheme,
    pub t1: f64,
    pub t2: f64,
}

impl Sweep {
    /// The configuration of one cell; fails when the scheme does not fit `(n, m)`.
    pub fn config(&self, key: &CellKey) -> Result<SimConfig> {
        let plan = CensoringPlan::with_scheme(key.scheme, key.n, key.m, key.t1, key.t2)?;
        Ok(SimConfig {
            plan,
            scheme: Some(key.scheme),
            rates: self.rates,
            reps: self.reps,
            priors: self.priors.clone(),
            losses: self.losses.clone(),
            level: self.level,
            hpd_draws: self.hpd_draws,
            seed: self.seed,
            a_mode: self.a_mode,
        })
    }

    pub fn cells(&self) -> Vec<CellKey> {
        let mut keys = Vec::new();
        for &(t1, t2) in &self.thresholds {
            for &(n, m) in &self.pairs {
                for &scheme in &self.schemes {
                    keys.push(CellKey { n, m, scheme, t1, t2 });
                }
            }
        }
        keys
    }

    /// Runs every cell; a failing cell records its error and the sweep continues.
    pub fn run(&self) -> Vec<(CellKey, Result<SimReport>)> {
        self.cells()
            .into_iter()
            .map(|key| {
                let report = self.config(&key).and_then(|c| run(&c));
                (key, report)
            })
            .collect()
    }
}
