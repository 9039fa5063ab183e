//! Competing-risks dataset and sample files.
//!
//! Both are UTF-8 CSV. Datasets carry a `time,cause` header. Sample files add
//! an `effective removal` column and a metadata comment
//! `# n=..,m=..,t1=..,t2=..,case=..,r_star=..,t_star=..` before the header.
//! Any other line starting with `#` is a comment.

use std::io;

use crate::censoring::{CaseTag, IatSample};
use crate::model::Cause;
use crate::{Error, Result};

/// One observed failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetRecord {
    pub time: f64,
    pub cause: Cause,
}

/// Mouse-mortality data after radiation exposure (Hoel, 1972): reticulum cell
/// sarcoma as cause 1, thymic lymphoma as cause 2, from a progressive sample
/// with `n = 77`, `m = 25`, `R_1..R_24 = 2`, `R_25 = 4`.
pub const HOEL_DATA: [(f64, u8); 25] = [
    (40.0, 2),
    (42.0, 2),
    (62.0, 2),
    (163.0, 2),
    (179.0, 2),
    (206.0, 2),
    (222.0, 2),
    (228.0, 2),
    (252.0, 2),
    (259.0, 2),
    (318.0, 1),
    (385.0, 2),
    (407.0, 2),
    (420.0, 2),
    (462.0, 2),
    (507.0, 2),
    (517.0, 2),
    (524.0, 2),
    (525.0, 1),
    (528.0, 1),
    (536.0, 1),
    (605.0, 1),
    (612.0, 1),
    (620.0, 2),
    (621.0, 1),
];

pub const HOEL_N: usize = 77;

/// Planned removals of the embedded progressive sample.
pub fn hoel_removals() -> Vec<usize> {
    let mut r = vec![2; HOEL_DATA.len()];
    r[HOEL_DATA.len() - 1] = 4;
    r
}

pub fn hoel_records() -> Vec<DatasetRecord> {
    HOEL_DATA
        .iter()
        .map(|&(time, c)| DatasetRecord { time, cause: Cause::from_index(c).expect("cause is 1 or 2") })
        .collect()
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    parse_err(line, e.to_string())
}

struct Row {
    time: f64,
    cause: Cause,
    removal: Option<usize>,
    line: u64,
}

/// Reads `time,cause[,removal]` rows; the removal column is mandatory only
/// when `require_removal` is set.
fn read_rows(text: &str, require_removal: bool) -> Result<Vec<Row>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    let header_line = header.position().map_or(1, |p| p.line());
    let full = ["time", "cause", "removal"];
    let with_removal = header.iter().eq(full);
    let expected: &[&str] = if require_removal { &full } else { &full[..2] };
    if !with_removal && header.iter().ne(expected.iter().copied()) {
        return Err(parse_err(
            header_line,
            format!("expected header {:?}, found {:?}", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let time: f64 = rec[0]
            .parse()
            .map_err(|e| parse_err(line, format!("bad time {:?}: {e}", &rec[0])))?;
        if !(time.is_finite() && time > 0.0) {
            return Err(parse_err(line, format!("time must be positive, got {time}")));
        }
        let cause = rec[1]
            .parse::<u8>()
            .ok()
            .and_then(|c| Cause::from_index(c).ok())
            .ok_or_else(|| parse_err(line, format!("cause must be 1 or 2, got {:?}", &rec[1])))?;
        let removal = if with_removal {
            Some(
                rec[2]
                    .parse::<usize>()
                    .map_err(|e| parse_err(line, format!("bad removal {:?}: {e}", &rec[2])))?,
            )
        } else {
            None
        };
        rows.push(Row { time, cause, removal, line });
    }
    Ok(rows)
}

/// Parses a `time,cause` dataset and sorts it by time. Sample files are
/// accepted too; their removal column is ignored.
pub fn parse_dataset(text: &str) -> Result<Vec<DatasetRecord>> {
    let mut records: Vec<DatasetRecord> = read_rows(text, false)?
        .into_iter()
        .map(|r| DatasetRecord { time: r.time, cause: r.cause })
        .collect();
    records.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(records)
}

pub fn write_dataset<W: io::Write>(records: &[DatasetRecord], mut out: W) -> Result<()> {
    writeln!(out, "time,cause")?;
    for r in records {
        writeln!(out, "{},{}", r.time, r.cause)?;
    }
    Ok(())
}

pub fn write_sample<W: io::Write>(sample: &IatSample, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# n={},m={},t1={},t2={},case={},r_star={},t_star={}",
        sample.n(),
        sample.m(),
        sample.t1(),
        sample.t2(),
        sample.case().tag,
        sample.r_star(),
        sample.t_star()
    )?;
    writeln!(out, "time,cause,removal")?;
    for ((t, c), r) in sample.times().iter().zip(sample.causes()).zip(sample.effective_removals()) {
        writeln!(out, "{t},{c},{r}")?;
    }
    Ok(())
}

#[derive(Default)]
struct Meta {
    n: Option<usize>,
    m: Option<usize>,
    t1: Option<f64>,
    t2: Option<f64>,
    case: Option<CaseTag>,
    r_star: Option<usize>,
    t_star: Option<f64>,
}

fn parse_meta(line_no: u64, body: &str) -> Result<Meta> {
    let mut meta = Meta::default();
    for pair in body.split(',') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("metadata entry {pair:?} is not key=value")))?;
        let (k, v) = (k.trim(), v.trim());
        let bad = |e: String| parse_err(line_no, format!("metadata {k}: {e}"));
        match k {
            "n" => meta.n = Some(v.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            "m" => meta.m = Some(v.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            "t1" => meta.t1 = Some(v.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?),
            "t2" => meta.t2 = Some(v.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?),
            "case" => meta.case = Some(v.parse().map_err(|e: Error| bad(e.to_string()))?),
            "r_star" => meta.r_star = Some(v.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            "t_star" => meta.t_star = Some(v.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?),
            other => return Err(parse_err(line_no, format!("unknown metadata key {other:?}"))),
        }
    }
    Ok(meta)
}

/// Parses a sample file and re-validates every sample invariant.
pub fn parse_sample(text: &str) -> Result<IatSample> {
    let mut meta = None;
    for (i, line) in text.lines().enumerate() {
        let Some(body) = line.trim_start().strip_prefix('#') else { continue };
        let body = body.trim();
        if body.starts_with("n=") {
            meta = Some((i as u64 + 1, parse_meta(i as u64 + 1, body)?));
            break;
        }
    }
    let (meta_line, meta) = meta.ok_or_else(|| parse_err(1, "missing '# n=..,m=..' metadata line"))?;
    let missing = |k: &str| parse_err(meta_line, format!("metadata is missing {k}"));
    let rows = read_rows(text, true)?;
    let mut prev = 0.0;
    for r in &rows {
        if !(r.time > prev) {
            return Err(parse_err(r.line, "sample times must be strictly increasing"));
        }
        prev = r.time;
    }
    let sample = IatSample::from_parts(
        meta.n.ok_or_else(|| missing("n"))?,
        meta.m.ok_or_else(|| missing("m"))?,
        meta.t1.ok_or_else(|| missing("t1"))?,
        meta.t2.ok_or_else(|| missing("t2"))?,
        rows.iter().map(|r| r.time).collect(),
        rows.iter().map(|r| r.cause).collect(),
        rows.iter().map(|r| r.removal.unwrap_or(0)).collect(),
        meta.r_star.ok_or_else(|| missing("r_star"))?,
        meta.t_star.ok_or_else(|| missing("t_star"))?,
    )?;
    if let Some(case) = meta.case {
        if case != sample.case().tag {
            return Err(parse_err(
                meta_line,
                format!("metadata says case {case} but the times imply case {}", sample.case().tag),
            ));
        }
    }
    Ok(sample)
}
