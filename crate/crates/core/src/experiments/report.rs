use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;

/// Values are written with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.11e}")
    }
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        fmt12(x).parse().unwrap_or(x)
    } else {
        x
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad number '{s}'")))
}

fn fmt_point(p: &Point) -> String {
    p.coords()
        .iter()
        .map(|&x| fmt12(x))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_point(s: &str) -> Result<Point> {
    let xs = s.split(';').map(parse_num).collect::<Result<Vec<f64>>>()?;
    Point::from_slice(&xs).map_err(|e| Error::Parse(e.to_string()))
}

mod r12 {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        F(f64),
        S(String),
    }

    pub fn to_json(x: f64) -> serde_json::Value {
        if x.is_finite() {
            serde_json::json!(super::round12(x))
        } else {
            serde_json::json!(super::fmt12(x))
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(super::round12(*x))
        } else {
            s.serialize_str(&super::fmt12(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Num::deserialize(d)? {
            Num::F(x) => Ok(x),
            Num::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }

    pub mod opt {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            x.map(super::to_json).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            #[derive(Deserialize)]
            struct W(#[serde(with = "super")] f64);
            Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
        }
    }

    pub mod point {
        use crate::geom::Point;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
            p.coords()
                .iter()
                .map(|&x| super::to_json(x))
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
            #[derive(Deserialize)]
            struct W(#[serde(with = "super")] f64);
            let xs: Vec<f64> = Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect();
            Point::from_slice(&xs).map_err(serde::de::Error::custom)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    /// The rung could not be resolved by the grid (too close to the boundary or
    /// too many nodes); numeric fields of the solver are NaN.
    Skipped,
}

/// One pair of points with its distances and bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    /// Rung index (ladders) or pair index (bound suites).
    pub k: usize,
    /// Rung scale `t_k`, or the larger depth of the pair.
    #[serde(with = "r12")]
    pub t: f64,
    #[serde(with = "r12::point")]
    pub a: Point,
    #[serde(with = "r12::point")]
    pub b: Point,
    #[serde(with = "r12")]
    pub d_a: f64,
    #[serde(with = "r12")]
    pub d_b: f64,
    #[serde(with = "r12")]
    pub sep: f64,
    #[serde(with = "r12")]
    pub s: f64,
    #[serde(with = "r12")]
    pub h: f64,
    #[serde(with = "r12")]
    pub h_minus_s: f64,
    #[serde(with = "r12")]
    pub h_over_s: f64,
    #[serde(with = "r12")]
    pub ghm: f64,
    #[serde(with = "r12")]
    pub na_bound: f64,
    #[serde(with = "r12")]
    pub error_estimate: f64,
    pub converged: bool,
    pub status: RowStatus,
}

impl ExperimentRow {
    /// `ghm <= h + error_estimate`; skipped rows pass.
    pub fn ghm_ok(&self) -> bool {
        self.status == RowStatus::Skipped || self.ghm <= self.h + self.error_estimate
    }

    /// `h <= na_bound + error_estimate`; skipped rows and rows without a
    /// bound pass.
    pub fn na_ok(&self) -> bool {
        self.status == RowStatus::Skipped
            || self.na_bound.is_nan()
            || self.h <= self.na_bound + self.error_estimate
    }
}

/// Outcome of a ladder at its finest resolved rung.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// `|h - s|` at the finest rung.
    #[serde(with = "r12")]
    pub diff_trend: f64,
    /// `|h / s - 1|` at the finest rung.
    #[serde(with = "r12")]
    pub ratio_trend: f64,
    pub finest_k: usize,
    pub converged: bool,
    /// Number of rungs where `|h - s|` grew compared with the previous rung.
    pub inversions: usize,
    pub ghm_violations: usize,
    pub passed: bool,
}

/// Extent of validity of the upper bound for one constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    #[serde(with = "r12")]
    pub c: f64,
    /// Largest depth such that every pair of at most that depth satisfies the bound.
    #[serde(with = "r12")]
    pub t_star: f64,
    pub violations: usize,
    pub tested: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub domain: Option<String>,
    pub mode: Option<String>,
    pub grid: Option<String>,
    #[serde(with = "r12::opt")]
    pub c: Option<f64>,
    pub timestamp: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub verdict: Option<Verdict>,
    pub bounds: Vec<BoundSummary>,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentReport {
    pub fn ghm_violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.ghm_ok()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Parse(format!(
                "unknown format '{other}' (csv or json)"
            ))),
        }
    }
}

pub const CSV_HEADER: &str =
    "k,t,a,b,d_a,d_b,sep,s,h,h_minus_s,h_over_s,ghm,na_bound,error_estimate,converged,status";

/// Serializes a report. Column order and number formatting are fixed.
pub fn render_report(report: &ExperimentReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s =
                serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => Ok(render_csv(report)),
    }
}

fn render_csv(r: &ExperimentReport) -> String {
    let mut out = String::new();
    let m = &r.metadata;
    for (key, val) in [("domain", &m.domain), ("mode", &m.mode), ("grid", &m.grid)] {
        if let Some(v) = val {
            let _ = writeln!(out, "# {key}: {v}");
        }
    }
    if let Some(c) = m.c {
        let _ = writeln!(out, "# c: {}", fmt12(c));
    }
    if let Some(ts) = &m.timestamp {
        let _ = writeln!(out, "# timestamp: {ts}");
    }
    if let Some(v) = &r.verdict {
        let _ = writeln!(
            out,
            "# verdict: diff_trend={};ratio_trend={};finest_k={};converged={};inversions={};ghm_violations={};passed={}",
            fmt12(v.diff_trend),
            fmt12(v.ratio_trend),
            v.finest_k,
            v.converged,
            v.inversions,
            v.ghm_violations,
            v.passed
        );
    }
    for b in &r.bounds {
        let _ = writeln!(
            out,
            "# bound: c={};t_star={};violations={};tested={}",
            fmt12(b.c),
            fmt12(b.t_star),
            b.violations,
            b.tested
        );
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &r.rows {
        let mut fields = vec![
            row.k.to_string(),
            fmt12(row.t),
            fmt_point(&row.a),
            fmt_point(&row.b),
        ];
        fields.extend(
            [
                row.d_a,
                row.d_b,
                row.sep,
                row.s,
                row.h,
                row.h_minus_s,
                row.h_over_s,
                row.ghm,
                row.na_bound,
                row.error_estimate,
            ]
            .map(fmt12),
        );
        fields.push(row.converged.to_string());
        fields.push(
            match row.status {
                RowStatus::Ok => "ok",
                RowStatus::Skipped => "skipped",
            }
            .into(),
        );
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Writes `report` to `path`.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render_report(report, format)?)?;
    Ok(())
}

/// Inverse of `render_report`.
pub fn parse_report(text: &str, format: ReportFormat) -> Result<ExperimentReport> {
    match format {
        ReportFormat::Json => serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string())),
        ReportFormat::Csv => parse_csv(text),
    }
}

fn kv_fields(s: &str) -> Result<Vec<(&str, &str)>> {
    s.split(';')
        .map(|f| {
            f.split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{f}'")))
        })
        .collect()
}

fn field<'a>(fields: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("missing '{key}'")))
}

fn parse_bool(s: &str) -> Result<bool> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad boolean '{s}'")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

fn parse_csv(text: &str) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::default();
    let mut header_seen = false;
    for line in text.lines() {
        if let Some(meta) = line.strip_prefix("# ") {
            let (key, val) = meta
                .split_once(": ")
                .ok_or_else(|| Error::Parse(format!("bad metadata line '{line}'")))?;
            match key {
                "domain" => r.metadata.domain = Some(val.into()),
                "mode" => r.metadata.mode = Some(val.into()),
                "grid" => r.metadata.grid = Some(val.into()),
                "c" => r.metadata.c = Some(parse_num(val)?),
                "timestamp" => r.metadata.timestamp = Some(val.into()),
                "verdict" => {
                    let f = kv_fields(val)?;
                    r.verdict = Some(Verdict {
                        diff_trend: parse_num(field(&f, "diff_trend")?)?,
                        ratio_trend: parse_num(field(&f, "ratio_trend")?)?,
                        finest_k: parse_usize(field(&f, "finest_k")?)?,
                        converged: parse_bool(field(&f, "converged")?)?,
                        inversions: parse_usize(field(&f, "inversions")?)?,
                        ghm_violations: parse_usize(field(&f, "ghm_violations")?)?,
                        passed: parse_bool(field(&f, "passed")?)?,
                    });
                }
                "bound" => {
                    let f = kv_fields(val)?;
                    r.bounds.push(BoundSummary {
                        c: parse_num(field(&f, "c")?)?,
                        t_star: parse_num(field(&f, "t_star")?)?,
                        violations: parse_usize(field(&f, "violations")?)?,
                        tested: parse_usize(field(&f, "tested")?)?,
                    });
                }
                other => return Err(Error::Parse(format!("unknown metadata key '{other}'"))),
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line != CSV_HEADER {
                return Err(Error::Parse(format!("unexpected header '{line}'")));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 16 {
            return Err(Error::Parse(format!(
                "expected 16 columns, got {}",
                f.len()
            )));
        }
        r.rows.push(ExperimentRow {
            k: parse_usize(f[0])?,
            t: parse_num(f[1])?,
            a: parse_point(f[2])?,
            b: parse_point(f[3])?,
            d_a: parse_num(f[4])?,
            d_b: parse_num(f[5])?,
            sep: parse_num(f[6])?,
            s: parse_num(f[7])?,
            h: parse_num(f[8])?,
            h_minus_s: parse_num(f[9])?,
            h_over_s: parse_num(f[10])?,
            ghm: parse_num(f[11])?,
            na_bound: parse_num(f[12])?,
            error_estimate: parse_num(f[13])?,
            converged: parse_bool(f[14])?,
            status: match f[15] {
                "ok" => RowStatus::Ok,
                "skipped" => RowStatus::Skipped,
                other => return Err(Error::Parse(format!("bad status '{other}'"))),
            },
        });
    }
    if !header_seen {
        return Err(Error::Parse("missing CSV header".into()));
    }
    Ok(r)
}
