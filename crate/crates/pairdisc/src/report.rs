//! Rendering of verdicts and benchmark reports as text table, CSV or JSON
//! lines, and parsing of report CSVs back into stratum means.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use pairdisc_core::bench::BenchReport;
use pairdisc_core::{CausalVerdict, PairType};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    JsonLines,
}

/// Label of the summary row that pools every stratum.
pub const TOTAL: &str = "Total";

/// Decimal places of every real in a rendered report.
pub const DECIMALS: i32 = 6;

fn round(v: f64) -> f64 {
    let scale = 10f64.powi(DECIMALS);
    (v * scale).round() / scale
}

/// One row of a rendered report: a pair type or the total. Empty strata
/// have `count = 0` and no statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub stratum: String,
    /// Test applied to the stratum; `per-type` on the total row when the
    /// strata used different tests.
    pub test: String,
    pub count: usize,
    pub skipped: usize,
    pub accuracy: Option<f64>,
    /// Bootstrap mean of accuracy.
    pub mean: Option<f64>,
    /// Bootstrap standard deviation of accuracy.
    pub std: Option<f64>,
    pub ci: f64,
    pub replicates: usize,
    pub seed: u64,
}

pub const REPORT_COLUMNS: [&str; 10] = [
    "stratum",
    "test",
    "count",
    "skipped",
    "accuracy",
    "mean",
    "std",
    "ci",
    "replicates",
    "seed",
];

fn total_test_label(report: &BenchReport) -> String {
    let mut used: Vec<&str> = report
        .per_stratum
        .keys()
        .map(|t| report.policy.select(*t).as_str())
        .collect();
    used.sort_unstable();
    used.dedup();
    match used.as_slice() {
        [one] => (*one).to_owned(),
        _ => "per-type".to_owned(),
    }
}

/// Rows in the fixed order Categorical, Binary, Numerical, Mixed, Total.
pub fn report_rows(report: &BenchReport) -> Vec<ReportRow> {
    let row = |stratum: &str, test: String, stats: Option<&pairdisc_core::bench::StratumStats>| {
        ReportRow {
            stratum: stratum.to_owned(),
            test,
            count: stats.map_or(0, |s| s.count),
            skipped: stats.map_or(0, |s| s.skipped),
            accuracy: stats.map(|s| round(s.accuracy)),
            mean: stats.map(|s| round(s.bootstrap.mean)),
            std: stats.map(|s| round(s.bootstrap.std)),
            ci: report.ci,
            replicates: report.bootstrap_replicates,
            seed: report.seed.0,
        }
    };
    let mut rows: Vec<ReportRow> = PairType::ALL
        .iter()
        .map(|t| {
            let name = capitalize(t.as_str());
            row(
                &name,
                report.policy.select(*t).as_str().to_owned(),
                report.per_stratum.get(t),
            )
        })
        .collect();
    rows.push(row(TOTAL, total_test_label(report), Some(&report.total)));
    rows
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.6}"))
}

struct Table<'a>(&'a [ReportRow]);

impl fmt::Display for Table<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:<9} {:>6} {:>7} {:>9} {:>9} {:>9}",
            "stratum", "test", "count", "skipped", "accuracy", "mean", "std"
        )?;
        for r in self.0 {
            let blank = |v: Option<f64>| if v.is_some() { opt(v) } else { "-".into() };
            writeln!(
                f,
                "{:<12} {:<9} {:>6} {:>7} {:>9} {:>9} {:>9}",
                r.stratum,
                r.test,
                r.count,
                r.skipped,
                blank(r.accuracy),
                blank(r.mean),
                blank(r.std)
            )?;
        }
        if let Some(r) = self.0.first() {
            writeln!(
                f,
                "mean and std over {} bootstrap replicates; ci = {}; seed = {}",
                r.replicates, r.ci, r.seed
            )?;
        }
        Ok(())
    }
}

pub fn write_report<W: Write>(
    mut out: W,
    report: &BenchReport,
    format: OutputFormat,
) -> Result<()> {
    let rows = report_rows(report);
    match format {
        OutputFormat::Table => write!(out, "{}", Table(&rows))?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(REPORT_COLUMNS)?;
            for r in &rows {
                w.write_record([
                    r.stratum.clone(),
                    r.test.clone(),
                    r.count.to_string(),
                    r.skipped.to_string(),
                    opt(r.accuracy),
                    opt(r.mean),
                    opt(r.std),
                    r.ci.to_string(),
                    r.replicates.to_string(),
                    r.seed.to_string(),
                ])?;
            }
            w.flush()?;
        }
        OutputFormat::JsonLines => {
            for r in &rows {
                serde_json::to_writer(&mut out, r).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Per-pair record for `bench --verdicts`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub id: String,
    pub pair_type: String,
    pub truth: String,
    pub structure: Option<String>,
    pub p_causal: Option<f64>,
    pub p_anticausal: Option<f64>,
    pub test: Option<String>,
    pub error: Option<String>,
}

pub fn write_pair_records<W: Write>(out: W, report: &BenchReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for o in &report.outcomes {
        let (structure, p_causal, p_anticausal, test, error) = match &o.verdict {
            Ok(v) => (
                Some(v.structure.as_str().to_owned()),
                Some(v.p_causal),
                Some(v.p_anticausal),
                Some(v.test_used.as_str().to_owned()),
                None,
            ),
            Err(e) => (None, None, None, None, Some(e.to_string())),
        };
        w.serialize(PairRecord {
            id: o.id.clone(),
            pair_type: o.pair_type.as_str().to_owned(),
            truth: o.truth.as_str().to_owned(),
            structure,
            p_causal,
            p_anticausal,
            test,
            error,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct VerdictRecord<'a> {
    structure: &'a str,
    p_causal: f64,
    p_anticausal: f64,
    test_used: &'a str,
    pair_type: &'a str,
    ci: f64,
}

/// Shortest round-trip form, in exponent notation below 1e-4.
fn fmt_p(p: f64) -> String {
    if p != 0.0 && p.abs() < 1e-4 {
        format!("{p:e}")
    } else {
        p.to_string()
    }
}

pub fn write_verdict<W: Write>(mut out: W, v: &CausalVerdict, format: OutputFormat) -> Result<()> {
    let rec = VerdictRecord {
        structure: v.structure.as_str(),
        p_causal: v.p_causal,
        p_anticausal: v.p_anticausal,
        test_used: v.test_used.as_str(),
        pair_type: v.pair_type.as_str(),
        ci: v.ci,
    };
    match format {
        OutputFormat::Table => {
            writeln!(out, "structure     {}", rec.structure)?;
            writeln!(out, "p_causal      {}", fmt_p(rec.p_causal))?;
            writeln!(out, "p_anticausal  {}", fmt_p(rec.p_anticausal))?;
            writeln!(out, "test_used     {}", rec.test_used)?;
            writeln!(out, "pair_type     {}", rec.pair_type)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.serialize(&rec)?;
            w.flush()?;
        }
        OutputFormat::JsonLines => {
            serde_json::to_writer(&mut out, &rec).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Stratum means and counts read back from a report CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedReport {
    /// Bootstrap mean and pair count of each non-empty stratum.
    pub strata: BTreeMap<PairType, (f64, usize)>,
    pub total_mean: f64,
}

/// Parses a report CSV as written by [`write_report`].
pub fn parse_report_csv<R: Read>(input: R, source_name: &str) -> Result<ParsedReport> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(source_name, 1, e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::parse(source_name, 1, format!("missing column `{name}`")))
    };
    let (c_stratum, c_count, c_mean) = (col("stratum")?, col("count")?, col("mean")?);
    let mut parsed = ParsedReport::default();
    let mut total = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(source_name, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("");
        let count: usize = field(c_count).parse().map_err(|_| {
            Error::parse(source_name, line, format!("bad count `{}`", field(c_count)))
        })?;
        let mean = match field(c_mean) {
            "" if count == 0 => None,
            s => {
                let m = f64::from_str(s)
                    .ok()
                    .filter(|m| (0.0..=1.0).contains(m))
                    .ok_or_else(|| Error::parse(source_name, line, format!("bad mean `{s}`")))?;
                Some(m)
            }
        };
        let stratum = field(c_stratum);
        if stratum.eq_ignore_ascii_case(TOTAL) {
            if total.is_some() {
                return Err(Error::parse(source_name, line, "duplicate Total row"));
            }
            total =
                Some(mean.ok_or_else(|| Error::parse(source_name, line, "Total row has no mean"))?);
            continue;
        }
        let pair_type: PairType = stratum
            .parse()
            .map_err(|_| Error::parse(source_name, line, format!("unknown stratum `{stratum}`")))?;
        if let Some(m) = mean {
            if parsed.strata.insert(pair_type, (m, count)).is_some() {
                return Err(Error::parse(
                    source_name,
                    line,
                    format!("duplicate stratum `{stratum}`"),
                ));
            }
        }
    }
    parsed.total_mean =
        total.ok_or_else(|| Error::Input(format!("{source_name}: report has no Total row")))?;
    Ok(parsed)
}
