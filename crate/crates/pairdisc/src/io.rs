//! Text formats for pairs, ground truth and single observation tables.
//!
//! * Pairs file: CSV with header `SampleID,A,B`; `A` and `B` hold
//!   space-separated numbers of equal length.
//! * Truth file: CSV with header `SampleID,Target,Details`. `Target = 1` is
//!   A→B, `Target = -1` is B→A; with `Target = 0`, `Details = 3` marks a
//!   confounded pair and `Details = 4` an independent one.
//! * Observation table: CSV with header `A,B` and one observation per row.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use pairdisc_core::bench::LabeledPair;
use pairdisc_core::{Structure, VariablePair};

use crate::error::{Error, Result};

pub const PAIRS_HEADER: [&str; 3] = ["SampleID", "A", "B"];
pub const TRUTH_HEADER: [&str; 3] = ["SampleID", "Target", "Details"];
pub const TABLE_HEADER: [&str; 2] = ["A", "B"];

/// One row of a pairs file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPair {
    pub id: String,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// 1-based line number in the source.
    pub line: u64,
}

pub fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Read {
        path: path.to_owned(),
        source,
    })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input)
}

fn records<R: Read>(
    input: R,
    source_name: &str,
) -> Result<impl Iterator<Item = Result<(u64, csv::StringRecord)>>> {
    let name = source_name.to_owned();
    let iter = reader(input).into_records().map(move |r| {
        r.map(|rec| (rec.position().map_or(0, |p| p.line()), rec))
            .map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                Error::parse(&name, line, e.to_string())
            })
    });
    Ok(iter)
}

fn check_header(
    record: &csv::StringRecord,
    expected: &[&str],
    source_name: &str,
    line: u64,
) -> Result<()> {
    let got: Vec<&str> = record.iter().collect();
    if got.len() != expected.len()
        || got
            .iter()
            .zip(expected)
            .any(|(g, e)| !g.eq_ignore_ascii_case(e))
    {
        return Err(Error::parse(
            source_name,
            line,
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(())
}

fn parse_number(field: &str, source_name: &str, line: u64) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(source_name, line, format!("not a number: `{field}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(
            source_name,
            line,
            format!("non-finite value `{field}`"),
        ));
    }
    Ok(v)
}

fn parse_list(field: &str, source_name: &str, line: u64) -> Result<Vec<f64>> {
    field
        .split_ascii_whitespace()
        .map(|tok| parse_number(tok, source_name, line))
        .collect()
}

/// Reads a pairs file (`SampleID,A,B`).
pub fn read_pairs<R: Read>(input: R, source_name: &str) -> Result<Vec<RawPair>> {
    let mut rows = records(input, source_name)?;
    let Some(header) = rows.next() else {
        return Err(Error::parse(source_name, 1, "empty file"));
    };
    let (line, header) = header?;
    check_header(&header, &PAIRS_HEADER, source_name, line)?;
    let mut out = Vec::new();
    for row in rows {
        let (line, rec) = row?;
        if rec.len() != 3 {
            return Err(Error::parse(
                source_name,
                line,
                format!("expected 3 fields, found {}", rec.len()),
            ));
        }
        let a = parse_list(&rec[1], source_name, line)?;
        let b = parse_list(&rec[2], source_name, line)?;
        if a.len() != b.len() {
            return Err(Error::parse(
                source_name,
                line,
                format!("A has {} values but B has {}", a.len(), b.len()),
            ));
        }
        out.push(RawPair {
            id: rec[0].to_owned(),
            a,
            b,
            line,
        });
    }
    Ok(out)
}

fn parse_code(field: &str, what: &str, source_name: &str, line: u64) -> Result<i64> {
    let v = parse_number(field, source_name, line).map_err(|_| {
        Error::parse(
            source_name,
            line,
            format!("{what} is not an integer: `{field}`"),
        )
    })?;
    if v.fract() != 0.0 {
        return Err(Error::parse(
            source_name,
            line,
            format!("{what} is not an integer: `{field}`"),
        ));
    }
    Ok(v as i64)
}

/// Maps a `(Target, Details)` code pair to a structure.
pub fn decode_truth(target: i64, details: Option<i64>) -> std::result::Result<Structure, String> {
    match (target, details) {
        (1, _) => Ok(Structure::Causal),
        (-1, _) => Ok(Structure::Anticausal),
        (0, Some(3)) => Ok(Structure::Confounded),
        (0, Some(4)) => Ok(Structure::Independent),
        (0, Some(d)) => Err(format!("unknown Details code {d}")),
        (0, None) => Err("Target 0 needs a Details code".into()),
        (t, _) => Err(format!("unknown Target code {t}")),
    }
}

/// Reads a truth file (`SampleID,Target,Details`) in file order.
pub fn read_truth<R: Read>(input: R, source_name: &str) -> Result<Vec<(String, Structure)>> {
    let mut rows = records(input, source_name)?;
    let Some(header) = rows.next() else {
        return Err(Error::parse(source_name, 1, "empty file"));
    };
    let (line, header) = header?;
    check_header(&header, &TRUTH_HEADER, source_name, line)?;
    let mut out = Vec::new();
    for row in rows {
        let (line, rec) = row?;
        if rec.len() < 2 || rec.len() > 3 {
            return Err(Error::parse(
                source_name,
                line,
                format!("expected 3 fields, found {}", rec.len()),
            ));
        }
        let target = parse_code(&rec[1], "Target", source_name, line)?;
        let details = match rec.get(2) {
            Some(d) if !d.is_empty() => Some(parse_code(d, "Details", source_name, line)?),
            _ => None,
        };
        let truth =
            decode_truth(target, details).map_err(|m| Error::parse(source_name, line, m))?;
        out.push((rec[0].to_owned(), truth));
    }
    Ok(out)
}

/// Joins pairs with their ground truth by `SampleID`, keeping pairs-file
/// order. Every pair needs exactly one truth row and vice versa.
pub fn join_pairs(
    pairs: Vec<RawPair>,
    truth: Vec<(String, Structure)>,
    source_name: &str,
) -> Result<Vec<LabeledPair>> {
    if pairs.is_empty() {
        return Err(Error::Input("pairs file has no rows".into()));
    }
    if truth.is_empty() {
        return Err(Error::Input("truth file has no rows".into()));
    }
    let mut by_id: HashMap<String, Structure> = HashMap::with_capacity(truth.len());
    for (id, s) in truth {
        if by_id.insert(id.clone(), s).is_some() {
            return Err(Error::Input(format!(
                "duplicate SampleID `{id}` in truth file"
            )));
        }
    }
    let mut seen = HashSet::with_capacity(pairs.len());
    let mut out = Vec::with_capacity(pairs.len());
    for raw in pairs {
        if !seen.insert(raw.id.clone()) {
            return Err(Error::parse(
                source_name,
                raw.line,
                format!("duplicate SampleID `{}`", raw.id),
            ));
        }
        let truth = by_id.remove(&raw.id).ok_or_else(|| {
            Error::parse(
                source_name,
                raw.line,
                format!("no truth row for `{}`", raw.id),
            )
        })?;
        let pair = VariablePair::from_values(raw.a, raw.b)
            .map_err(|e| Error::parse(source_name, raw.line, e.to_string()))?;
        out.push(LabeledPair {
            id: raw.id,
            pair,
            truth,
        });
    }
    if let Some(id) = by_id.keys().min() {
        return Err(Error::Input(format!(
            "truth row `{id}` has no matching pair"
        )));
    }
    Ok(out)
}

/// Loads a labelled benchmark from a pairs file and a truth file.
pub fn load_pairs(pairs_path: &Path, truth_path: &Path) -> Result<Vec<LabeledPair>> {
    let pairs_name = pairs_path.display().to_string();
    let pairs = read_pairs(open(pairs_path)?, &pairs_name)?;
    let truth = read_truth(open(truth_path)?, &truth_path.display().to_string())?;
    join_pairs(pairs, truth, &pairs_name)
}

/// Reads the input of `discover`: either an `A,B` observation table or a
/// pairs file holding a single row.
pub fn read_discover_input<R: Read>(
    mut input: R,
    source_name: &str,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::parse(source_name, 0, e.to_string()))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let fields: Vec<&str> = first.split(',').map(str::trim).collect();
    if fields.len() == 3 && fields[0].eq_ignore_ascii_case("SampleID") {
        let mut pairs = read_pairs(text.as_bytes(), source_name)?;
        return match pairs.len() {
            1 => {
                let p = pairs.remove(0);
                Ok((p.a, p.b))
            }
            n => Err(Error::Input(format!(
                "expected exactly one pair row, found {n}"
            ))),
        };
    }
    read_table(text.as_bytes(), source_name)
}

/// Reads an `A,B` observation table.
pub fn read_table<R: Read>(input: R, source_name: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rows = records(input, source_name)?;
    let Some(header) = rows.next() else {
        return Err(Error::parse(source_name, 1, "empty input"));
    };
    let (line, header) = header?;
    check_header(&header, &TABLE_HEADER, source_name, line)?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for row in rows {
        let (line, rec) = row?;
        if rec.len() != 2 || rec[0].is_empty() || rec[1].is_empty() {
            return Err(Error::parse(
                source_name,
                line,
                "columns A and B must have equal length",
            ));
        }
        a.push(parse_number(&rec[0], source_name, line)?);
        b.push(parse_number(&rec[1], source_name, line)?);
    }
    Ok((a, b))
}

/// Writes an `A,B` observation table. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_table<W: Write>(out: W, a: &[f64], b: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for (x, y) in a.iter().zip(b) {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
