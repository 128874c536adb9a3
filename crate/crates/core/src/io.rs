//! CSV ingestion and the fixed-precision CSV/JSON writers.
//!
//! Every float written by this crate goes through [`fmt_f64`]: 17
//! significant digits in exponent form, which round-trips exactly.

use std::fs;
use std::io;
use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::analysis::{CrossSection, CrossSectionRow};
use crate::error::{Error, Result};
use crate::portfolio::Panel;
use crate::series::{Period, RateSeries, ReturnSeries};
use crate::synth::SweepRow;

/// How the `value` column of a series file is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Prices; converted to arithmetic returns `p_t / p_(t-1) - 1`.
    Price,
    Return,
    /// Annualized rates.
    Rate,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_err(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.display().to_string(), line: line as usize, msg: msg.into() }
}

/// Reads a headed CSV and hands each record with its line number to `f`.
/// `columns` are located by header name.
fn read_records<const K: usize>(
    path: &Path,
    columns: [&str; K],
    mut f: impl FnMut(u64, [&str; K]) -> Result<()>,
) -> Result<()> {
    let file = fs::File::open(path)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers().map_err(|e| parse_err(path, 1, e.to_string()))?.clone();
    let mut idx = [0usize; K];
    for (slot, name) in idx.iter_mut().zip(columns) {
        *slot = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| parse_err(path, 1, format!("missing column `{name}`")))?;
    }
    let mut any = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let fields = idx.map(|i| rec.get(i).unwrap_or(""));
        f(line, fields)?;
        any = true;
    }
    if !any {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

fn parse_date(path: &Path, line: u64, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| parse_err(path, line, format!("bad date `{s}`: {e}")))
}

fn parse_num(path: &Path, line: u64, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| parse_err(path, line, format!("bad number `{s}`")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite number `{s}`")));
    }
    Ok(v)
}

/// `(line, date, value)` rows of a `date,value` file, dates strictly increasing.
fn read_date_values(path: &Path) -> Result<Vec<(u64, NaiveDate, f64)>> {
    let mut rows: Vec<(u64, NaiveDate, f64)> = Vec::new();
    read_records(path, ["date", "value"], |line, [d, v]| {
        let date = parse_date(path, line, d)?;
        if let Some(last) = rows.last() {
            if date <= last.1 {
                return Err(parse_err(path, line, format!("date {date} does not follow {}", last.1)));
            }
        }
        rows.push((line, date, parse_num(path, line, v)?));
        Ok(())
    })?;
    Ok(rows)
}

fn label_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "series".to_string(), |s| s.to_string_lossy().into_owned())
}

/// Reads a `date,value` file of prices or returns.
pub fn read_series(path: &Path, kind: InputKind, period: Period) -> Result<ReturnSeries> {
    let rows = read_date_values(path)?;
    let (dates, values): (Vec<NaiveDate>, Vec<f64>) = match kind {
        InputKind::Return => rows.iter().map(|(_, d, v)| (*d, *v)).unzip(),
        InputKind::Price => {
            if let Some((line, _, p)) = rows.iter().find(|(_, _, p)| *p <= 0.0) {
                return Err(parse_err(path, *line, format!("non-positive price {p}")));
            }
            rows.windows(2).map(|w| (w[1].1, w[1].2 / w[0].2 - 1.0)).unzip()
        }
        InputKind::Rate => return Err(Error::InvalidParams("rate files are read with read_rates".into())),
    };
    if dates.is_empty() {
        return Err(Error::TooShort { needed: 2, got: rows.len() });
    }
    ReturnSeries::new(label_of(path), period, dates, values)
}

pub fn read_rates(path: &Path) -> Result<RateSeries> {
    let rows = read_date_values(path)?;
    let (dates, rates) = rows.iter().map(|(_, d, v)| (*d, *v)).unzip();
    RateSeries::new(label_of(path), dates, rates)
}

/// Reads a long-format `date,asset,value` file.
pub fn read_panel(path: &Path, period: Period) -> Result<Panel> {
    let mut rows = Vec::new();
    let mut seen = std::collections::HashSet::new();
    read_records(path, ["date", "asset", "value"], |line, [d, a, v]| {
        let date = parse_date(path, line, d)?;
        if a.is_empty() {
            return Err(parse_err(path, line, "empty asset name"));
        }
        if !seen.insert((date, a.to_string())) {
            return Err(parse_err(path, line, format!("duplicate cell for {a} on {date}")));
        }
        rows.push((date, a.to_string(), parse_num(path, line, v)?));
        Ok(())
    })?;
    Panel::from_long(period, rows)
}

fn parse_flag(path: &Path, line: u64, s: &str) -> Result<bool> {
    match s.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" => Ok(true),
        "0" | "false" | "no" | "n" => Ok(false),
        _ => Err(parse_err(path, line, format!("bad fit flag `{s}`"))),
    }
}

/// Reads `name,sharpe,vol,zeta_star,err_sharpe,err_zeta_star,fit`.
pub fn read_cross_section(path: &Path) -> Result<CrossSection> {
    let mut rows = Vec::new();
    let cols = ["name", "sharpe", "vol", "zeta_star", "err_sharpe", "err_zeta_star", "fit"];
    read_records(path, cols, |line, [name, s, v, z, es, ez, fit]| {
        let row = CrossSectionRow {
            name: name.to_string(),
            sharpe: parse_num(path, line, s)?,
            vol: parse_num(path, line, v)?,
            zeta_star: parse_num(path, line, z)?,
            err_sharpe: parse_num(path, line, es)?,
            err_zeta_star: parse_num(path, line, ez)?,
            fit: parse_flag(path, line, fit)?,
        };
        if row.err_sharpe < 0.0 || row.err_zeta_star < 0.0 {
            return Err(parse_err(path, line, "negative error"));
        }
        rows.push(row);
        Ok(())
    })?;
    CrossSection::new(rows)
}

/// Builds CSV text from a header and pre-formatted rows.
pub fn csv_text<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// The standard `date,value` series format.
pub fn series_csv(s: &ReturnSeries) -> String {
    csv_text(
        &["date", "value"],
        s.dates().iter().zip(s.values()).map(|(d, v)| vec![d.format("%Y-%m-%d").to_string(), fmt_f64(*v)]),
    )
}

/// Ranked-P&L plot data: the raw curve and its symmetrized counterpart.
pub fn curve_csv(p: &[f64], f: &[f64], f_sym: &[f64]) -> String {
    csv_text(
        &["p", "F", "F_sym"],
        p.iter().zip(f).zip(f_sym).map(|((p, f), s)| vec![fmt_f64(*p), fmt_f64(*f), fmt_f64(*s)]),
    )
}

/// Sweep table; `zeta3` is empty where the third moment does not exist.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    csv_text(
        &["nu_plus", "nu_minus", "zeta3", "zeta_star", "standardized"],
        rows.iter().map(|r| {
            vec![
                fmt_f64(r.nu_plus),
                fmt_f64(r.nu_minus),
                r.zeta3.map(fmt_f64).unwrap_or_default(),
                fmt_f64(r.zeta_star),
                r.standardized.to_string(),
            ]
        }),
    )
}

/// Pretty JSON whose floats carry 17 significant digits.
struct FixedFloat<'a> {
    inner: PrettyFormatter<'a>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.inner.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(fmt_f64(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat { inner: PrettyFormatter::new() });
    value.serialize(&mut ser).map_err(|e| Error::InvalidParams(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes utf-8"))
}

/// Writes `contents` to `path`.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::IoWrite { path: path.display().to_string(), source })
}
