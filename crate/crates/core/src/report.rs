//! Report assembly: one JSON document plus plot-data CSVs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{CrossSectionRow, PcaSpectrum, RegressionResult};
use crate::error::{Error, Result};
use crate::io::{csv_text, fmt_f64, sweep_csv, to_json, write_file};
use crate::portfolio::DecileTable;
use crate::skew::SkewReport;
use crate::synth::SweepRow;

/// Where an input came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionSection {
    pub rows: Vec<CrossSectionRow>,
    pub result: RegressionResult,
}

/// Exact functionals of a synthetic distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthSection {
    pub distribution: String,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_zeta_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_zeta3: Option<f64>,
    pub standardized: bool,
}

/// Ranked-P&L plot data for one series.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    pub name: String,
    pub p: Vec<f64>,
    pub f: Vec<f64>,
    pub f_sym: Vec<f64>,
}

/// Everything a run produced. Empty sections are left out of the JSON.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub tool: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<InputRecord>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub settings: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skew: Vec<SkewReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deciles: Option<DecileTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regression: Option<RegressionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pca: Option<PcaSpectrum>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fig10: Vec<SweepRow>,
    #[serde(skip)]
    pub curves: Vec<CurveData>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            tool: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            command: command.into(),
            ..Self::default()
        }
    }

    fn has_results(&self) -> bool {
        !self.skew.is_empty()
            || self.synth.is_some()
            || self.deciles.is_some()
            || self.regression.is_some()
            || self.pca.is_some()
            || !self.fig10.is_empty()
            || !self.curves.is_empty()
    }
}

/// File name of the curve CSV for a series label.
pub fn curve_file_name(label: &str) -> String {
    let stem: String = label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    format!("curve_{stem}.csv")
}

/// `name,neg_zeta_star,sharpe,err_x,err_y,class`.
pub fn scatter_csv(section: &RegressionSection) -> String {
    csv_text(
        &["name", "neg_zeta_star", "sharpe", "err_x", "err_y", "class"],
        section.rows.iter().zip(&section.result.classes).map(|(r, c)| {
            vec![
                r.name.clone(),
                fmt_f64(-r.zeta_star),
                fmt_f64(r.sharpe),
                fmt_f64(r.err_zeta_star),
                fmt_f64(r.err_sharpe),
                c.name().to_string(),
            ]
        }),
    )
}

/// Regression line and channel edges at the extreme abscissae.
pub fn channel_csv(section: &RegressionSection) -> String {
    let xs: Vec<f64> = section.rows.iter().map(|r| -r.zeta_star).collect();
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let res = &section.result;
    csv_text(
        &["neg_zeta_star", "line", "upper", "lower"],
        [lo, hi].into_iter().map(|x| {
            let y = res.intercept + res.slope * x;
            vec![fmt_f64(x), fmt_f64(y), fmt_f64(y + res.channel_halfwidth), fmt_f64(y - res.channel_halfwidth)]
        }),
    )
}

pub fn decile_csv(table: &DecileTable) -> String {
    csv_text(
        &["bucket", "vol_pct", "zeta_star", "sharpe"],
        table.rows.iter().map(|r| vec![r.bucket.to_string(), fmt_f64(r.vol_pct), fmt_f64(r.zeta_star), fmt_f64(r.sharpe)]),
    )
}

/// One row per window: dates, separation, then the eigenvalues.
pub fn pca_csv(pca: &PcaSpectrum) -> String {
    let k = pca.assets.len();
    let mut header = vec!["start".to_string(), "end".to_string(), "separation".to_string()];
    header.extend((1..=k).map(|i| format!("lambda{i}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_text(
        &header,
        pca.windows.iter().map(|w| {
            let mut row = vec![
                w.start.format("%Y-%m-%d").to_string(),
                w.end.format("%Y-%m-%d").to_string(),
                w.separation.map(fmt_f64).unwrap_or_default(),
            ];
            row.extend(w.eigenvalues.iter().map(|v| fmt_f64(*v)));
            row
        }),
    )
}

/// Writes `report.json` and the plot-data CSVs into `out_dir`, returning the
/// paths written. On failure, files already written by this call are removed.
pub fn render_report(report: &Report, out_dir: &Path) -> Result<Vec<PathBuf>> {
    if !report.has_results() {
        return Err(Error::EmptyInput);
    }
    let mut files: Vec<(PathBuf, String)> = vec![(out_dir.join("report.json"), to_json(report)?)];
    for c in &report.curves {
        let text = crate::io::curve_csv(&c.p, &c.f, &c.f_sym);
        files.push((out_dir.join(curve_file_name(&c.name)), text));
    }
    if let Some(r) = &report.regression {
        files.push((out_dir.join("scatter.csv"), scatter_csv(r)));
        files.push((out_dir.join("channel.csv"), channel_csv(r)));
    }
    if let Some(d) = &report.deciles {
        files.push((out_dir.join("deciles.csv"), decile_csv(d)));
    }
    if let Some(p) = &report.pca {
        files.push((out_dir.join("pca.csv"), pca_csv(p)));
    }
    if !report.fig10.is_empty() {
        files.push((out_dir.join("fig10.csv"), sweep_csv(&report.fig10)));
    }
    let mut written = Vec::with_capacity(files.len());
    for (path, text) in files {
        if let Err(e) = write_file(&path, &text) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            return Err(e);
        }
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{cross_section_stats, CrossSection};

    fn regression() -> RegressionSection {
        let rows: Vec<CrossSectionRow> = (0..4)
            .map(|i| CrossSectionRow {
                name: format!("s{i}"),
                sharpe: 0.1 * i as f64,
                vol: 1.0,
                zeta_star: -0.5 * i as f64,
                err_sharpe: 0.1,
                err_zeta_star: 0.1,
                fit: true,
            })
            .collect();
        let result = cross_section_stats(&CrossSection::new(rows.clone()).unwrap()).unwrap();
        RegressionSection { rows, result }
    }

    #[test]
    fn empty_report_rejected_and_nulls_omitted() {
        let dir = tempfile::tempdir().unwrap();
        let r = Report::new("test");
        assert!(matches!(render_report(&r, dir.path()), Err(Error::EmptyInput)));
        let mut r = Report::new("test");
        r.regression = Some(regression());
        let text = to_json(&r).unwrap();
        assert!(!text.contains("null"));
        assert!(!text.contains("\"pca\""));
        assert!(!text.contains("\"seed\""));
    }

    #[test]
    fn scatter_schema_and_byte_stability() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = Report::new("test");
        r.seed = Some(3);
        r.regression = Some(regression());
        let files = render_report(&r, dir.path()).unwrap();
        let names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
        assert_eq!(names, ["report.json", "scatter.csv", "channel.csv"]);
        let scatter = std::fs::read_to_string(&files[1]).unwrap();
        assert!(scatter.starts_with("name,neg_zeta_star,sharpe,err_x,err_y,class\n"));
        let first = std::fs::read(&files[0]).unwrap();
        render_report(&r, dir.path()).unwrap();
        assert_eq!(std::fs::read(&files[0]).unwrap(), first);
    }

    #[test]
    fn failed_write_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = Report::new("test");
        r.regression = Some(regression());
        // a directory where a file should go makes the second write fail
        std::fs::create_dir(dir.path().join("scatter.csv")).unwrap();
        assert!(matches!(render_report(&r, dir.path()), Err(Error::IoWrite { .. })));
        assert!(!dir.path().join("report.json").exists());
    }
}
