//! Cross-sectional Sharpe-versus-skewness analysis and the rolling
//! correlation spectrum of a strategy panel.

use std::collections::BTreeSet;

use chrono::NaiveDate;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::portfolio::Panel;
use crate::skew::ols_slope;
use crate::stats::{self, pearson};

pub const MIN_FIT_ROWS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossSectionRow {
    pub name: String,
    pub sharpe: f64,
    pub vol: f64,
    pub zeta_star: f64,
    pub err_sharpe: f64,
    pub err_zeta_star: f64,
    pub fit: bool,
}

/// One row per strategy; names are unique and errors non-negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossSection {
    rows: Vec<CrossSectionRow>,
}

impl CrossSection {
    pub fn new(rows: Vec<CrossSectionRow>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &rows {
            if !seen.insert(r.name.as_str()) {
                return Err(Error::InvalidSeries(format!("duplicate row name {}", r.name)));
            }
            let nums = [r.sharpe, r.vol, r.zeta_star, r.err_sharpe, r.err_zeta_star];
            if nums.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSeries(format!("non-finite value in row {}", r.name)));
            }
            if r.err_sharpe < 0.0 || r.err_zeta_star < 0.0 {
                return Err(Error::InvalidSeries(format!("negative error in row {}", r.name)));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[CrossSectionRow] {
        &self.rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Class {
    OnLine,
    BelowLine,
    PureAlpha,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::OnLine => "on-line",
            Class::BelowLine => "below-line",
            Class::PureAlpha => "pure-alpha",
        }
    }
}

/// Fit `S = a + b (-zeta*)` and the rows' positions relative to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    pub intercept: f64,
    pub slope: f64,
    /// `corr(zeta*, S)`; absent when either column is constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr_skew_sr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr_vol_sr: Option<f64>,
    pub channel_halfwidth: f64,
    /// Same order as the input rows.
    pub classes: Vec<Class>,
}

/// Classifies one point against the line `S = a + b (-zeta*)` with a
/// channel of half-width `channel`.
pub fn classify(sharpe: f64, zeta_star: f64, intercept: f64, slope: f64, channel: f64) -> Class {
    let residual = sharpe - (intercept - slope * zeta_star);
    // keeps exactly-fitted rows on the line despite rounding
    let slack = channel + 1e-12 * (1.0 + sharpe.abs());
    if residual > slack {
        Class::PureAlpha
    } else if residual < -slack {
        Class::BelowLine
    } else {
        Class::OnLine
    }
}

/// Half-width of the 2-sigma channel: twice the median over rows of
/// `sqrt(err_sharpe^2 + b^2 err_zeta_star^2)`.
pub fn channel_halfwidth(rows: &[CrossSectionRow], slope: f64) -> f64 {
    let combined: Vec<f64> = rows.iter().map(|r| r.err_sharpe.hypot(slope * r.err_zeta_star)).collect();
    if combined.is_empty() {
        return 0.0;
    }
    2.0 * stats::median(&combined)
}

/// Unweighted OLS of S on -zeta* over the fit rows; correlations over all rows.
pub fn cross_section_stats(cs: &CrossSection) -> Result<RegressionResult> {
    let fit: Vec<&CrossSectionRow> = cs.rows.iter().filter(|r| r.fit).collect();
    if fit.len() < MIN_FIT_ROWS {
        return Err(Error::TooFewRows { needed: MIN_FIT_ROWS, got: fit.len() });
    }
    let x: Vec<f64> = fit.iter().map(|r| -r.zeta_star).collect();
    let y: Vec<f64> = fit.iter().map(|r| r.sharpe).collect();
    if x.iter().all(|v| *v == x[0]) {
        return Err(Error::DegenerateX);
    }
    let slope = ols_slope(&x, &y);
    let intercept = stats::mean(&y) - slope * stats::mean(&x);

    let zs: Vec<f64> = cs.rows.iter().map(|r| r.zeta_star).collect();
    let srs: Vec<f64> = cs.rows.iter().map(|r| r.sharpe).collect();
    let vols: Vec<f64> = cs.rows.iter().map(|r| r.vol).collect();
    let channel = channel_halfwidth(&cs.rows, slope);
    let classes = cs.rows.iter().map(|r| classify(r.sharpe, r.zeta_star, intercept, slope, channel)).collect();
    Ok(RegressionResult {
        intercept,
        slope,
        corr_skew_sr: pearson(&zs, &srs),
        corr_vol_sr: pearson(&vols, &srs),
        channel_halfwidth: channel,
        classes,
    })
}

pub const DEFAULT_PCA_WINDOW: usize = 252;
pub const DEFAULT_PCA_STEP: usize = 21;
/// Minimum fraction of a window on which a pair must overlap.
pub const MIN_PAIR_OVERLAP: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
    /// Descending; they sum to the number of strategies.
    pub eigenvalues: Vec<f64>,
    /// `lambda1 / lambda2`; absent when `lambda2` vanishes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
    #[serde(skip)]
    top_vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaSpectrum {
    pub assets: Vec<String>,
    pub windows: Vec<PcaWindow>,
    /// Mean |cos| between top eigenvectors of consecutive windows; absent
    /// with a single window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<f64>,
}

/// Rolling eigen-spectrum of the pairwise-complete correlation matrix.
///
/// Windows span `window` panel dates and advance by `step`. A window in
/// which some pair overlaps on fewer than 80% of its dates is skipped.
pub fn pca_spectrum(panel: &Panel, window: usize, step: usize) -> Result<PcaSpectrum> {
    let k = panel.assets().len();
    if k < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 strategies, got {k}")));
    }
    if window < 2 || step == 0 {
        return Err(Error::InvalidParams("window must be at least 2 and step positive".into()));
    }
    let t = panel.dates().len();
    if window > t {
        return Err(Error::TooFewRows { needed: window, got: t });
    }
    let starts: Vec<usize> = (0..=t - window).step_by(step).collect();
    let windows: Vec<Option<PcaWindow>> =
        starts.par_iter().map(|&s| window_spectrum(panel, s, s + window)).collect::<Result<_>>()?;
    let windows: Vec<PcaWindow> = windows.into_iter().flatten().collect();
    if windows.is_empty() {
        return Err(Error::InsufficientOverlap { needed: (MIN_PAIR_OVERLAP * window as f64).ceil() as usize, got: 0 });
    }
    let stability = (windows.len() > 1).then(|| {
        let cos: Vec<f64> = windows
            .windows(2)
            .map(|w| w[0].top_vector.iter().zip(&w[1].top_vector).map(|(a, b)| a * b).sum::<f64>().abs())
            .collect();
        stats::mean(&cos)
    });
    Ok(PcaSpectrum { assets: panel.assets().to_vec(), windows, stability })
}

fn window_spectrum(panel: &Panel, lo: usize, hi: usize) -> Result<Option<PcaWindow>> {
    let k = panel.assets().len();
    let need = (MIN_PAIR_OVERLAP * (hi - lo) as f64).ceil() as usize;
    for a in 0..k {
        let vals: Vec<f64> = (lo..hi).filter_map(|t| panel.get(t, a)).collect();
        if vals.len() >= 2 && vals.iter().all(|v| *v == vals[0]) {
            return Err(Error::SingularWindow(panel.dates()[lo]));
        }
    }
    let mut corr = DMatrix::<f64>::identity(k, k);
    for i in 0..k {
        for j in i + 1..k {
            let (x, y): (Vec<f64>, Vec<f64>) =
                (lo..hi).filter_map(|t| Some((panel.get(t, i)?, panel.get(t, j)?))).unzip();
            if x.len() < need.max(2) {
                return Ok(None);
            }
            let rho = pearson(&x, &y).ok_or(Error::SingularWindow(panel.dates()[lo]))?;
            corr[(i, j)] = rho;
            corr[(j, i)] = rho;
        }
    }
    let eig = corr.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let top_vector: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let separation = (eigenvalues[1] > 1e-12 * eigenvalues[0]).then(|| eigenvalues[0] / eigenvalues[1]);
    Ok(Some(PcaWindow {
        start: panel.dates()[lo],
        end: panel.dates()[hi - 1],
        eigenvalues,
        separation,
        top_vector,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Period;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn row(name: &str, zs: f64, sr: f64, vol: f64) -> CrossSectionRow {
        CrossSectionRow { name: name.into(), sharpe: sr, vol, zeta_star: zs, err_sharpe: 0.1, err_zeta_star: 0.1, fit: true }
    }

    #[test]
    fn exact_line_recovered() {
        let rows: Vec<_> = (0..6).map(|i| {
            let z = -2.0 + 0.5 * i as f64;
            row(&format!("r{i}"), z, 1.0 / 3.0 - z / 4.0, 1.0)
        }).collect();
        let r = cross_section_stats(&CrossSection::new(rows).unwrap()).unwrap();
        assert_relative_eq!(r.intercept, 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(r.slope, 0.25, epsilon = 1e-12);
        assert!(r.classes.iter().all(|c| *c == Class::OnLine));
        assert_eq!(r.corr_vol_sr, None);
        assert_relative_eq!(r.corr_skew_sr.unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn trend_row_is_pure_alpha_against_reference_line() {
        let errs = [row("a", 0.0, 0.0, 1.0); 1].map(|mut r| { r.err_sharpe = 0.14; r.err_zeta_star = 0.16; r });
        let channel = channel_halfwidth(&errs, 0.25);
        assert_eq!(classify(0.9, 0.43, 1.0 / 3.0, 0.25, channel), Class::PureAlpha);
        assert_eq!(classify(-0.5, -1.0, 1.0 / 3.0, 0.25, channel), Class::BelowLine);
    }

    #[test]
    fn validation() {
        assert!(CrossSection::new(vec![row("a", 0.0, 0.0, 1.0), row("a", 1.0, 0.0, 1.0)]).is_err());
        let mut bad = row("a", 0.0, 0.0, 1.0);
        bad.err_sharpe = -0.1;
        assert!(CrossSection::new(vec![bad]).is_err());
        let cs = CrossSection::new(vec![row("a", 0.0, 0.0, 1.0), row("b", 1.0, 0.0, 1.0)]).unwrap();
        assert!(matches!(cross_section_stats(&cs), Err(Error::TooFewRows { needed: 3, got: 2 })));
        let cs = CrossSection::new((0..4).map(|i| row(&format!("{i}"), -1.0, i as f64, 1.0)).collect()).unwrap();
        assert!(matches!(cross_section_stats(&cs), Err(Error::DegenerateX)));
    }

    #[test]
    fn excluded_rows_leave_fit_but_enter_correlation() {
        let mut rows: Vec<_> = (0..5).map(|i| row(&format!("r{i}"), -(i as f64), 0.2 * i as f64, 1.0)).collect();
        let mut outlier = row("trend", 0.5, 2.0, 1.0);
        outlier.fit = false;
        rows.push(outlier);
        let r = cross_section_stats(&CrossSection::new(rows).unwrap()).unwrap();
        assert_relative_eq!(r.slope, 0.2, epsilon = 1e-12);
        assert_eq!(r.classes[5], Class::PureAlpha);
        assert!(r.corr_skew_sr.unwrap() > -0.99);
    }

    proptest! {
        #[test]
        fn correlation_and_class_invariances(pts in proptest::collection::vec((-2.0f64..1.0, -0.5f64..1.5, 0.5f64..2.0), 4..12), shift in -1.0f64..1.0, rot in 0usize..12) {
            let rows: Vec<_> = pts.iter().enumerate().map(|(i, &(z, s, v))| row(&format!("r{i}"), z, s, v)).collect();
            let base = cross_section_stats(&CrossSection::new(rows.clone()).unwrap());
            prop_assume!(base.is_ok());
            let base = base.unwrap();
            prop_assume!(base.corr_skew_sr.is_some());

            let shifted: Vec<_> = rows.iter().cloned().map(|mut r| { r.sharpe += shift; r }).collect();
            let rs = cross_section_stats(&CrossSection::new(shifted).unwrap()).unwrap();
            prop_assert!((rs.corr_skew_sr.unwrap() - base.corr_skew_sr.unwrap()).abs() < 1e-9);

            let negated: Vec<_> = rows.iter().cloned().map(|mut r| { r.zeta_star = -r.zeta_star; r }).collect();
            let rn = cross_section_stats(&CrossSection::new(negated).unwrap()).unwrap();
            prop_assert!((rn.corr_skew_sr.unwrap() + base.corr_skew_sr.unwrap()).abs() < 1e-9);

            let mut rotated = rows.clone();
            let r = rot % rotated.len();
            rotated.rotate_left(r);
            let rr = cross_section_stats(&CrossSection::new(rotated).unwrap()).unwrap();
            let mut expect = base.classes.clone();
            expect.rotate_left(r);
            prop_assert_eq!(rr.classes, expect);
        }
    }

    fn factor_panel(k: usize, t: usize, loading: f64, seed: u64) -> Panel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let day0 = NaiveDate::from_ymd_opt(2000, 1, 3).unwrap();
        let mut rows = Vec::new();
        for d in 0..t {
            let f: f64 = StandardNormal.sample(&mut rng);
            for a in 0..k {
                let e: f64 = StandardNormal.sample(&mut rng);
                let v = loading * f + (1.0 - loading * loading).sqrt() * e;
                rows.push((day0 + chrono::Duration::days(d as i64), format!("s{a:02}"), v));
            }
        }
        Panel::from_long(Period::Daily, rows).unwrap()
    }

    #[test]
    fn one_factor_spectrum() {
        let k = 10;
        let p = factor_panel(k, 2000, 0.5f64.sqrt(), 3);
        let s = pca_spectrum(&p, 1000, 250).unwrap();
        for w in &s.windows {
            assert_relative_eq!(w.eigenvalues.iter().sum::<f64>(), k as f64, epsilon = 1e-9);
            assert!((w.eigenvalues[0] - (k as f64 / 2.0 + 0.5)).abs() < 0.6, "{:?}", w.eigenvalues);
        }
        assert!(s.stability.unwrap() > 0.98);
    }

    #[test]
    fn independent_strategies_unstable() {
        let p = factor_panel(10, 1500, 0.0, 9);
        let s = pca_spectrum(&p, 252, 252).unwrap();
        for w in &s.windows {
            assert!(w.separation.unwrap() < 1.0 + 4.0 * (10.0 / 252.0f64).sqrt());
        }
        assert!(s.stability.unwrap() < 0.7);
    }

    #[test]
    fn duplicate_strategy_rank_one() {
        let day0 = NaiveDate::from_ymd_opt(2000, 1, 3).unwrap();
        let rows = (0..30).flat_map(|d| {
            let v = ((d * 13) % 7) as f64 - 3.0;
            [(day0 + chrono::Duration::days(d), "a", v), (day0 + chrono::Duration::days(d), "b", v)]
        });
        let p = Panel::from_long(Period::Daily, rows).unwrap();
        let s = pca_spectrum(&p, 30, 1).unwrap();
        assert_relative_eq!(s.windows[0].eigenvalues[0], 2.0, epsilon = 1e-12);
        assert!(s.windows[0].eigenvalues[1].abs() < 1e-12);
        assert_eq!(s.windows[0].separation, None);
        assert_eq!(s.stability, None);
    }

    #[test]
    fn constant_strategy_is_singular() {
        let day0 = NaiveDate::from_ymd_opt(2000, 1, 3).unwrap();
        let rows = (0..30).flat_map(|d| [(day0 + chrono::Duration::days(d), "a", d as f64), (day0 + chrono::Duration::days(d), "b", 1.0)]);
        let p = Panel::from_long(Period::Daily, rows).unwrap();
        assert!(matches!(pca_spectrum(&p, 20, 5), Err(Error::SingularWindow(_))));
        assert!(matches!(pca_spectrum(&p, 40, 5), Err(Error::TooFewRows { .. })));
    }
}
