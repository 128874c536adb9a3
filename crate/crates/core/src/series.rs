//! Dated return series and the algebra the rest of the crate builds on:
//! standardization, excess returns, monthly aggregation, risk management,
//! sign symmetrization and performance statistics.
//!
//! Returns are arithmetic and additive throughout; P&L is the running sum of
//! returns, never a compounded product.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use chrono::{Datelike, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

/// Sampling frequency of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Period {
    Daily,
    Monthly,
}

impl Period {
    /// Periods per year used for annualization.
    pub fn periods_per_year(self) -> f64 {
        match self {
            Period::Daily => 252.0,
            Period::Monthly => 12.0,
        }
    }

    /// Accrual fraction of a year for one step.
    pub fn year_fraction(self) -> f64 {
        1.0 / self.periods_per_year()
    }

    pub fn name(self) -> &'static str {
        match self {
            Period::Daily => "daily",
            Period::Monthly => "monthly",
        }
    }
}

fn check_dates(dates: &[NaiveDate]) -> Result<()> {
    if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSeries(format!(
            "dates not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// A dated stream of arithmetic returns.
///
/// Dates are strictly increasing and every value is finite. Operations that
/// need more than one point check length themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    label: String,
    period: Period,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(
        label: impl Into<String>,
        period: Period,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} dates but {} values",
                dates.len(),
                values.len()
            )));
        }
        if dates.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_dates(&dates)?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite return {} at {}",
                values[i], dates[i]
            )));
        }
        Ok(Self { label: label.into(), period, dates, values })
    }

    /// Builds a series on consecutive calendar days starting 2000-01-01.
    ///
    /// Used for synthetic samples, where only the order of points matters.
    pub fn from_values(label: impl Into<String>, period: Period, values: Vec<f64>) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
        let dates = match period {
            Period::Daily => start.iter_days().take(values.len()).collect(),
            Period::Monthly => (0..values.len())
                .map(|i| {
                    let m = i as i32;
                    month_end(2000 + m.div_euclid(12), (m.rem_euclid(12) + 1) as u32)
                })
                .collect(),
        };
        Self::new(label, period, dates, values)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same dates, new values. Internal callers guarantee finiteness.
    fn map_values(&self, label: String, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.dates.len());
        Self { label, period: self.period, dates: self.dates.clone(), values }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// An annualized rate series (risk-free or funding leg).
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    label: String,
    dates: Vec<NaiveDate>,
    rates: Vec<f64>,
}

impl RateSeries {
    pub fn new(label: impl Into<String>, dates: Vec<NaiveDate>, rates: Vec<f64>) -> Result<Self> {
        if dates.len() != rates.len() {
            return Err(Error::InvalidSeries("dates and rates differ in length".into()));
        }
        if dates.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_dates(&dates)?;
        if rates.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidSeries("non-finite rate".into()));
        }
        Ok(Self { label: label.into(), dates, rates })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Last known rate on or before `date`.
    pub fn rate_on(&self, date: NaiveDate) -> Option<f64> {
        let idx = self.dates.partition_point(|d| *d <= date);
        idx.checked_sub(1).map(|i| self.rates[i])
    }
}

/// A series rescaled to zero mean and unit population variance, remembering
/// the affine map that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedSeries {
    pub series: ReturnSeries,
    /// Original mean.
    pub mean: f64,
    /// Original population standard deviation.
    pub scale: f64,
}

impl StandardizedSeries {
    /// Maps standardized values back to the original units.
    pub fn invert(&self) -> Vec<f64> {
        self.series.values.iter().map(|z| self.mean + self.scale * z).collect()
    }
}

pub fn standardize(s: &ReturnSeries) -> Result<StandardizedSeries> {
    let (values, mean, scale) = stats::standardize_values(s.values())?;
    Ok(StandardizedSeries {
        series: s.map_values(s.label.clone(), values),
        mean,
        scale,
    })
}

/// Subtracts the accrued funding rate from each return.
///
/// The funding rate in force at each asset date is the last known value,
/// accrued over one step of the asset's period.
pub fn excess_returns(asset: &ReturnSeries, funding: &RateSeries) -> Result<ReturnSeries> {
    let dt = asset.period.year_fraction();
    let values = asset
        .dates
        .iter()
        .zip(&asset.values)
        .map(|(d, r)| {
            funding
                .rate_on(*d)
                .map(|rate| r - rate * dt)
                .ok_or(Error::NoRateCoverage(asset.dates[0]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(asset.map_values(format!("{}-excess", asset.label), values))
}

pub(crate) fn month_end(year: i32, month: u32) -> NaiveDate {
    let (ny, nm) = if month == 12 { (year + 1, 1) } else { (year, month + 1) };
    NaiveDate::from_ymd_opt(ny, nm, 1)
        .and_then(|d| d.pred_opt())
        .expect("valid month")
}

/// Sums daily returns within each calendar month, dated at the month's last
/// calendar day. Months without data produce no point.
pub fn aggregate_monthly(daily: &ReturnSeries) -> Result<ReturnSeries> {
    if daily.period != Period::Daily {
        return Err(Error::WrongPeriod { expected: "daily", got: daily.period.name() });
    }
    let mut dates = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut current: Option<(i32, u32)> = None;
    for (d, r) in daily.dates.iter().zip(&daily.values) {
        let key = (d.year(), d.month());
        if current == Some(key) {
            *values.last_mut().expect("open month") += r;
        } else {
            current = Some(key);
            dates.push(month_end(key.0, key.1));
            values.push(*r);
        }
    }
    ReturnSeries::new(format!("{}-monthly", daily.label), Period::Monthly, dates, values)
}

pub const DEFAULT_RISK_SPAN: usize = 20;
const FLOOR_QUANTILE: f64 = 0.10;

/// Rescales a daily series to approximately unit volatility.
///
/// The volatility proxy is an exponential moving average of |r| (decay
/// 2/(span+1), seeded with the simple average of the first `span` points)
/// times sqrt(pi/2), so that it is unbiased for Gaussian returns. Each return
/// is divided by the estimate available at the previous close, floored at the
/// running 10th percentile of all estimates seen so far. The first `span`
/// points are consumed as warm-up.
pub fn risk_manage(s: &ReturnSeries, span: usize) -> Result<ReturnSeries> {
    if span == 0 {
        return Err(Error::InvalidSeries("risk-management span must be positive".into()));
    }
    if s.len() <= span {
        return Err(Error::TooShort { needed: span + 1, got: s.len() });
    }
    let alpha = 2.0 / (span as f64 + 1.0);
    let gauss = (PI / 2.0).sqrt();
    let mut ema = s.values[..span].iter().map(|r| r.abs()).sum::<f64>() / span as f64;
    let mut history: Vec<f64> = Vec::with_capacity(s.len() - span);
    let mut out = Vec::with_capacity(s.len() - span);
    for &r in &s.values[span..] {
        let est = gauss * ema;
        let pos = history.partition_point(|v| *v < est);
        history.insert(pos, est);
        let floor = history[((history.len() - 1) as f64 * FLOOR_QUANTILE).floor() as usize];
        let vol = est.max(floor);
        if vol <= 0.0 {
            return Err(Error::ZeroVariance);
        }
        out.push(r / vol);
        ema += alpha * (r.abs() - ema);
    }
    Ok(ReturnSeries {
        label: format!("{}-managed", s.label),
        period: s.period,
        dates: s.dates[span..].to_vec(),
        values: out,
    })
}

/// Replaces each deviation from the mean with a randomly signed copy:
/// r_t -> m + eps_t (r_t - m), eps_t = +/-1 with equal probability.
pub fn symmetrize(s: &ReturnSeries, seed: u64) -> Result<ReturnSeries> {
    if s.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: s.len() });
    }
    let values = symmetrize_values(s.values(), seed);
    Ok(s.map_values(format!("{}-sym", s.label), values))
}

/// Random sign sequence used by [`symmetrize`] for a given seed.
pub fn random_signs(n: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<bool>()).collect()
}

pub fn symmetrize_values(values: &[f64], seed: u64) -> Vec<f64> {
    apply_signs(values, &random_signs(values.len(), seed))
}

/// `m + eps (r - m)` with `true` meaning eps = +1.
pub fn apply_signs(values: &[f64], positive: &[bool]) -> Vec<f64> {
    let m = stats::mean(values);
    values
        .iter()
        .zip(positive)
        .map(|(r, &p)| if p { *r } else { m - (r - m) })
        .collect()
}

/// Annualized performance of a return series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerfStats {
    pub ann_vol: f64,
    pub ann_return: f64,
    pub sharpe: f64,
    pub t_stat: f64,
    pub n_periods: usize,
}

pub fn perf_stats(s: &ReturnSeries) -> Result<PerfStats> {
    perf_stats_values(s.values(), s.period)
}

pub fn perf_stats_values(values: &[f64], period: Period) -> Result<PerfStats> {
    if values.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: values.len() });
    }
    let a = period.periods_per_year();
    let mean = stats::mean(values);
    let var = stats::pop_variance(values, mean);
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let ann_vol = var.sqrt() * a.sqrt();
    let ann_return = mean * a;
    let sharpe = ann_return / ann_vol;
    let years = values.len() as f64 / a;
    Ok(PerfStats { ann_vol, ann_return, sharpe, t_stat: sharpe * years.sqrt(), n_periods: values.len() })
}

/// Averages the series available on each date over the union of all dates.
pub fn equal_weight_aggregate(series: &[ReturnSeries]) -> Result<ReturnSeries> {
    let first = series.first().ok_or(Error::EmptyInput)?;
    if series.iter().any(|s| s.period != first.period) {
        return Err(Error::MixedPeriods);
    }
    let mut acc: BTreeMap<NaiveDate, (f64, usize)> = BTreeMap::new();
    for s in series {
        for (d, r) in s.dates.iter().zip(&s.values) {
            let e = acc.entry(*d).or_insert((0.0, 0));
            e.0 += r;
            e.1 += 1;
        }
    }
    let (dates, values) = acc.into_iter().map(|(d, (sum, n))| (d, sum / n as f64)).unzip();
    ReturnSeries::new("equal-weight", first.period, dates, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand_distr::{Distribution, Normal};

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn daily(values: &[f64]) -> ReturnSeries {
        ReturnSeries::from_values("t", Period::Daily, values.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_dates_and_values() {
        let e = ReturnSeries::new("x", Period::Daily, vec![d(2000, 1, 2), d(2000, 1, 2)], vec![0.0, 1.0]);
        assert!(matches!(e, Err(Error::InvalidSeries(_))));
        let e = ReturnSeries::new("x", Period::Daily, vec![d(2000, 1, 1), d(2000, 1, 2)], vec![0.0, f64::NAN]);
        assert!(matches!(e, Err(Error::InvalidSeries(_))));
    }

    #[test]
    fn standardize_examples() {
        let s = standardize(&daily(&[-1.0, 1.0])).unwrap();
        assert_eq!(s.series.values(), &[-1.0, 1.0]);
        assert_eq!((s.mean, s.scale), (0.0, 1.0));

        let s = standardize(&daily(&[1.0, 3.0])).unwrap();
        assert_eq!(s.series.values(), &[-1.0, 1.0]);
        assert_eq!((s.mean, s.scale), (2.0, 1.0));

        let s = standardize(&daily(&[-3.0, 1.0, 1.0, 1.0])).unwrap();
        let r3 = 3f64.sqrt();
        let expect = [-r3, 1.0 / r3, 1.0 / r3, 1.0 / r3];
        for (a, b) in s.series.values().iter().zip(expect) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        assert_relative_eq!(s.invert()[0], -3.0, epsilon = 1e-14);
    }

    #[test]
    fn standardize_errors() {
        assert!(matches!(standardize(&daily(&[0.5, 0.5, 0.5])), Err(Error::ZeroVariance)));
        assert!(matches!(standardize(&daily(&[0.5])), Err(Error::TooShort { .. })));
    }

    #[test]
    fn excess_monthly_and_daily() {
        let asset = ReturnSeries::new("a", Period::Monthly, vec![d(2001, 1, 31), d(2001, 2, 28)], vec![0.01, 0.01]).unwrap();
        let rates = RateSeries::new("rf", vec![d(2000, 12, 1)], vec![0.06]).unwrap();
        let ex = excess_returns(&asset, &rates).unwrap();
        assert_relative_eq!(ex.values()[0], 0.005, epsilon = 1e-15);

        let zero = RateSeries::new("rf", vec![d(2000, 1, 1)], vec![0.0]).unwrap();
        assert_eq!(excess_returns(&asset, &zero).unwrap().values(), asset.values());

        let asset = ReturnSeries::new("a", Period::Daily, vec![d(2001, 1, 2), d(2001, 1, 3)], vec![0.001, 0.001]).unwrap();
        let rates = RateSeries::new("rf", vec![d(2001, 1, 2)], vec![0.0252]).unwrap();
        assert_relative_eq!(excess_returns(&asset, &rates).unwrap().values()[1], 0.0009, epsilon = 1e-15);
    }

    #[test]
    fn excess_carries_last_rate_forward_and_needs_coverage() {
        let asset = ReturnSeries::new("a", Period::Monthly, vec![d(2001, 1, 31), d(2001, 3, 31)], vec![0.0, 0.0]).unwrap();
        let rates = RateSeries::new("rf", vec![d(2001, 1, 1), d(2001, 2, 1)], vec![0.12, 0.24]).unwrap();
        let ex = excess_returns(&asset, &rates).unwrap();
        assert_relative_eq!(ex.values()[0], -0.01, epsilon = 1e-15);
        assert_relative_eq!(ex.values()[1], -0.02, epsilon = 1e-15);

        let late = RateSeries::new("rf", vec![d(2001, 2, 1)], vec![0.1]).unwrap();
        assert!(matches!(excess_returns(&asset, &late), Err(Error::NoRateCoverage(_))));
    }

    #[test]
    fn monthly_aggregation() {
        let dates: Vec<_> = (1..=21).map(|i| d(2003, 4, i)).collect();
        let s = ReturnSeries::new("x", Period::Daily, dates, vec![0.001; 21]).unwrap();
        let m = aggregate_monthly(&s).unwrap();
        assert_eq!(m.len(), 1);
        assert_relative_eq!(m.values()[0], 0.021, epsilon = 1e-15);
        assert_eq!(m.dates()[0], d(2003, 4, 30));

        let s = ReturnSeries::new(
            "x",
            Period::Daily,
            vec![d(2003, 1, 5), d(2003, 1, 9), d(2003, 2, 3)],
            vec![0.01, -0.02, 0.03],
        )
        .unwrap();
        let m = aggregate_monthly(&s).unwrap();
        assert_relative_eq!(m.values()[0], -0.01, epsilon = 1e-15);
        assert_relative_eq!(m.values()[1], 0.03, epsilon = 1e-15);

        let s = ReturnSeries::new("x", Period::Daily, vec![d(2003, 1, 5), d(2003, 3, 9)], vec![0.01, 0.02]).unwrap();
        let m = aggregate_monthly(&s).unwrap();
        assert_eq!(m.dates(), &[d(2003, 1, 31), d(2003, 3, 31)]);

        assert!(matches!(aggregate_monthly(&m), Err(Error::WrongPeriod { .. })));
    }

    #[test]
    fn risk_manage_constant_amplitude() {
        let c = 0.013;
        let v: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { c } else { -c }).collect();
        let out = risk_manage(&daily(&v), 20).unwrap();
        assert_eq!(out.len(), 80);
        let target = (2.0 / PI).sqrt();
        for r in out.values() {
            assert_relative_eq!(r.abs(), target, epsilon = 1e-12);
        }
    }

    #[test]
    fn risk_manage_scale_invariance() {
        let normal = Normal::new(0.0, 0.01).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<f64> = (0..500).map(|_| normal.sample(&mut rng)).collect();
        let a = risk_manage(&daily(&v), 20).unwrap();
        let scaled: Vec<f64> = v.iter().map(|x| 5.0 * x).collect();
        let b = risk_manage(&daily(&scaled), 20).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_relative_eq!(*x, *y, max_relative = 1e-13);
        }
    }

    #[test]
    fn risk_manage_gaussian_unit_vol() {
        let normal = Normal::new(0.0, 0.02).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
        let out = risk_manage(&daily(&v), 20).unwrap();
        let m = stats::mean(out.values());
        let vol = stats::pop_variance(out.values(), m).sqrt();
        assert!((vol - 1.0).abs() < 0.05, "vol {vol}");
    }

    #[test]
    fn risk_manage_too_short() {
        assert!(matches!(risk_manage(&daily(&[0.1; 20]), 20), Err(Error::TooShort { .. })));
    }

    #[test]
    fn symmetrize_hand_example() {
        let v = [0.02, -0.01, 0.03];
        let out = apply_signs(&v, &[true, false, true]);
        assert_relative_eq!(out[0], 0.02, epsilon = 1e-15);
        assert_relative_eq!(out[1], 0.11 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(out[2], 0.03, epsilon = 1e-15);
        assert_eq!(apply_signs(&v, &[true; 3]), v.to_vec());
    }

    #[test]
    fn symmetrize_is_seeded() {
        let s = daily(&[0.1, -0.2, 0.3, 0.05, -0.07]);
        assert_eq!(symmetrize(&s, 9).unwrap(), symmetrize(&s, 9).unwrap());
        let mean_in = stats::mean(s.values());
        let out = symmetrize(&s, 9).unwrap();
        for (a, b) in s.values().iter().zip(out.values()) {
            assert_relative_eq!((a - mean_in).abs(), (b - mean_in).abs(), epsilon = 1e-15);
        }
    }

    #[test]
    fn perf_stats_examples() {
        let p = perf_stats(&daily(&[0.01, -0.01, 0.01, -0.01])).unwrap();
        assert_eq!(p.sharpe, 0.0);
        assert_eq!(p.t_stat, 0.0);

        let p = perf_stats(&daily(&[0.0104, -0.0096])).unwrap();
        assert_relative_eq!(p.sharpe, 0.04 * 252f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(p.sharpe, 0.635, epsilon = 1e-3);

        // 48 months at Sharpe 1: monthly mean/vol = 1/sqrt(12)
        let mu = 1.0 / 12f64.sqrt();
        let v: Vec<f64> = (0..48).map(|i| mu + if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = ReturnSeries::from_values("m", Period::Monthly, v).unwrap();
        let p = perf_stats(&s).unwrap();
        assert_relative_eq!(p.sharpe, 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.t_stat, 2.0, epsilon = 1e-12);

        assert!(matches!(perf_stats(&daily(&[0.1, 0.1])), Err(Error::ZeroVariance)));
    }

    #[test]
    fn equal_weight_rules() {
        let a = ReturnSeries::new("a", Period::Daily, vec![d(2000, 1, 1), d(2000, 1, 2), d(2000, 1, 3)], vec![0.01, 0.02, 0.03]).unwrap();
        let b = ReturnSeries::new("b", Period::Daily, vec![d(2000, 1, 2), d(2000, 1, 3)], vec![0.04, 0.05]).unwrap();
        assert_eq!(equal_weight_aggregate(std::slice::from_ref(&a)).unwrap().values(), a.values());
        let ew = equal_weight_aggregate(&[a.clone(), b]).unwrap();
        assert_relative_eq!(ew.values()[0], 0.01);
        assert_relative_eq!(ew.values()[1], 0.03);
        assert_relative_eq!(ew.values()[2], 0.04);

        let x = ReturnSeries::new("x", Period::Daily, vec![d(2000, 1, 1)], vec![0.01]).unwrap();
        let y = ReturnSeries::new("y", Period::Daily, vec![d(2000, 1, 1)], vec![0.03]).unwrap();
        assert_relative_eq!(equal_weight_aggregate(&[x, y]).unwrap().values()[0], 0.02);

        assert!(matches!(equal_weight_aggregate(&[]), Err(Error::EmptyInput)));
    }
}
