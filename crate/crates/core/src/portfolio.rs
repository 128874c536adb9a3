//! Signal-ranked bucket portfolios, dollar-neutral long-short legs and
//! FX-carry pair panels.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Datelike, NaiveDate};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{perf_stats, risk_manage, Period, ReturnSeries, DEFAULT_RISK_SPAN};
use crate::skew::zeta_star;
use crate::stats;

/// Sparse (date x asset) table of values.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    period: Period,
    assets: Vec<String>,
    dates: Vec<NaiveDate>,
    /// `cells[t][a]`
    cells: Vec<Vec<Option<f64>>>,
}

impl Panel {
    /// Builds a panel from long-format rows. Assets are ordered lexically.
    pub fn from_long<I, S>(period: Period, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NaiveDate, S, f64)>,
        S: Into<String>,
    {
        let mut map: BTreeMap<(NaiveDate, String), f64> = BTreeMap::new();
        for (d, a, v) in rows {
            let a = a.into();
            if !v.is_finite() {
                return Err(Error::InvalidSeries(format!("non-finite value for {a} on {d}")));
            }
            if map.insert((d, a.clone()), v).is_some() {
                return Err(Error::InvalidSeries(format!("duplicate cell for {a} on {d}")));
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyInput);
        }
        let assets: Vec<String> = map.keys().map(|(_, a)| a.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let dates: Vec<NaiveDate> = map.keys().map(|(d, _)| *d).collect::<BTreeSet<_>>().into_iter().collect();
        let mut cells = vec![vec![None; assets.len()]; dates.len()];
        for ((d, a), v) in map {
            let t = dates.binary_search(&d).expect("known date");
            let i = assets.binary_search(&a).expect("known asset");
            cells[t][i] = Some(v);
        }
        Ok(Self { period, assets, dates, cells })
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn assets(&self) -> &[String] {
        &self.assets
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn get(&self, t: usize, asset: usize) -> Option<f64> {
        self.cells[t][asset]
    }

    pub fn asset_index(&self, name: &str) -> Option<usize> {
        self.assets.binary_search_by(|a| a.as_str().cmp(name)).ok()
    }

    /// One asset's populated cells as a series.
    pub fn column(&self, asset: usize) -> Result<ReturnSeries> {
        let (dates, values) = self
            .dates
            .iter()
            .zip(&self.cells)
            .filter_map(|(d, row)| row[asset].map(|v| (*d, v)))
            .unzip();
        ReturnSeries::new(self.assets[asset].clone(), self.period, dates, values)
    }

    /// Long-format rows in (date, asset) order.
    pub fn to_long(&self) -> Vec<(NaiveDate, &str, f64)> {
        let mut out = Vec::new();
        for (d, row) in self.dates.iter().zip(&self.cells) {
            for (a, v) in self.assets.iter().zip(row) {
                if let Some(v) = v {
                    out.push((*d, a.as_str(), *v));
                }
            }
        }
        out
    }

    /// Last value of `asset` dated strictly before `date`.
    fn last_before(&self, asset: usize, date: NaiveDate) -> Option<f64> {
        let end = self.dates.partition_point(|d| *d < date);
        (0..end).rev().find_map(|t| self.cells[t][asset])
    }

    /// Last value of `asset` dated on or before `date`.
    fn last_on_or_before(&self, asset: usize, date: NaiveDate) -> Option<f64> {
        let end = self.dates.partition_point(|d| *d <= date);
        (0..end).rev().find_map(|t| self.cells[t][asset])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rebalance {
    Daily,
    Monthly,
}

pub const DEFAULT_BUCKETS: usize = 10;

/// Bucket memberships fixed at one rebalance date. `members[k]` holds the
/// asset indices of bucket k + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub date: NaiveDate,
    pub members: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct BucketRun {
    /// Bucket 1 (lowest signal) first.
    pub series: Vec<ReturnSeries>,
    pub rebalances: Vec<Membership>,
}

fn is_rebalance(rule: Rebalance, prev: Option<NaiveDate>, date: NaiveDate) -> bool {
    match (rule, prev) {
        (_, None) | (Rebalance::Daily, _) => true,
        (Rebalance::Monthly, Some(p)) => (p.year(), p.month()) != (date.year(), date.month()),
    }
}

/// Splits the ranked universe into `n_buckets` groups. With N assets ranked
/// 1..=N, bucket k holds ranks `(ceil((k-1)N/B), ceil(kN/B)]`.
fn partition(ranked: &[usize], n_buckets: usize) -> Vec<Vec<usize>> {
    let n = ranked.len();
    (1..=n_buckets)
        .map(|k| {
            let lo = ((k - 1) * n).div_ceil(n_buckets);
            let hi = (k * n).div_ceil(n_buckets);
            ranked[lo..hi].to_vec()
        })
        .collect()
}

/// Equal-weight bucket portfolios ranked by a lagged signal.
///
/// At each rebalance date the assets are ranked by their latest signal
/// dated strictly before that date (ties broken by asset name); memberships
/// hold until the next rebalance. A bucket's return on a date is the mean of
/// its members' returns on that date. Dates before the first usable signal
/// are skipped.
pub fn rank_buckets(returns: &Panel, signal: &Panel, n_buckets: usize, rebalance: Rebalance) -> Result<BucketRun> {
    if n_buckets == 0 {
        return Err(Error::InvalidSeries("bucket count must be positive".into()));
    }
    // map return assets onto signal columns
    let sig_col: Vec<Option<usize>> = returns.assets.iter().map(|a| signal.asset_index(a)).collect();

    let mut points: Vec<(Vec<NaiveDate>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); n_buckets];
    let mut rebalances: Vec<Membership> = Vec::new();
    let mut prev_date = None;
    for (t, &date) in returns.dates.iter().enumerate() {
        if is_rebalance(rebalance, prev_date, date) || rebalances.is_empty() {
            let mut scored: Vec<(f64, usize)> = sig_col
                .iter()
                .enumerate()
                .filter_map(|(a, c)| c.and_then(|c| signal.last_before(c, date)).map(|s| (s, a)))
                .collect();
            if !scored.is_empty() {
                if scored.len() < n_buckets {
                    return Err(Error::TooFewAssets { date, needed: n_buckets, got: scored.len() });
                }
                // asset indices follow lexical order, so index order breaks ties
                scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
                let ranked: Vec<usize> = scored.into_iter().map(|(_, a)| a).collect();
                rebalances.push(Membership { date, members: partition(&ranked, n_buckets) });
            }
        }
        prev_date = Some(date);
        let Some(current) = rebalances.last() else { continue };
        for (k, members) in current.members.iter().enumerate() {
            let vals: Vec<f64> = members.iter().filter_map(|&a| returns.cells[t][a]).collect();
            if !vals.is_empty() {
                points[k].0.push(date);
                points[k].1.push(vals.iter().sum::<f64>() / vals.len() as f64);
            }
        }
    }
    if rebalances.is_empty() {
        return Err(Error::InvalidSeries("signal never precedes any return date".into()));
    }
    let series = points
        .into_iter()
        .enumerate()
        .map(|(k, (d, v))| ReturnSeries::new(format!("bucket-{:02}", k + 1), returns.period, d, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(BucketRun { series, rebalances })
}

pub const MIN_LONG_SHORT_OVERLAP: usize = DEFAULT_RISK_SPAN + 1;

/// `r_long - r_short` on common dates, before risk management.
pub fn long_short_raw(long: &ReturnSeries, short: &ReturnSeries) -> Result<ReturnSeries> {
    if long.period() != short.period() {
        return Err(Error::MixedPeriods);
    }
    let mut dates = Vec::new();
    let mut values = Vec::new();
    let (dl, ds) = (long.dates(), short.dates());
    let (mut i, mut j) = (0, 0);
    while i < dl.len() && j < ds.len() {
        match dl[i].cmp(&ds[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dates.push(dl[i]);
                values.push(long.values()[i] - short.values()[j]);
                i += 1;
                j += 1;
            }
        }
    }
    if dates.len() < MIN_LONG_SHORT_OVERLAP {
        return Err(Error::InsufficientOverlap { needed: MIN_LONG_SHORT_OVERLAP, got: dates.len() });
    }
    ReturnSeries::new(format!("{}-minus-{}", long.label(), short.label()), long.period(), dates, values)
}

/// Dollar-neutral long-short portfolio, risk managed.
pub fn long_short(long: &ReturnSeries, short: &ReturnSeries) -> Result<ReturnSeries> {
    risk_manage(&long_short_raw(long, short)?, DEFAULT_RISK_SPAN)
}

/// Pair returns and rate-differential signals for every ordered currency pair.
#[derive(Debug, Clone)]
pub struct CarryPanels {
    pub returns: Panel,
    pub signal: Panel,
}

/// Builds carry-trade pair panels.
///
/// `spot` holds each currency's price in a common base currency; `rates`
/// holds annualized short rates. For each ordered pair "high/low" and each
/// spot date t, the return cell is present only when the differential
/// `i_high - i_low` known at the previous spot date is positive:
///
/// `r_t = dlog(S_high / S_low)_t + (i_high - i_low)_(t-1) / 252`.
///
/// The signal panel holds the differential dated at its observation date;
/// [`rank_buckets`] applies the one-day lag.
pub fn carry_pairs(spot: &Panel, rates: &Panel) -> Result<CarryPanels> {
    let ccys = spot.assets();
    if ccys.len() < 2 {
        return Err(Error::TooFewAssets { date: spot.dates[0], needed: 2, got: ccys.len() });
    }
    let rate_col: Vec<usize> = ccys
        .iter()
        .map(|c| rates.asset_index(c).ok_or_else(|| Error::MissingRate(c.clone())))
        .collect::<Result<_>>()?;
    let dt = Period::Daily.year_fraction();

    let mut ret_rows = Vec::new();
    let mut sig_rows = Vec::new();
    for t in 0..spot.dates.len() {
        let date = spot.dates[t];
        let rate_now: Vec<Option<f64>> = rate_col.iter().map(|&c| rates.last_on_or_before(c, date)).collect();
        for h in 0..ccys.len() {
            for l in 0..ccys.len() {
                if h == l {
                    continue;
                }
                let name = format!("{}/{}", ccys[h], ccys[l]);
                if let (Some(ih), Some(il)) = (rate_now[h], rate_now[l]) {
                    sig_rows.push((date, name.clone(), ih - il));
                }
                if t == 0 {
                    continue;
                }
                let prev = spot.dates[t - 1];
                let (Some(ih), Some(il)) =
                    (rates.last_on_or_before(rate_col[h], prev), rates.last_on_or_before(rate_col[l], prev))
                else {
                    continue;
                };
                if ih - il <= 0.0 {
                    continue;
                }
                let cells = (spot.cells[t][h], spot.cells[t - 1][h], spot.cells[t][l], spot.cells[t - 1][l]);
                if let (Some(sh), Some(sh0), Some(sl), Some(sl0)) = cells {
                    let dlog = (sh / sh0).ln() - (sl / sl0).ln();
                    ret_rows.push((date, name, dlog + (ih - il) * dt));
                }
            }
        }
    }
    if ret_rows.is_empty() {
        return Err(Error::InvalidSeries("no pair has a positive rate differential".into()));
    }
    Ok(CarryPanels {
        returns: Panel::from_long(Period::Daily, ret_rows)?,
        signal: Panel::from_long(Period::Daily, sig_rows)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecileRow {
    pub bucket: usize,
    /// Per-period volatility in percent.
    pub vol_pct: f64,
    pub zeta_star: f64,
    pub sharpe: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecileTable {
    pub rows: Vec<DecileRow>,
}

pub fn decile_table(buckets: &[ReturnSeries]) -> Result<DecileTable> {
    if buckets.is_empty() {
        return Err(Error::EmptyInput);
    }
    let rows = buckets
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let perf = perf_stats(s)?;
            let m = stats::mean(s.values());
            Ok(DecileRow {
                bucket: k + 1,
                vol_pct: 100.0 * stats::pop_variance(s.values(), m).sqrt(),
                zeta_star: zeta_star(s.values())?,
                sharpe: perf.sharpe,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecileTable { rows })
}
