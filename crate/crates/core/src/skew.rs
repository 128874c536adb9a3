//! Ranked-amplitude P&L curves and the skewness estimators built on them.
//!
//! Returns are sorted by amplitude, smallest first, and cumulated. For
//! standardized returns the curve is normalized per sample,
//! `F0(k/N) = (1/N) * sum of the k smallest-amplitude returns`, so that it
//! converges to `int_0^x(p) y [P(y) - P(-y)] dy` as N grows. zeta-star is
//! `-100` times the left-Riemann average of F0 over the rank grid.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{symmetrize_values, Period, ReturnSeries};
use crate::stats;

/// Which ranked curve to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveVariant {
    /// Raw returns; the last point equals the chronological total P&L.
    Raw,
    /// Zero-mean, unit-variance returns, normalized per sample (F0).
    Standardized,
    /// Raw returns after random-sign symmetrization with the given seed.
    Symmetrized { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedPnlCurve {
    pub variant: CurveVariant,
    /// Rank fractions k/N, k = 1..=N.
    pub p: Vec<f64>,
    pub f: Vec<f64>,
    /// Set for the standardized variant.
    pub zeta_star: Option<f64>,
}

impl RankedPnlCurve {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Copy of `values` ordered by ascending amplitude; ties keep chronological order.
fn by_amplitude(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    // slice::sort_by is stable
    sorted.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    sorted
}

fn cumulate(sorted: &[f64], scale: f64) -> Vec<f64> {
    let mut acc = 0.0;
    sorted
        .iter()
        .map(|r| {
            acc += r;
            acc * scale
        })
        .collect()
}

fn rank_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / n as f64).collect()
}

/// F0 sampled at p = k/N.
fn standardized_curve(values: &[f64]) -> Result<Vec<f64>> {
    let (z, _, _) = stats::standardize_values(values)?;
    Ok(cumulate(&by_amplitude(&z), 1.0 / z.len() as f64))
}

pub fn ranked_pnl(values: &[f64], variant: CurveVariant) -> Result<RankedPnlCurve> {
    if values.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: values.len() });
    }
    let (f, zeta_star) = match variant {
        CurveVariant::Raw => (cumulate(&by_amplitude(values), 1.0), None),
        CurveVariant::Symmetrized { seed } => {
            let sym = symmetrize_values(values, seed);
            (cumulate(&by_amplitude(&sym), 1.0), None)
        }
        CurveVariant::Standardized => {
            let f = standardized_curve(values)?;
            let zs = -100.0 * f.iter().sum::<f64>() / f.len() as f64;
            (f, Some(zs))
        }
    };
    Ok(RankedPnlCurve { variant, p: rank_grid(values.len()), f, zeta_star })
}

/// The ranked-amplitude skewness zeta-star.
pub fn zeta_star(values: &[f64]) -> Result<f64> {
    let f = standardized_curve(values)?;
    Ok(-100.0 * f.iter().sum::<f64>() / f.len() as f64)
}

/// zeta-star of a weighted sample (integer multiplicities), given the
/// distinct support points sorted ascending by value.
///
/// Points are visited in order of distance from the weighted mean by an
/// outward two-pointer merge, so no per-call sort is needed. A point with
/// weight w occupying ranks a+1..=a+w contributes
/// `z * sum_{j=a+1}^{a+w} (N - j + 1)` to `sum_j (N - j + 1) z_(j)`, and
/// zeta-star is `-100 / N^2` times that sum.
pub fn zeta_star_weighted(sorted: &[f64], weights: &[u32]) -> Result<f64> {
    debug_assert_eq!(sorted.len(), weights.len());
    let n: u64 = weights.iter().map(|&w| w as u64).sum();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n as usize });
    }
    let nf = n as f64;
    let mean = sorted.iter().zip(weights).map(|(x, &w)| x * w as f64).sum::<f64>() / nf;
    let var = sorted
        .iter()
        .zip(weights)
        .map(|(x, &w)| w as f64 * (x - mean).powi(2))
        .sum::<f64>()
        / nf;
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();

    let split = sorted.partition_point(|x| *x < mean);
    let (mut left, mut right) = (split, split);
    let mut placed = 0u64;
    let mut total = 0.0;
    loop {
        while left > 0 && weights[left - 1] == 0 {
            left -= 1;
        }
        while right < sorted.len() && weights[right] == 0 {
            right += 1;
        }
        let take_right = match (left > 0, right < sorted.len()) {
            (false, false) => break,
            (true, false) => false,
            (false, true) => true,
            (true, true) => sorted[right] - mean <= mean - sorted[left - 1],
        };
        let idx = if take_right {
            right += 1;
            right - 1
        } else {
            left -= 1;
            left
        };
        let w = weights[idx] as u64;
        let z = (sorted[idx] - mean) / sd;
        let rank_weight = (w * (n + 1)) as f64 - ((2 * placed + w + 1) * w) as f64 / 2.0;
        total += z * rank_weight;
        placed += w;
    }
    Ok(-100.0 * total / (nf * nf))
}

/// Population skewness and excess kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMoments {
    pub zeta3: f64,
    pub kurtosis: f64,
    /// (mean - median) / sigma.
    pub mean_minus_median: f64,
}

pub fn classical_moments(values: &[f64]) -> Result<ClassicalMoments> {
    if values.len() < 3 {
        return Err(Error::TooShort { needed: 3, got: values.len() });
    }
    let m = stats::mean(values);
    let n = values.len() as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in values {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(ClassicalMoments {
        zeta3: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2) - 3.0,
        mean_minus_median: (m - stats::median(values)) / m2.sqrt(),
    })
}

/// Slope of zeta-star against zeta3 for weakly non-Gaussian densities,
/// 50 / (3 pi), obtained by exact integration of the Gram-Charlier density.
pub const EDGEWORTH_SLOPE: f64 = 50.0 / (3.0 * PI);

/// Kurtosis coefficient of the same relation: zeta* = C zeta3 (1 - kappa / 8).
pub const EDGEWORTH_KURTOSIS_COEF: f64 = 1.0 / 8.0;

/// zeta-star predicted from the third and fourth cumulants.
///
/// Exact for the truncated expansion `phi(r) [1 + zeta3 He3(r)/6 + kappa He4(r)/24]`,
/// and a leading-order approximation otherwise (small |zeta3|).
pub fn edgeworth_zeta_star(zeta3: f64, kurtosis: f64) -> f64 {
    EDGEWORTH_SLOPE * zeta3 * (1.0 - EDGEWORTH_KURTOSIS_COEF * kurtosis)
}

pub const MIN_COSKEW_OVERLAP: usize = 12;

/// Co-skewness `E[(r - mu)(b - mu_b)^2] / (sigma sigma_b^2)` over common dates.
pub fn co_skewness(s: &ReturnSeries, benchmark: &ReturnSeries) -> Result<f64> {
    let (r, b) = align(s, benchmark);
    if r.len() < MIN_COSKEW_OVERLAP {
        return Err(Error::InsufficientOverlap { needed: MIN_COSKEW_OVERLAP, got: r.len() });
    }
    co_skewness_values(&r, &b)
}

pub fn co_skewness_values(r: &[f64], b: &[f64]) -> Result<f64> {
    let (mr, mb) = (stats::mean(r), stats::mean(b));
    let (vr, vb) = (stats::pop_variance(r, mr), stats::pop_variance(b, mb));
    if vr <= 0.0 || vb <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let n = r.len() as f64;
    let e = r.iter().zip(b).map(|(x, y)| (x - mr) * (y - mb).powi(2)).sum::<f64>() / n;
    Ok(e / (vr.sqrt() * vb))
}

/// Values of the two series on their common dates.
pub(crate) fn align(a: &ReturnSeries, b: &ReturnSeries) -> (Vec<f64>, Vec<f64>) {
    let (mut i, mut j) = (0, 0);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    let (da, db) = (a.dates(), b.dates());
    while i < da.len() && j < db.len() {
        match da[i].cmp(&db[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                x.push(a.values()[i]);
                y.push(b.values()[j]);
                i += 1;
                j += 1;
            }
        }
    }
    (x, y)
}

pub const MIN_CROSSING_LEN: usize = 100;

/// Number of zero crossings of G(y) = ECDF(z) - ECDF(z symmetrized), where
/// z are the standardized returns.
///
/// G is evaluated on the pooled sorted support. Values with |G| below the
/// noise band 2/sqrt(N) are treated as zero; the count is the number of sign
/// changes among the remaining values.
pub fn crossing_count(values: &[f64], seed: u64) -> Result<usize> {
    if values.len() < MIN_CROSSING_LEN {
        return Err(Error::TooShort { needed: MIN_CROSSING_LEN, got: values.len() });
    }
    let (mut z, _, _) = stats::standardize_values(values)?;
    let mut sym = symmetrize_values(&z, seed);
    z.sort_unstable_by(f64::total_cmp);
    sym.sort_unstable_by(f64::total_cmp);

    let n = z.len();
    let band = 2.0 / (n as f64).sqrt();
    let (mut i, mut j) = (0usize, 0usize);
    let mut last_sign = 0i8;
    let mut crossings = 0;
    while i < n || j < n {
        let y = match (z.get(i), sym.get(j)) {
            (Some(a), Some(b)) => a.min(*b),
            (Some(a), None) => *a,
            (None, Some(b)) => *b,
            (None, None) => unreachable!(),
        };
        while i < n && z[i] <= y {
            i += 1;
        }
        while j < n && sym[j] <= y {
            j += 1;
        }
        let g = (i as f64 - j as f64) / n as f64;
        if g.abs() < band {
            continue;
        }
        let sign = if g > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            crossings += 1;
        }
        last_sign = sign;
    }
    Ok(crossings)
}

/// Two crossings exactly is the condition for unambiguous skew ordering
/// against the symmetrized distribution.
pub fn is_skewness_comparable(crossings: usize) -> bool {
    crossings == 2
}

pub const MIN_EXPONENT_POINTS: usize = 20;

/// Least-squares slope of log|F0(p)| against log p on `[p_min, p_max]`.
pub fn small_p_exponent(curve: &RankedPnlCurve, p_min: f64, p_max: f64) -> Result<f64> {
    if curve.variant != CurveVariant::Standardized {
        return Err(Error::InvalidSeries("small-p exponent needs the standardized curve".into()));
    }
    let window: Vec<(f64, f64)> = curve
        .p
        .iter()
        .zip(&curve.f)
        .filter(|(p, _)| **p >= p_min && **p <= p_max)
        .map(|(p, f)| (*p, *f))
        .collect();
    if window.len() < MIN_EXPONENT_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_EXPONENT_POINTS, got: window.len() });
    }
    let positive = window[0].1 > 0.0;
    if window.iter().any(|(_, f)| *f == 0.0 || (*f > 0.0) != positive) {
        return Err(Error::SignChangeInWindow);
    }
    let xs: Vec<f64> = window.iter().map(|(p, _)| p.ln()).collect();
    let ys: Vec<f64> = window.iter().map(|(_, f)| f.abs().ln()).collect();
    Ok(ols_slope(&xs, &ys))
}

pub(crate) fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (stats::mean(x), stats::mean(y));
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// All skewness diagnostics for one series, with bootstrap errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewReport {
    pub label: String,
    pub n: usize,
    pub zeta_star: f64,
    pub zeta3: f64,
    pub kurtosis: f64,
    pub mean_minus_median: f64,
    pub sharpe: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coskew: Option<f64>,
    pub err_zeta_star: f64,
    pub err_sharpe: f64,
    pub bootstrap: usize,
    pub seed: u64,
}

pub const MIN_REPORT_LEN: usize = 30;
pub const DEFAULT_BOOTSTRAP: usize = 1000;

/// Bootstrap standard errors of (zeta-star, Sharpe).
///
/// Replicate `b` resamples N points with replacement using a generator
/// seeded with `seed + b`. Replicates run in parallel; the result does not
/// depend on scheduling.
pub fn bootstrap_errors(values: &[f64], period: Period, replicates: usize, seed: u64) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    if replicates == 0 {
        return Ok((0.0, 0.0));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let ann = period.periods_per_year().sqrt();

    let stats_per_rep: Vec<(f64, f64)> = (0..replicates)
        .into_par_iter()
        .map_init(
            || vec![0u32; n],
            |weights, b| {
                weights.iter_mut().for_each(|w| *w = 0);
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(b as u64));
                // a uniform draw of a chronological index is a uniform draw
                // of a sorted position
                for _ in 0..n {
                    weights[rng.random_range(0..n)] += 1;
                }
                let zs = zeta_star_weighted(&sorted, weights).unwrap_or(f64::NAN);
                (zs, weighted_sharpe(&sorted, weights, n) * ann)
            },
        )
        .collect();
    let (zs, sr): (Vec<f64>, Vec<f64>) = stats_per_rep.into_iter().filter(|(z, s)| z.is_finite() && s.is_finite()).unzip();
    Ok((stats::std_dev(&zs), stats::std_dev(&sr)))
}

fn weighted_sharpe(sorted: &[f64], weights: &[u32], n: usize) -> f64 {
    let nf = n as f64;
    let mean = sorted.iter().zip(weights).map(|(x, &w)| x * w as f64).sum::<f64>() / nf;
    let var = sorted.iter().zip(weights).map(|(x, &w)| w as f64 * (x - mean).powi(2)).sum::<f64>() / nf;
    mean / var.sqrt()
}

pub fn skew_report(
    s: &ReturnSeries,
    benchmark: Option<&ReturnSeries>,
    bootstrap: usize,
    seed: u64,
) -> Result<SkewReport> {
    let values = s.values();
    if values.len() < MIN_REPORT_LEN {
        return Err(Error::TooShort { needed: MIN_REPORT_LEN, got: values.len() });
    }
    let moments = classical_moments(values)?;
    let zs = zeta_star(values)?;
    let perf = crate::series::perf_stats(s)?;
    let coskew = benchmark.map(|b| co_skewness(s, b)).transpose()?;
    let (err_zeta_star, err_sharpe) = bootstrap_errors(values, s.period(), bootstrap, seed)?;
    Ok(SkewReport {
        label: s.label().to_string(),
        n: values.len(),
        zeta_star: zs,
        zeta3: moments.zeta3,
        kurtosis: moments.kurtosis,
        mean_minus_median: moments.mean_minus_median,
        sharpe: perf.sharpe,
        coskew,
        err_zeta_star,
        err_sharpe,
        bootstrap,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn raw_curve_definition() {
        let c = ranked_pnl(&[1.0, -2.0, 3.0], CurveVariant::Raw).unwrap();
        assert_eq!(c.p, vec![1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert_eq!(c.f, vec![1.0, -1.0, 2.0]);
        assert!(c.zeta_star.is_none());
    }

    #[test]
    fn ties_keep_chronological_order() {
        let c = ranked_pnl(&[2.0, -2.0, 1.0], CurveVariant::Raw).unwrap();
        assert_eq!(c.f, vec![1.0, 3.0, 1.0]);
        let c = ranked_pnl(&[-2.0, 2.0, 1.0], CurveVariant::Raw).unwrap();
        assert_eq!(c.f, vec![1.0, -1.0, 1.0]);
    }

    #[test]
    fn zeta_star_hand_enumeration() {
        // standardized {-sqrt3, 1/sqrt3 x3}; F0 = (1/4)(1/sqrt3, 2/sqrt3, sqrt3, 0)
        let r3 = 3f64.sqrt();
        let expect = -100.0 * (1.0 / r3 + 2.0 / r3 + r3) / 16.0;
        assert_relative_eq!(expect, -50.0 * r3 / 4.0, epsilon = 1e-12);
        assert_relative_eq!(zeta_star(&[-3.0, 1.0, 1.0, 1.0]).unwrap(), expect, epsilon = 1e-12);
        let c = ranked_pnl(&[-3.0, 1.0, 1.0, 1.0], CurveVariant::Standardized).unwrap();
        assert!(c.f[3].abs() < 1e-15);
        assert_relative_eq!(c.zeta_star.unwrap(), expect, epsilon = 1e-12);
    }

    #[test]
    fn zeta_star_antisymmetric_and_affine_invariant() {
        let v: Vec<f64> = gaussian(500, 2).iter().map(|x| x + 0.3 * x * x).collect();
        let z = zeta_star(&v).unwrap();
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert_relative_eq!(zeta_star(&neg).unwrap(), -z, epsilon = 1e-10);
        let aff: Vec<f64> = v.iter().map(|x| 3.5 * x - 0.2).collect();
        assert_relative_eq!(zeta_star(&aff).unwrap(), z, epsilon = 1e-10);
        assert!(z != 0.0);
    }

    #[test]
    fn zeta_star_zero_variance() {
        assert!(matches!(zeta_star(&[1.0, 1.0, 1.0]), Err(Error::ZeroVariance)));
    }

    #[test]
    fn weighted_path_matches_direct() {
        let v: Vec<f64> = gaussian(2_000, 5).iter().map(|x| x - 0.2 * x * x.abs()).collect();
        let mut sorted = v.clone();
        sorted.sort_by(f64::total_cmp);
        let ones = vec![1u32; v.len()];
        assert_relative_eq!(zeta_star_weighted(&sorted, &ones).unwrap(), zeta_star(&v).unwrap(), epsilon = 1e-10);

        // multiplicities equal to an explicit expansion
        let w: Vec<u32> = (0..v.len()).map(|i| (i % 3) as u32).collect();
        let expanded: Vec<f64> = sorted.iter().zip(&w).flat_map(|(x, &k)| std::iter::repeat_n(*x, k as usize)).collect();
        assert_relative_eq!(zeta_star_weighted(&sorted, &w).unwrap(), zeta_star(&expanded).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn classical_moment_examples() {
        let m = classical_moments(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(m.zeta3, 0.0);
        let m = classical_moments(&[-3.0, 1.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(m.zeta3, -6.0 / 3f64.powf(1.5), epsilon = 1e-12);
        assert_relative_eq!(m.zeta3, -1.155, epsilon = 1e-3);
        // m4 = (81 + 3) / 4 = 21, m2 = 3
        assert_relative_eq!(m.kurtosis, 21.0 / 9.0 - 3.0, epsilon = 1e-12);
        assert_relative_eq!(m.mean_minus_median, -1.0 / 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn gaussian_kurtosis_null() {
        let m = classical_moments(&gaussian(1_000_000, 8)).unwrap();
        assert!(m.kurtosis.abs() < 0.03, "{}", m.kurtosis);
    }

    #[test]
    fn edgeworth_relation_examples() {
        assert_eq!(edgeworth_zeta_star(0.0, 1.0), 0.0);
        assert_relative_eq!(edgeworth_zeta_star(0.1, 0.0), EDGEWORTH_SLOPE * 0.1);
        assert_eq!(edgeworth_zeta_star(0.1, 8.0), 0.0);
    }

    #[test]
    fn coskew_constructions() {
        let b = gaussian(200_000, 21);
        let same = co_skewness_values(&b, &b).unwrap();
        let z3 = classical_moments(&b).unwrap().zeta3;
        assert_relative_eq!(same, z3, epsilon = 1e-12);

        let indep = gaussian(1_000_000, 22);
        let b2 = gaussian(1_000_000, 23);
        let c = co_skewness_values(&indep, &b2).unwrap();
        assert!(c.abs() < 3.0 * (2.0f64).sqrt() / 1000.0, "{c}");

        let r: Vec<f64> = b.iter().map(|x| -x * x).collect();
        assert!(co_skewness_values(&r, &b).unwrap() < -1.0);
    }

    #[test]
    fn coskew_needs_overlap() {
        let a = ReturnSeries::from_values("a", Period::Daily, gaussian(10, 1)).unwrap();
        let b = ReturnSeries::from_values("b", Period::Daily, gaussian(40, 2)).unwrap();
        assert!(matches!(co_skewness(&a, &b), Err(Error::InsufficientOverlap { got: 10, .. })));
    }

    #[test]
    fn symmetric_sample_has_no_crossings() {
        let g = gaussian(100_000, 4);
        let sym: Vec<f64> = g.iter().flat_map(|x| [*x, -*x]).collect();
        assert_eq!(crossing_count(&sym, 1).unwrap(), 0);
        assert!(matches!(crossing_count(&g[..50], 1), Err(Error::TooShort { .. })));
    }

    #[test]
    fn exponent_on_exact_power_laws() {
        let n = 1000;
        let p = rank_grid(n);
        for (power, c) in [(3.0, -0.7), (1.0, 0.2)] {
            let curve = RankedPnlCurve {
                variant: CurveVariant::Standardized,
                p: p.clone(),
                f: p.iter().map(|x| c * x.powf(power)).collect(),
                zeta_star: None,
            };
            assert_relative_eq!(small_p_exponent(&curve, 0.01, 0.2).unwrap(), power, epsilon = 1e-10);
        }
    }

    #[test]
    fn exponent_errors() {
        let p = rank_grid(1000);
        let f: Vec<f64> = p.iter().map(|x| x - 0.1).collect();
        let curve = RankedPnlCurve { variant: CurveVariant::Standardized, p: p.clone(), f, zeta_star: None };
        assert!(matches!(small_p_exponent(&curve, 0.01, 0.2), Err(Error::SignChangeInWindow)));
        let short = RankedPnlCurve { variant: CurveVariant::Standardized, p: rank_grid(50), f: vec![1.0; 50], zeta_star: None };
        assert!(matches!(small_p_exponent(&short, 0.01, 0.2), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn bootstrap_is_deterministic_and_scales() {
        let v = gaussian(10_000, 31);
        let a = bootstrap_errors(&v, Period::Daily, 300, 7).unwrap();
        let b = bootstrap_errors(&v, Period::Daily, 300, 7).unwrap();
        assert_eq!(a, b);
        let v4 = gaussian(40_000, 32);
        let c = bootstrap_errors(&v4, Period::Daily, 300, 7).unwrap();
        let ratio = a.0 / c.0;
        assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn report_requires_thirty_points() {
        let s = ReturnSeries::from_values("x", Period::Daily, gaussian(29, 1)).unwrap();
        assert!(matches!(skew_report(&s, None, 10, 1), Err(Error::TooShort { .. })));
    }
}
