//! Synthetic return distributions with quadrature-exact functionals.
//!
//! Every density here has a deterministic inverse-CDF sampler and exact
//! (quadrature) values of its moments and of zeta-star. Together they let us
//! check the sample estimators without market data.

mod ast;
mod edgeworth;
mod sampler;
mod sweep;

pub use ast::AsymmetricStudentT;
pub use edgeworth::{edgeworth_expansion_zeta_star, EdgeworthDensity};
pub use sampler::{GridSampler, GRID_POINTS};
pub use sweep::{fig10_sweep, SweepRow};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::quad::{integrate, integrate_from_neg_inf, integrate_to_inf, QuadConfig};
use crate::series::{Period, ReturnSeries};

/// A normalized one-dimensional density.
pub trait Density: Sync {
    fn pdf(&self, x: f64) -> f64;

    /// Finite support, or `None` for the whole real line.
    fn support(&self) -> Option<(f64, f64)>;

    /// Characteristic width, used to place quadrature and sampling grids.
    fn scale(&self) -> f64 {
        1.0
    }
}

pub(crate) fn quad_cfg() -> QuadConfig {
    QuadConfig { rel_tol: 1e-11, abs_tol: 1e-16, max_intervals: 4000 }
}

/// `int_x^inf f(y) P(y) dy`.
pub(crate) fn upper<D: Density + ?Sized, F: Fn(f64) -> f64>(d: &D, f: F, x: f64) -> Result<f64> {
    let g = |y: f64| f(y) * d.pdf(y);
    match d.support() {
        Some((lo, hi)) => integrate(g, x.max(lo), hi.max(x.max(lo)), quad_cfg()),
        None => integrate_to_inf(g, x, quad_cfg()),
    }
}

/// `int_-inf^x f(y) P(y) dy`.
pub(crate) fn lower<D: Density + ?Sized, F: Fn(f64) -> f64>(d: &D, f: F, x: f64) -> Result<f64> {
    let g = |y: f64| f(y) * d.pdf(y);
    match d.support() {
        Some((lo, hi)) => integrate(g, lo, x.min(hi).max(lo), quad_cfg()),
        None => integrate_from_neg_inf(g, x, quad_cfg()),
    }
}

/// `int f(y) P(y) dy` over the support.
pub(crate) fn expect<D: Density + ?Sized, F: Fn(f64) -> f64>(d: &D, f: F) -> Result<f64> {
    Ok(lower(d, &f, 0.0)? + upper(d, &f, 0.0)?)
}

pub fn cdf<D: Density + ?Sized>(d: &D, x: f64) -> Result<f64> {
    if x <= 0.0 {
        lower(d, |_| 1.0, x)
    } else {
        Ok(1.0 - upper(d, |_| 1.0, x)?)
    }
}

/// Mean, variance, skewness and excess kurtosis by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub zeta3: f64,
    pub kurtosis: f64,
}

/// Central moments by quadrature. Caller guarantees the fourth moment exists.
pub fn moments<D: Density + ?Sized>(d: &D) -> Result<Moments> {
    let mean = expect(d, |y| y)?;
    let m2 = expect(d, |y| (y - mean).powi(2))?;
    let m3 = expect(d, |y| (y - mean).powi(3))?;
    let m4 = expect(d, |y| (y - mean).powi(4))?;
    Ok(Moments { mean, variance: m2, zeta3: m3 / m2.powf(1.5), kurtosis: m4 / (m2 * m2) - 3.0 })
}

/// Exact zeta-star of the density after the affine map r -> (r - loc) / scale.
///
/// With P~ the mapped density, P~_s(x) = P~(x) + P~(-x), P~_a(y) = P~(y) - P~(-y):
///
/// `zeta* = -100 int_0^inf dx P~_s(x) int_0^x dy y P~_a(y)
///        = -100 int_0^inf dy y P~_a(y) Prob(|r~| > y)`,
///
/// evaluated as an outer quadrature whose integrand needs two inner tail
/// quadratures.
pub fn zeta_star_affine<D: Density + ?Sized>(d: &D, loc: f64, scale: f64) -> Result<f64> {
    let inner_err = std::sync::Mutex::new(None);
    let integrand = |y: f64| {
        let (hi, lo) = (loc + scale * y, loc - scale * y);
        let pa = scale * (d.pdf(hi) - d.pdf(lo));
        if pa == 0.0 {
            return 0.0;
        }
        let tail = upper(d, |_| 1.0, hi).and_then(|u| lower(d, |_| 1.0, lo).map(|l| u + l));
        match tail {
            Ok(t) => y * pa * t,
            Err(e) => {
                inner_err.lock().expect("poisoned").get_or_insert(e);
                0.0
            }
        }
    };
    let outer = match d.support() {
        Some((lo, hi)) => {
            let reach = ((hi - loc) / scale).max((loc - lo) / scale);
            integrate(integrand, 0.0, reach, quad_cfg())?
        }
        None => integrate_to_inf(integrand, 0.0, quad_cfg())?,
    };
    if let Some(e) = inner_err.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(-100.0 * outer)
}

/// Standard normal sample as a daily series.
pub fn gaussian_sample(n: usize, seed: u64) -> Result<ReturnSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    ReturnSeries::from_values("gauss", Period::Daily, values)
}

/// Kolmogorov distance between the empirical CDF of `sample` and `cdf`.
pub fn kolmogorov_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |acc: f64, (i, &x)| {
        let c = cdf(x);
        acc.max((c - i as f64 / n).abs()).max(((i + 1) as f64 / n - c).abs())
    })
}

/// Kolmogorov distance between the empirical CDF of `sample` and the
/// quadrature CDF of `d`, accumulated gap by gap along the sorted sample.
pub fn kolmogorov_distance_exact<D: Density + ?Sized>(d: &D, sample: &[f64]) -> Result<f64> {
    let mut xs = sample.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    let cfg = QuadConfig { rel_tol: 1e-10, abs_tol: 1e-14, max_intervals: 200 };
    let mut c = cdf(d, xs[0])?;
    let mut worst: f64 = 0.0;
    for (i, pair) in xs.windows(2).enumerate() {
        worst = worst.max((c - i as f64 / n).abs()).max(((i + 1) as f64 / n - c).abs());
        c += integrate(|y| d.pdf(y), pair[0], pair[1], cfg)?;
    }
    let last = xs.len() - 1;
    worst = worst.max((c - last as f64 / n).abs()).max((1.0 - c).abs());
    Ok(worst)
}
