use serde::Serialize;

use super::{expect, moments, quad_cfg, zeta_star_affine, Density, GridSampler};
use crate::error::{Error, Result};
use crate::quad::integrate_line;
use crate::series::{Period, ReturnSeries};

/// Asymmetric Student-t density with separate tail exponents,
///
/// `P(r) = N (1 + r / sqrt(a + r^2))^((nu_minus + 1)/2) (1 - r / sqrt(a + r^2))^((nu_plus + 1)/2)`,
/// `a = (nu_plus + nu_minus) / 2`,
///
/// so that `P(r) ~ |r|^(-1 - nu_plus)` as r -> +inf and `|r|^(-1 - nu_minus)`
/// as r -> -inf. The normalization is found by quadrature.
#[derive(Debug, Clone, Serialize)]
pub struct AsymmetricStudentT {
    nu_plus: f64,
    nu_minus: f64,
    norm_const: f64,
    mean: Option<f64>,
    var: Option<f64>,
}

impl AsymmetricStudentT {
    pub fn new(nu_plus: f64, nu_minus: f64) -> Result<Self> {
        for (name, nu) in [("nu_plus", nu_plus), ("nu_minus", nu_minus)] {
            if !(nu.is_finite() && nu > 0.5) {
                return Err(Error::InvalidParams(format!("{name} = {nu} must exceed 1/2")));
            }
        }
        let mut dist = Self { nu_plus, nu_minus, norm_const: 1.0, mean: None, var: None };
        let mass = integrate_line(|r| dist.kernel(r), 0.0, quad_cfg())?;
        dist.norm_const = 1.0 / mass;
        if dist.min_nu() > 1.0 {
            let mean = expect(&dist, |r| r)?;
            dist.mean = Some(mean);
            if dist.min_nu() > 2.0 {
                dist.var = Some(expect(&dist, |r| (r - mean).powi(2))?);
            }
        }
        Ok(dist)
    }

    pub fn nu_plus(&self) -> f64 {
        self.nu_plus
    }

    pub fn nu_minus(&self) -> f64 {
        self.nu_minus
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    pub fn mean(&self) -> Option<f64> {
        self.mean
    }

    pub fn var(&self) -> Option<f64> {
        self.var
    }

    fn min_nu(&self) -> f64 {
        self.nu_plus.min(self.nu_minus)
    }

    fn half_sum(&self) -> f64 {
        0.5 * (self.nu_plus + self.nu_minus)
    }

    /// Unnormalized density, with the vanishing factor computed without
    /// cancellation: for r >= 0, 1 - r/s = a / (s (s + r)).
    fn kernel(&self, r: f64) -> f64 {
        let a = self.half_sum();
        let s = (a + r * r).sqrt();
        let big = (s + r.abs()) / s;
        let small = a / (s * (s + r.abs()));
        let (plus_factor, minus_factor) = if r >= 0.0 { (big, small) } else { (small, big) };
        // plus_factor = 1 + r/s, minus_factor = 1 - r/s
        let log = 0.5 * (self.nu_minus + 1.0) * plus_factor.ln() + 0.5 * (self.nu_plus + 1.0) * minus_factor.ln();
        log.exp()
    }

    /// Classical skewness by quadrature; needs both exponents above 3.
    pub fn zeta3_exact(&self) -> Result<f64> {
        if self.min_nu() <= 3.0 {
            return Err(Error::MomentDoesNotExist(format!(
                "third moment needs nu_plus, nu_minus > 3 (got {}, {})",
                self.nu_plus, self.nu_minus
            )));
        }
        let mean = self.mean.expect("mean exists for nu > 3");
        let var = self.var.expect("variance exists for nu > 3");
        let m3 = expect(self, |r| (r - mean).powi(3))?;
        Ok(m3 / var.powf(1.5))
    }

    /// Exact zeta-star. Uses the standardized density when both exponents
    /// exceed 2; otherwise the raw density, flagged as non-standardized.
    pub fn zeta_star_exact(&self) -> Result<ExactZetaStar> {
        match (self.mean, self.var) {
            (Some(m), Some(v)) => Ok(ExactZetaStar { value: zeta_star_affine(self, m, v.sqrt())?, standardized: true }),
            _ => Ok(ExactZetaStar { value: zeta_star_affine(self, 0.0, 1.0)?, standardized: false }),
        }
    }

    /// zeta-star of the standardized density; fails when the variance is infinite.
    pub fn zeta_star_standardized(&self) -> Result<f64> {
        let exact = self.zeta_star_exact()?;
        if !exact.standardized {
            return Err(Error::MomentDoesNotExist(format!(
                "standardization needs nu_plus, nu_minus > 2 (got {}, {})",
                self.nu_plus, self.nu_minus
            )));
        }
        Ok(exact.value)
    }

    pub fn moments(&self) -> Result<super::Moments> {
        if self.min_nu() <= 4.0 {
            return Err(Error::MomentDoesNotExist("fourth moment needs nu_plus, nu_minus > 4".into()));
        }
        moments(self)
    }

    pub fn sampler(&self) -> Result<GridSampler> {
        GridSampler::new(self)
    }

    /// `n` i.i.d. draws as a daily series.
    pub fn sample(&self, n: usize, seed: u64) -> Result<ReturnSeries> {
        let values = self.sampler()?.sample(n, seed);
        ReturnSeries::from_values(format!("ast({},{})", self.nu_plus, self.nu_minus), Period::Daily, values)
    }
}

/// Result of [`AsymmetricStudentT::zeta_star_exact`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactZetaStar {
    pub value: f64,
    /// False when computed on the raw density because the variance diverges.
    pub standardized: bool,
}

impl Density for AsymmetricStudentT {
    fn pdf(&self, x: f64) -> f64 {
        self.norm_const * self.kernel(x)
    }

    fn support(&self) -> Option<(f64, f64)> {
        None
    }

    fn scale(&self) -> f64 {
        self.half_sum().sqrt()
    }
}
