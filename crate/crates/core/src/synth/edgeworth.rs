use std::f64::consts::PI;

use super::{moments, zeta_star_affine, Density, GridSampler, Moments};
use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::series::{Period, ReturnSeries};

pub const EDGEWORTH_RANGE: (f64, f64) = (-8.0, 8.0);
const SCAN_STEP: f64 = 1e-3;
/// A sign change of the correction factor closer to the origin than this is
/// an expansion breakdown, not a far-tail artifact.
const BREAKDOWN_RADIUS: f64 = 4.0;
const MAX_ZETA3: f64 = 0.3;
const KURT_RANGE: (f64, f64) = (0.0, 3.0);

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn correction(zeta3: f64, kurt: f64, x: f64) -> f64 {
    let x2 = x * x;
    1.0 + zeta3 / 6.0 * (x2 * x - 3.0 * x) + kurt / 24.0 * (x2 * x2 - 6.0 * x2 + 3.0)
}

/// Gram-Charlier (Edgeworth) density
/// `phi(x) [1 + zeta3 He3(x) / 6 + kurt He4(x) / 24]`, truncated to the
/// interval around the origin where the bracket stays positive (at most
/// [-8, 8]) and renormalized.
#[derive(Debug, Clone)]
pub struct EdgeworthDensity {
    zeta3: f64,
    kurt: f64,
    lo: f64,
    hi: f64,
    norm: f64,
}

impl EdgeworthDensity {
    pub fn new(zeta3: f64, kurt: f64) -> Result<Self> {
        if !(zeta3.is_finite() && kurt.is_finite()) {
            return Err(Error::InvalidParams("non-finite Edgeworth parameters".into()));
        }
        let hi = Self::positive_edge(zeta3, kurt, 1.0)?;
        let lo = -Self::positive_edge(zeta3, kurt, -1.0)?;
        if zeta3.abs() > MAX_ZETA3 || kurt < KURT_RANGE.0 || kurt > KURT_RANGE.1 {
            return Err(Error::InvalidParams(format!(
                "need |zeta3| <= {MAX_ZETA3} and kurtosis in [{}, {}], got ({zeta3}, {kurt})",
                KURT_RANGE.0, KURT_RANGE.1
            )));
        }
        let mass = integrate(|x| phi(x) * correction(zeta3, kurt, x), lo, hi, super::quad_cfg())?;
        Ok(Self { zeta3, kurt, lo, hi, norm: 1.0 / mass })
    }

    /// Distance from the origin, in direction `dir`, to the first sign change
    /// of the bracket on the scan grid, or to the range edge.
    fn positive_edge(zeta3: f64, kurt: f64, dir: f64) -> Result<f64> {
        let limit = if dir > 0.0 { EDGEWORTH_RANGE.1 } else { -EDGEWORTH_RANGE.0 };
        let steps = (limit / SCAN_STEP).round() as usize;
        let mut prev = 0.0;
        for k in 1..=steps {
            let x = k as f64 * SCAN_STEP;
            if correction(zeta3, kurt, dir * x) < 0.0 {
                if x < BREAKDOWN_RADIUS {
                    return Err(Error::NegativeDensity { x: dir * x });
                }
                // bisect the root inside (prev, x]
                let (mut a, mut b) = (prev, x);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if correction(zeta3, kurt, dir * m) < 0.0 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                return Ok(a);
            }
            prev = x;
        }
        Ok(limit)
    }

    pub fn zeta3(&self) -> f64 {
        self.zeta3
    }

    pub fn kurtosis(&self) -> f64 {
        self.kurt
    }

    /// Support after truncation.
    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Quadrature moments of the truncated, renormalized density. These are
    /// the truth for sampled data, and differ slightly from the nominal
    /// parameters.
    pub fn moments(&self) -> Result<Moments> {
        moments(self)
    }

    /// Exact zeta-star of the truncated density, standardized.
    pub fn zeta_star_exact(&self) -> Result<f64> {
        let m = self.moments()?;
        zeta_star_affine(self, m.mean, m.variance.sqrt())
    }

    pub fn sampler(&self) -> Result<GridSampler> {
        GridSampler::new(self)
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<ReturnSeries> {
        let values = self.sampler()?.sample(n, seed);
        ReturnSeries::from_values(format!("edgeworth({},{})", self.zeta3, self.kurt), Period::Daily, values)
    }
}

impl Density for EdgeworthDensity {
    fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            return 0.0;
        }
        self.norm * phi(x) * correction(self.zeta3, self.kurt, x)
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.lo, self.hi))
    }
}

/// The untruncated expansion on the whole line. Its mean is 0 and its
/// variance 1 exactly, so zeta-star needs no standardization.
struct Expansion {
    zeta3: f64,
    kurt: f64,
}

impl Density for Expansion {
    fn pdf(&self, x: f64) -> f64 {
        phi(x) * correction(self.zeta3, self.kurt, x)
    }

    fn support(&self) -> Option<(f64, f64)> {
        None
    }
}

/// zeta-star of the untruncated expansion by nested quadrature. This is the
/// oracle that fixes the zeta-star/zeta3 slope.
pub fn edgeworth_expansion_zeta_star(zeta3: f64, kurt: f64) -> Result<f64> {
    zeta_star_affine(&Expansion { zeta3, kurt }, 0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::{edgeworth_zeta_star, EDGEWORTH_SLOPE};
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_identity_case() {
        let d = EdgeworthDensity::new(0.0, 0.0).unwrap();
        assert_eq!(d.range(), EDGEWORTH_RANGE);
        for x in [-3.0, 0.0, 1.5] {
            assert_relative_eq!(d.pdf(x), phi(x), max_relative = 1e-13);
        }
    }

    #[test]
    fn breakdown_is_rejected() {
        assert!(matches!(EdgeworthDensity::new(1.5, 0.0), Err(Error::NegativeDensity { x }) if x < 0.0));
        assert!(matches!(EdgeworthDensity::new(0.3, 0.0), Err(Error::NegativeDensity { .. })));
        assert!(matches!(EdgeworthDensity::new(0.35, 3.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn far_tail_sign_change_truncates() {
        let d = EdgeworthDensity::new(0.1, 0.0).unwrap();
        let (lo, hi) = d.range();
        assert_eq!(hi, 8.0);
        assert!(lo > -4.3 && lo < -4.0, "{lo}");
        assert!(correction(0.1, 0.0, lo) >= 0.0);
    }

    #[test]
    fn normalized_and_nonnegative() {
        let d = EdgeworthDensity::new(0.2, 1.0).unwrap();
        let mass = integrate(|x| d.pdf(x), -8.0, 8.0, crate::quad::QuadConfig::default()).unwrap();
        assert_relative_eq!(mass, 1.0, epsilon = 1e-8);
        assert!((-8000..=8000).all(|k| d.pdf(k as f64 * 1e-3) >= 0.0));
    }

    #[test]
    fn expansion_slope_is_fifty_over_three_pi() {
        // closed form: zeta* = (200 zeta3 / 3) int_0^inf x^3 phi(x)^2 [1 + kappa He4(x)/24] dx
        //                    = (50 / 3 pi) zeta3 (1 - kappa / 8)
        for (z3, k) in [(0.1, 0.0), (0.2, 1.0), (-0.15, 2.0)] {
            let q = edgeworth_expansion_zeta_star(z3, k).unwrap();
            assert_relative_eq!(q, 50.0 / (3.0 * PI) * z3 * (1.0 - k / 8.0), max_relative = 1e-9);
            assert_relative_eq!(q, edgeworth_zeta_star(z3, k), max_relative = 1e-9);
        }
        assert_relative_eq!(EDGEWORTH_SLOPE, 5.305164769729845, epsilon = 1e-14);
    }

    #[test]
    fn truncated_moments_close_to_nominal() {
        let d = EdgeworthDensity::new(0.2, 1.0).unwrap();
        let m = d.moments().unwrap();
        assert!(m.mean.abs() < 1e-6);
        assert_relative_eq!(m.variance, 1.0, max_relative = 1e-6);
        assert_relative_eq!(m.zeta3, 0.2, max_relative = 1e-4);
        assert_relative_eq!(m.kurtosis, 1.0, max_relative = 1e-3);
    }
}
