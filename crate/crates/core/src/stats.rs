//! Small numeric helpers shared across modules.

use crate::error::{Error, Result};

/// Arithmetic mean with a second correction pass.
pub fn mean(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    m + values.iter().map(|v| v - m).sum::<f64>() / n
}

/// Population (N-divisor) variance about `mean`.
pub fn pop_variance(values: &[f64], mean: f64) -> f64 {
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64
}

/// Returns (standardized values, mean, population std).
pub fn standardize_values(values: &[f64]) -> Result<(Vec<f64>, f64, f64)> {
    if values.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: values.len() });
    }
    let m = mean(values);
    let var = pop_variance(values, m);
    if var <= 0.0 || !var.is_finite() {
        return Err(Error::ZeroVariance);
    }
    let s = var.sqrt();
    let mut z: Vec<f64> = values.iter().map(|v| (v - m) / s).collect();
    // fold the residual rounding back out so the cumulative sum closes at zero
    let resid = z.iter().sum::<f64>() / z.len() as f64;
    z.iter_mut().for_each(|v| *v -= resid);
    Ok((z, m, s))
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    let n = v.len();
    let mid = n / 2;
    let (_, hi, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let hi = *hi;
    if n % 2 == 1 {
        hi
    } else {
        let lo = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

/// Pearson correlation; `None` when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    debug_assert_eq!(x.len(), y.len());
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Population standard deviation of replicate statistics.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    pop_variance(values, mean(values)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn pearson_basic() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn standardized_sum_closes() {
        let v: Vec<f64> = (0..10_000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3 + 0.37).collect();
        let (z, _, _) = standardize_values(&v).unwrap();
        assert!(z.iter().sum::<f64>().abs() < 1e-9);
        let var = pop_variance(&z, mean(&z));
        assert!((var - 1.0).abs() < 1e-9);
    }
}
