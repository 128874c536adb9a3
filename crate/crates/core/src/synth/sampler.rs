use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Open01};

use super::{lower, upper, Density};
use crate::quad::gk15;
use crate::error::Result;

pub const GRID_POINTS: usize = 65_537;

/// Maps a grid coordinate to a return value.
#[derive(Debug, Clone, Copy)]
enum Coordinate {
    /// r = scale * tan(theta), theta in [-pi/2, pi/2].
    Tangent { scale: f64 },
    /// r = theta on a finite interval.
    Identity,
}

impl Coordinate {
    fn to_x(self, t: f64) -> f64 {
        match self {
            Coordinate::Tangent { scale } => scale * t.tan(),
            Coordinate::Identity => t,
        }
    }

    fn jacobian(self, t: f64) -> f64 {
        match self {
            Coordinate::Tangent { scale } => scale / t.cos().powi(2),
            Coordinate::Identity => 1.0,
        }
    }
}

/// Inverse-CDF sampler on a fixed monotone grid.
///
/// The CDF is tabulated at [`GRID_POINTS`] equally spaced points of a
/// compact coordinate (an arctangent map for whole-line densities), and a
/// uniform draw is inverted by linear interpolation in that coordinate.
#[derive(Debug, Clone)]
pub struct GridSampler {
    coord: Coordinate,
    nodes: Vec<f64>,
    cdf: Vec<f64>,
}

impl GridSampler {
    pub fn new<D: Density + ?Sized>(d: &D) -> Result<Self> {
        let (coord, a, b) = match d.support() {
            Some((lo, hi)) => (Coordinate::Identity, lo, hi),
            None => (Coordinate::Tangent { scale: d.scale() }, -FRAC_PI_2, FRAC_PI_2),
        };
        let m = GRID_POINTS - 1;
        let nodes: Vec<f64> = (0..=m).map(|k| a + (b - a) * k as f64 / m as f64).collect();

        let mut mass = vec![0.0; m];
        let first_x = coord.to_x(nodes[1]);
        let last_x = coord.to_x(nodes[m - 1]);
        // end cells hold the (possibly singular) tails; integrate those exactly
        mass[0] = lower(d, |_| 1.0, first_x)?;
        mass[m - 1] = upper(d, |_| 1.0, last_x)?;
        for k in 1..m - 1 {
            mass[k] = gk15(&|t: f64| d.pdf(coord.to_x(t)) * coord.jacobian(t), nodes[k], nodes[k + 1]).0;
        }
        let total: f64 = mass.iter().sum();
        let mut cdf = Vec::with_capacity(GRID_POINTS);
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in &mass {
            acc += w / total;
            cdf.push(acc);
        }
        cdf[m] = 1.0;
        Ok(Self { coord, nodes, cdf })
    }

    /// Grid CDF at `x`, linear in the grid coordinate between nodes.
    pub fn grid_cdf(&self, x: f64) -> f64 {
        let t = match self.coord {
            Coordinate::Tangent { scale } => (x / scale).atan(),
            Coordinate::Identity => x,
        };
        let k = self.nodes.partition_point(|n| *n <= t);
        if k == 0 {
            return 0.0;
        }
        if k >= self.nodes.len() {
            return 1.0;
        }
        let frac = (t - self.nodes[k - 1]) / (self.nodes[k] - self.nodes[k - 1]);
        self.cdf[k - 1] + frac * (self.cdf[k] - self.cdf[k - 1])
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let k = self.cdf.partition_point(|c| *c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        let t = self.nodes[k - 1] + frac * (self.nodes[k] - self.nodes[k - 1]);
        self.coord.to_x(t)
    }

    /// `n` draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let u: f64 = Open01.sample(&mut rng);
                self.quantile(u)
            })
            .collect()
    }
}
