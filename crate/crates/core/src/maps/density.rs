//! Invariant-density histograms and reference densities.

use std::f64::consts::{FRAC_2_PI, PI};

use super::MapError;

/// Normalized occupation histogram over `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    /// Bin masses; they sum to 1.
    pub masses: Vec<f64>,
    pub count: usize,
}

/// Bin `samples` into `bins` equal cells of `[lo, hi]` and normalize.
/// Values outside the interval land in the edge bins, so total mass is
/// always 1.
pub fn density_histogram(
    samples: &[f64],
    bins: usize,
    lo: f64,
    hi: f64,
) -> Result<Histogram, MapError> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(MapError::InvalidInterval { lo, hi });
    }
    if bins == 0 || samples.len() < bins {
        return Err(MapError::OrbitTooShort {
            len: samples.len(),
            bins,
        });
    }
    let mut counts = vec![0usize; bins];
    let span = hi - lo;
    for &x in samples {
        let idx = (((x - lo) / span) * bins as f64).floor();
        let idx = (idx as isize).clamp(0, bins as isize - 1) as usize;
        counts[idx] += 1;
    }
    let total = samples.len() as f64;
    Ok(Histogram {
        lo,
        hi,
        masses: counts.iter().map(|&c| c as f64 / total).collect(),
        count: samples.len(),
    })
}

/// Exact bin masses on [0, 1] of the arcsine density
/// `1 / (pi * sqrt(x(1-x)))`: the invariant density of the fully
/// chaotic logistic map. The mass of `[l, u]` is
/// `(2/pi) * (asin(sqrt(u)) - asin(sqrt(l)))`.
pub fn arcsine_bin_masses(bins: usize) -> Vec<f64> {
    let cdf = |x: f64| FRAC_2_PI * x.sqrt().asin();
    (0..bins)
        .map(|i| {
            let l = i as f64 / bins as f64;
            let u = (i + 1) as f64 / bins as f64;
            cdf(u) - cdf(l)
        })
        .collect()
}

pub fn uniform_bin_masses(bins: usize) -> Vec<f64> {
    vec![1.0 / bins as f64; bins]
}

/// The conjugacy `(2/pi) * asin(sqrt(x))` that carries arcsine-distributed
/// samples to uniform ones.
pub fn arcsine_transform(samples: &[f64]) -> Vec<f64> {
    samples
        .iter()
        .map(|&x| 2.0 / PI * x.clamp(0.0, 1.0).sqrt().asin())
        .collect()
}

/// Sum of absolute mass differences.
pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
