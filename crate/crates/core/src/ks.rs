//! Kolmogorov–Smirnov tests against gridded densities and between samples.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::density::DensityTable;
use crate::error::{Error, Result};

/// Critical value coefficient at significance 0.01.
pub const KS_COEFFICIENT_1PCT: f64 = 1.63;
pub const MIN_SAMPLES: usize = 1000;
/// Largest reference mass allowed to lie beyond the grid ends.
pub const TAIL_MASS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub n: usize,
    pub d: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Linearly interpolated reference CDF.
#[derive(Debug, Clone)]
pub struct GriddedCdf {
    x0: f64,
    dx: f64,
    nodes: Vec<f64>,
}

impl GriddedCdf {
    pub fn new(reference: &DensityTable) -> Self {
        Self {
            x0: reference.x(0),
            dx: reference.grid().dx(),
            nodes: reference.cdf_nodes(),
        }
    }

    pub fn lower(&self) -> f64 {
        self.x0
    }

    pub fn upper(&self) -> f64 {
        self.x0 + self.dx * (self.nodes.len() - 1) as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.x0) / self.dx;
        if s <= 0.0 {
            return 0.0;
        }
        let j = s.floor() as usize;
        if j + 1 >= self.nodes.len() {
            return 1.0;
        }
        let w = s - j as f64;
        self.nodes[j] + w * (self.nodes[j + 1] - self.nodes[j])
    }

    /// Inverse of [`GriddedCdf::eval`] for `p` in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let j = self.nodes.partition_point(|&c| c < p);
        if j == 0 {
            return self.x0;
        }
        if j >= self.nodes.len() {
            return self.upper();
        }
        let (c0, c1) = (self.nodes[j - 1], self.nodes[j]);
        let w = if c1 > c0 { (p - c0) / (c1 - c0) } else { 0.0 };
        self.x0 + self.dx * ((j - 1) as f64 + w)
    }
}

/// One-sample KS statistic of `samples` against the reference table.
///
/// The grid must cover every sample, and the density at its ends must leave
/// less than [`TAIL_MASS`] unaccounted for.
pub fn ks_validate(samples: &[f64], reference: &DensityTable) -> Result<KsReport> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let cdf = GriddedCdf::new(reference);
    let values = reference.values();
    let mass = reference.mass();
    // exponential-tail estimate of the mass beyond each end
    let edge = (values[0].max(values[values.len() - 1]) / mass) * reference.grid().half_width();
    if edge > TAIL_MASS {
        return Err(Error::GridSupport {
            boundary_amplitude: edge,
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &x in [sorted[0], sorted[sorted.len() - 1]].iter() {
        if !x.is_finite() || x <= cdf.lower() || x >= cdf.upper() {
            return Err(Error::SampleOutsideGrid { x });
        }
    }
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf.eval(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    let threshold = KS_COEFFICIENT_1PCT / n.sqrt();
    Ok(KsReport {
        n: sorted.len(),
        d,
        threshold,
        pass: d <= threshold,
    })
}

/// Two-sample KS statistic with threshold `1.63 sqrt((n + m) / (n m))`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsReport> {
    for s in [a, b] {
        if s.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                needed: MIN_SAMPLES,
                got: s.len(),
            });
        }
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let threshold = KS_COEFFICIENT_1PCT * ((na + nb) / (na * nb)).sqrt();
    Ok(KsReport {
        n: a.len() + b.len(),
        d,
        threshold,
        pass: d <= threshold,
    })
}
