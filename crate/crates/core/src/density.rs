//! Transition densities by discrete Fourier inversion, and the Bessel-kernel
//! Lévy measures of the relativistic process.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use num_complex::Complex64;

use crate::bessel::bessel_k;
use crate::error::{ensure_positive, Error, Result};
use crate::exponents::{ExponentParams, LogCharacteristic};
use crate::fft::Fft;
use crate::grid::GridSpec;
use crate::quad::compensated_sum;

/// Largest admissible `|φ(u_max)|^(dt/τ)` at the Nyquist frequency.
pub const NYQUIST_DECAY: f64 = 1e-12;
/// Negative ringing below this magnitude is clipped silently.
pub const CLIP_FLOOR: f64 = 1e-10;
/// Default grid size.
pub const DEFAULT_POINTS: usize = 1 << 14;
/// Safety factor between the Nyquist-limited step and the default step.
pub const NYQUIST_MARGIN: f64 = 4.0;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DensityDiagnostics {
    /// Mass removed by clipping negative ringing to zero.
    pub clipped_mass: f64,
    /// Most negative raw value before clipping (0 if none).
    pub min_raw: f64,
    /// `exp((dt/τ) η(u_max))` for the grid used.
    pub nyquist_magnitude: f64,
}

/// Probability density sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    grid: GridSpec,
    values: Vec<f64>,
    diagnostics: DensityDiagnostics,
}

impl DensityTable {
    /// Wraps raw samples; negative ringing above `-1e-10` is clipped, anything lower is an error.
    pub fn from_values(grid: GridSpec, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidGrid("value count does not match grid size"));
        }
        let mut diagnostics = DensityDiagnostics::default();
        for v in values.iter_mut() {
            if *v < 0.0 {
                diagnostics.min_raw = diagnostics.min_raw.min(*v);
                diagnostics.clipped_mass -= *v * grid.dx();
                *v = 0.0;
            }
        }
        if diagnostics.min_raw < -CLIP_FLOOR {
            return Err(Error::Ringing {
                min: diagnostics.min_raw,
            });
        }
        Ok(Self {
            grid,
            values,
            diagnostics,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diagnostics(&self) -> &DensityDiagnostics {
        &self.diagnostics
    }

    pub fn x(&self, j: usize) -> f64 {
        self.grid.x(j)
    }

    /// `Σ p dx`.
    pub fn mass(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) * self.grid.dx()
    }

    /// `Σ x^k p(x) dx`.
    pub fn moment(&self, k: u32) -> f64 {
        let g = self.grid;
        compensated_sum(self.values.iter().enumerate().map(|(j, p)| g.x(j).powi(k as i32) * p)) * g.dx()
    }

    /// Cumulative distribution at the nodes, trapezoidal and normalised so the last node is 1.
    pub fn cdf_nodes(&self) -> Vec<f64> {
        let dx = self.grid.dx();
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        let mut comp = 0.0;
        out.push(0.0);
        for w in self.values.windows(2) {
            let y = 0.5 * (w[0] + w[1]) * dx - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            out.push(acc);
        }
        let total = acc;
        if total > 0.0 {
            for v in out.iter_mut() {
                *v /= total;
            }
        }
        out
    }

    /// L¹ distance `Σ |p - q| dx` on a shared grid.
    pub fn l1_distance(&self, other: &DensityTable) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("tables live on different grids"));
        }
        Ok(compensated_sum(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs())) * self.grid.dx())
    }

    /// Convolution `(p ⊛ q)(x) = ∫ p(y) q(x - y) dy`, evaluated spectrally on the shared periodic grid.
    pub fn convolve(&self, other: &DensityTable) -> Result<DensityTable> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("tables live on different grids"));
        }
        let n = self.grid.n();
        let fft = Fft::new(n)?;
        let mut a: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        // index of x_i - x_j relative to the origin node n/2
        let mut b: Vec<Complex64> = (0..n)
            .map(|m| Complex64::new(other.values[(m + n / 2) % n], 0.0))
            .collect();
        fft.forward(&mut a);
        fft.forward(&mut b);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        fft.inverse(&mut a);
        let dx = self.grid.dx();
        let values = a.iter().map(|c| c.re * dx).collect();
        DensityTable::from_values(self.grid, values)
    }
}

/// Smallest frequency where `exp((dt/τ) η(u)) < NYQUIST_DECAY`, i.e. the
/// Nyquist frequency a grid must at least reach.
pub fn nyquist_requirement<E: LogCharacteristic + ?Sized>(dt: f64, tau: f64, eta: &E) -> Result<f64> {
    let t = ensure_positive("time step dt", dt)? / ensure_positive("time scale tau", tau)?;
    let target = NYQUIST_DECAY.ln();
    let decayed = |u: f64| t * eta.eta(u) < target;
    let mut hi = 1.0;
    let mut steps = 0;
    while !decayed(hi) {
        hi *= 2.0;
        steps += 1;
        if steps > 1100 {
            return Err(Error::InvalidGrid("characteristic function does not decay"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if decayed(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

impl GridSpec {
    /// Default grid for a transition density: `2^14` points (more if the law is
    /// wide), step a factor [`NYQUIST_MARGIN`] below the Nyquist limit.
    pub fn for_density<E: LogCharacteristic + ?Sized>(dt: f64, params: &ExponentParams, eta: &E) -> Result<GridSpec> {
        let u_req = nyquist_requirement(dt, params.tau(), eta)?;
        let dx = PI / u_req / NYQUIST_MARGIN;
        let spread = (dt / params.tau()).sqrt() * params.a();
        let half_width = 40.0 * params.a() + 12.0 * spread;
        let mut n = DEFAULT_POINTS;
        while (n as f64) * dx * 0.5 < half_width {
            n *= 2;
        }
        GridSpec::new(n, dx)
    }
}

/// Transition density `(1/2π) ∫ exp((dt/τ) η(u) - iux) du` on `grid`.
pub fn transition_density<E: LogCharacteristic + ?Sized>(
    dt: f64,
    params: &ExponentParams,
    eta: &E,
    grid: &GridSpec,
) -> Result<DensityTable> {
    let t = ensure_positive("time step dt", dt)? / params.tau();
    let nyquist_magnitude = (t * eta.eta(grid.u_max())).exp();
    if !(nyquist_magnitude < NYQUIST_DECAY) {
        let u_req = nyquist_requirement(dt, params.tau(), eta)?;
        return Err(Error::GridTooCoarse {
            dx: grid.dx(),
            required_dx: PI / u_req,
        });
    }
    let n = grid.n();
    let fft = Fft::new(n)?;
    // x_j = (j - n/2) dx turns exp(-i u_k x_j) into (-1)^k exp(-2πi jk/n)
    let mut spectrum: Vec<Complex64> = (0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * (t * eta.eta(grid.u(k))).exp(), 0.0)
        })
        .collect();
    fft.forward(&mut spectrum);
    let scale = grid.du() / (2.0 * PI);
    let mut values: Vec<f64> = spectrum.iter().map(|c| c.re * scale).collect();
    for j in 1..n / 2 {
        let m = n - j;
        let avg = 0.5 * (values[j] + values[m]);
        values[j] = avg;
        values[m] = avg;
    }
    let mut table = DensityTable::from_values(*grid, values)?;
    table.diagnostics.nyquist_magnitude = nyquist_magnitude;
    Ok(table)
}

/// One-dimensional relativistic Lévy density `K1(|x|/a) / (π|x|)`.
pub fn levy_density_1d(x: f64, params: &ExponentParams) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Singularity);
    }
    let r = x.abs();
    Ok(bessel_k(1, r / params.a())? / (PI * r))
}

/// Three-dimensional relativistic Lévy density `K2(r/a) / (2 a π² r²)`.
pub fn levy_density_3d(r: f64, params: &ExponentParams) -> Result<f64> {
    let r = ensure_positive("radius r", r)?;
    let a = params.a();
    Ok(bessel_k(2, r / a)? / (2.0 * a * PI * PI * r * r))
}

/// Moment `Σ x^k p dx` of order `k <= 4`.
pub fn moments(table: &DensityTable, k: u32) -> Result<f64> {
    if k > 4 {
        return Err(Error::Domain {
            what: "moment order must be <= 4",
            value: k as f64,
        });
    }
    Ok(table.moment(k))
}
