//! Lévy–Schrödinger dynamics `i ∂t ψ = -(1/τ) η(∂x) ψ` on a periodic grid.
//!
//! The spectral propagator multiplies each Fourier mode by
//! `exp(i dt η(u) / τ)`, which is exactly unitary for real `η`. The jump
//! step evaluates the Bessel-kernel integral by quadrature instead and
//! advances with one explicit Euler step; it exists as an independent
//! cross-check of the spectral route. The rest-mass phase is absorbed, so
//! energies are kinetic.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use num_complex::Complex64;

use crate::bessel::bessel_k;
use crate::density::levy_density_1d;
use crate::error::{ensure_positive, Error, Result};
use crate::exponents::{ExponentParams, LogCharacteristic};
use crate::fft::Fft;
use crate::grid::GridSpec;
use crate::quad::{compensated_sum, integrate, kronrod21_nodes, Tolerance};
use crate::spectrum::SpectrumSolution;

/// Largest admissible `|ψ|` at the grid boundary, relative to the peak.
pub const BOUNDARY_AMPLITUDE: f64 = 1e-12;
/// Explicit jump steps need `dt <= JUMP_STABILITY * τ`.
pub const JUMP_STABILITY: f64 = 1e-3;

/// Complex amplitudes on a [`GridSpec`], normalised to `Σ |ψ|² dx = 1` at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl WaveFunction {
    /// Normalises `values`; fails on a zero field or a size mismatch.
    pub fn new(grid: GridSpec, mut values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidGrid("value count does not match grid size"));
        }
        let norm = norm_sq(&values, grid.dx());
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain {
                what: "wave function norm must be positive and finite",
                value: norm,
            });
        }
        let scale = 1.0 / norm.sqrt();
        for v in values.iter_mut() {
            *v *= scale;
        }
        Ok(Self { grid, values })
    }

    /// Normalised periodic plane wave `exp(i u_k x)` on FFT bin `k`.
    pub fn plane_wave(grid: GridSpec, k: usize) -> Result<Self> {
        if k >= grid.n() {
            return Err(Error::InvalidGrid("plane-wave bin outside the grid"));
        }
        let u = grid.u(k);
        let values = (0..grid.n())
            .map(|j| Complex64::from_polar(1.0, u * grid.x(j)))
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        norm_sq(&self.values, self.grid.dx())
    }

    /// `(Σ |ψ - φ|² dx)^(1/2)`.
    pub fn l2_distance(&self, other: &WaveFunction) -> f64 {
        let s = compensated_sum(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()));
        (s * self.grid.dx()).sqrt()
    }

    /// Fourier coefficients in FFT order.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let fft = Fft::new(self.grid.n()).expect("grid sizes are powers of two");
        let mut out = self.values.clone();
        fft.forward(&mut out);
        out
    }
}

fn norm_sq(values: &[Complex64], dx: f64) -> f64 {
    compensated_sum(values.iter().map(|v| v.norm_sqr())) * dx
}

/// Gaussian packet `exp(-(x - x0)² / 2σ²) exp(i p0 x)`, normalised.
pub fn gaussian_packet(x0: f64, p0: f64, sigma: f64, grid: &GridSpec) -> Result<WaveFunction> {
    let sigma = ensure_positive("packet width sigma", sigma)?;
    if sigma < 4.0 * grid.dx() {
        return Err(Error::InvalidGrid("packet width must be at least 4 dx"));
    }
    let envelope = |x: f64| (-(x - x0) * (x - x0) / (2.0 * sigma * sigma)).exp();
    let boundary = envelope(grid.x(0)).max(envelope(grid.x(grid.n() - 1)));
    if boundary >= BOUNDARY_AMPLITUDE {
        return Err(Error::GridSupport {
            boundary_amplitude: boundary,
        });
    }
    // momentum envelope exp(-σ²(u - p0)²/2) at the Nyquist frequency
    let excess = grid.u_max() - p0.abs();
    if excess <= 0.0 || (-0.5 * sigma * sigma * excess * excess).exp() >= BOUNDARY_AMPLITUDE {
        return Err(Error::InvalidGrid(
            "packet momentum content reaches the Nyquist frequency",
        ));
    }
    let values = (0..grid.n())
        .map(|j| {
            let x = grid.x(j);
            Complex64::from_polar(envelope(x), p0 * x)
        })
        .collect();
    WaveFunction::new(*grid, values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub norm: f64,
    pub centroid: f64,
    pub variance: f64,
    pub momentum_centroid: f64,
}

pub fn observables(psi: &WaveFunction) -> Observables {
    let g = psi.grid;
    let dx = g.dx();
    let density: Vec<f64> = psi.values.iter().map(|v| v.norm_sqr()).collect();
    let norm = compensated_sum(density.iter().copied()) * dx;
    let centroid = compensated_sum(density.iter().enumerate().map(|(j, p)| g.x(j) * p)) * dx / norm;
    let variance = compensated_sum(density.iter().enumerate().map(|(j, p)| {
        let d = g.x(j) - centroid;
        d * d * p
    })) * dx
        / norm;
    let spec = psi.spectrum();
    let weight = compensated_sum(spec.iter().map(|c| c.norm_sqr()));
    let momentum_centroid = compensated_sum(spec.iter().enumerate().map(|(k, c)| g.u(k) * c.norm_sqr())) / weight;
    Observables {
        norm,
        centroid,
        variance,
        momentum_centroid,
    }
}

/// Precomputed spectral multiplier `exp(i dt η(u) / τ)` for repeated steps.
#[derive(Debug, Clone)]
pub struct SpectralStepper {
    grid: GridSpec,
    fft: Fft,
    multiplier: Vec<Complex64>,
}

impl SpectralStepper {
    pub fn new<E: LogCharacteristic + ?Sized>(grid: &GridSpec, dt: f64, eta: &E, tau: f64) -> Result<Self> {
        let tau = ensure_positive("time scale tau", tau)?;
        let fft = Fft::new(grid.n())?;
        let multiplier = (0..grid.n())
            .map(|k| Complex64::from_polar(1.0, dt * eta.eta(grid.u(k)) / tau))
            .collect();
        Ok(Self {
            grid: *grid,
            fft,
            multiplier,
        })
    }

    pub fn step(&self, psi: &mut WaveFunction) -> Result<()> {
        if psi.grid != self.grid {
            return Err(Error::InvalidGrid("wave function lives on a different grid"));
        }
        self.fft.forward(&mut psi.values);
        for (v, m) in psi.values.iter_mut().zip(&self.multiplier) {
            *v *= m;
        }
        self.fft.inverse(&mut psi.values);
        Ok(())
    }
}

/// One exact spectral step of length `dt`.
pub fn evolve_spectral<E: LogCharacteristic + ?Sized>(
    psi: &WaveFunction,
    dt: f64,
    eta: &E,
    tau: f64,
) -> Result<WaveFunction> {
    let stepper = SpectralStepper::new(&psi.grid, dt, eta, tau)?;
    let mut out = psi.clone();
    stepper.step(&mut out)?;
    Ok(out)
}

/// Evolution under the branch mass `M_i = m sqrt(x_i)` of a spectrum.
///
/// `branch` indexes the real positive roots in ascending order.
pub fn evolve_modified(
    psi: &WaveFunction,
    dt: f64,
    base: &ExponentParams,
    solution: &SpectrumSolution,
    branch: usize,
) -> Result<WaveFunction> {
    let roots: Vec<f64> = solution.physical().map(|r| r.x).collect();
    let x = *roots.get(branch).ok_or(Error::Branch {
        index: branch,
        available: roots.len(),
    })?;
    let params = base.rescaled(x)?;
    evolve_spectral(psi, dt, &params, params.tau())
}

/// Truncation and quadrature settings of the explicit jump step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpSettings {
    /// Inner cutoff in units of `a`; the core is folded into a diffusive term.
    pub y_min_over_a: f64,
    /// Outer cutoff chosen where `W(y) y` falls below this.
    pub tail_threshold: f64,
}

impl Default for JumpSettings {
    fn default() -> Self {
        Self {
            y_min_over_a: 1e-4,
            tail_threshold: 1e-16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpStepReport {
    pub y_min: f64,
    pub y_max: f64,
    /// Second moment `∫_{|y|<y_min} y² W(y) dy` of the folded core.
    pub core_variance: f64,
    pub quadrature_nodes: usize,
    /// Bound on the L² deviation from the exact step: Euler defect plus truncation.
    pub error_bound: f64,
}

/// One explicit Euler step of `i ∂t ψ = -(1/τ) ∫ [ψ(x+y) - ψ(x)] W(y) dy`.
///
/// Shifts `ψ(x ± y)` are taken on the band-limited interpolant of the grid
/// field, so for each Fourier mode the quadrature sum over jump lengths
/// reduces to `Σ w_q W(y_q) 2 (cos(u y_q) - 1)`.
pub fn evolve_jump_quadrature(
    psi: &WaveFunction,
    dt: f64,
    params: &ExponentParams,
) -> Result<(WaveFunction, JumpStepReport)> {
    evolve_jump_quadrature_with(psi, dt, params, &JumpSettings::default())
}

pub fn evolve_jump_quadrature_with(
    psi: &WaveFunction,
    dt: f64,
    params: &ExponentParams,
    settings: &JumpSettings,
) -> Result<(WaveFunction, JumpStepReport)> {
    let dt = ensure_positive("time step dt", dt)?;
    let max_dt = JUMP_STABILITY * params.tau();
    if dt > max_dt {
        return Err(Error::Stability { dt, max_dt });
    }
    let a = params.a();
    let grid = psi.grid;
    let n = grid.n();
    let y_min = settings.y_min_over_a * a;
    let y_max = outer_cutoff(params, settings.tail_threshold)?;

    let core_variance = 2.0
        * integrate(
            |y| y * y * levy_density_1d(y, params).unwrap_or(0.0),
            0.0,
            y_min,
            Tolerance::relative(1e-12),
        )?
        .value;
    let tail_mass = 2.0
        * integrate(
            |y| levy_density_1d(y, params).unwrap_or(0.0),
            y_max,
            y_max + 60.0 * a,
            Tolerance::relative(1e-6),
        )?
        .value;

    let fft = Fft::new(n)?;
    let mut spec = psi.values.clone();
    fft.forward(&mut spec);

    // highest frequency carrying weight fixes the panel length
    let peak = spec.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let u_eff = (0..n)
        .filter(|&k| spec[k].norm() > 1e-14 * peak)
        .map(|k| grid.u(k).abs())
        .fold(grid.du(), f64::max);
    let panel = (2.0 * PI / u_eff).min(a);

    let mut edges = Vec::new();
    let mut y = y_min;
    edges.push(y);
    while y < y_max {
        let next = (2.0 * y).min(y + panel).min(y_max);
        edges.push(next);
        y = next;
    }
    let mut nodes = Vec::with_capacity(21 * edges.len());
    for w in edges.windows(2) {
        for (y, wt) in kronrod21_nodes(w[0], w[1]) {
            nodes.push((y, wt * levy_density_1d(y, params)?));
        }
    }

    let tau = params.tau();
    let mut symbol_max: f64 = 0.0;
    for (k, c) in spec.iter_mut().enumerate() {
        let u = grid.u(k);
        let jumps = compensated_sum(nodes.iter().map(|&(y, w)| {
            let h = (0.5 * u * y).sin();
            -4.0 * h * h * w
        }));
        let symbol = jumps - 0.5 * core_variance * u * u;
        if c.norm() > 1e-14 * peak {
            symbol_max = symbol_max.max(symbol.abs());
        }
        // ψ + i (dt/τ) J[ψ]
        *c *= Complex64::new(1.0, dt * symbol / tau);
    }
    fft.inverse(&mut spec);

    let theta = dt * symbol_max / tau;
    let core_defect = a / PI * y_min.powi(3) / 18.0 * u_eff.powi(4);
    let error_bound = 0.5 * theta * theta + dt / tau * (2.0 * tail_mass + core_defect);
    let report = JumpStepReport {
        y_min,
        y_max,
        core_variance,
        quadrature_nodes: nodes.len(),
        error_bound,
    };
    Ok((WaveFunction { grid, values: spec }, report))
}

/// Smallest `y` with `W(y) y = K1(y/a)/π` below `threshold`.
fn outer_cutoff(params: &ExponentParams, threshold: f64) -> Result<f64> {
    let a = params.a();
    let below = |y: f64| -> Result<bool> { Ok(bessel_k(1, y / a)? / PI < threshold) };
    let mut hi = a;
    while !below(hi)? {
        hi *= 2.0;
    }
    let mut lo = 0.5 * hi;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
