//! Momentum-space propagators of the modified dispersion
//! `p² = m² (1 + f(p²/m²))`, their poles and residues, and a scalarised
//! Euclidean proxy for the one-loop self-energy.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use num_complex::Complex64;

use crate::cubic::Cubic;
use crate::error::{ensure_positive, Error, Result};
use crate::quad::{compensated_sum, integrate_with_breaks, Tolerance};
use crate::spectrum::{masses_from_lambdas, CutoffPolynomial, SpectrumSolution};

/// Default width of the `iε` prescription, in units of `m²`.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Accepted RMS deviation of the local pole fit, relative to the residue.
pub const POLE_FIT_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorPoint {
    pub p2: f64,
    pub value: Complex64,
}

/// Real part of the inverse propagator, `p² - m² (1 + f(p²/m²))`.
pub fn kg_denominator(p2: f64, m: f64, c: &CutoffPolynomial) -> f64 {
    let x = p2 / (m * m);
    m * m * (x - 1.0 - c.f(x))
}

/// `1 / (p² - m² (1 + f(p²/m²)) + iε)`.
pub fn kg_propagator(p2: f64, m: f64, c: &CutoffPolynomial, eps: f64) -> Result<Complex64> {
    let eps = ensure_positive("pole width eps", eps)?;
    ensure_positive("base mass", m)?;
    Ok(Complex64::new(kg_denominator(p2, m, c), eps).inv())
}

/// Dirac propagator split into its `p̸` and identity coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracScalarized {
    pub vector_coeff: Complex64,
    pub scalar_coeff: Complex64,
    /// `m sqrt(1 + f(p²/m²))`, imaginary where `1 + f < 0`.
    pub mass_factor: Complex64,
}

impl DiracScalarized {
    pub fn mass_is_real(&self) -> bool {
        self.mass_factor.im == 0.0
    }
}

pub fn dirac_propagator_scalarized(p2: f64, m: f64, c: &CutoffPolynomial, eps: f64) -> Result<DiracScalarized> {
    let k = kg_propagator(p2, m, c, eps)?;
    let one_plus_f = 1.0 + c.f(p2 / (m * m));
    let mass_factor = if one_plus_f >= 0.0 {
        Complex64::new(m * one_plus_f.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, m * (-one_plus_f).sqrt())
    };
    Ok(DiracScalarized {
        vector_coeff: k,
        scalar_coeff: mass_factor * k,
        mass_factor,
    })
}

/// `|K|` on a logarithmic grid of `points` values of `p²` in `[p2_min, p2_max]`.
pub fn scan_kg(
    p2_min: f64,
    p2_max: f64,
    points: usize,
    m: f64,
    c: &CutoffPolynomial,
    eps: f64,
) -> Result<Vec<PropagatorPoint>> {
    let (lo, hi) = (
        ensure_positive("scan start", p2_min)?,
        ensure_positive("scan end", p2_max)?,
    );
    if hi <= lo || points < 2 {
        return Err(Error::InvalidGrid("scan needs p2_min < p2_max and at least two points"));
    }
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let p2 = if i + 1 == points {
                hi
            } else {
                lo * (step * i as f64).exp()
            };
            Ok(PropagatorPoint {
                p2,
                value: kg_propagator(p2, m, c, eps)?,
            })
        })
        .collect()
}

/// Peak locations of `|K|` in a scan: each sign change of the real
/// denominator between neighbours is refined by bisection.
pub fn locate_peaks(scan: &[PropagatorPoint], m: f64, c: &CutoffPolynomial) -> Vec<f64> {
    let mut peaks = Vec::new();
    for w in scan.windows(2) {
        let (mut lo, mut hi) = (w[0].p2, w[1].p2);
        let mut d_lo = kg_denominator(lo, m, c);
        let d_hi = kg_denominator(hi, m, c);
        if d_lo == 0.0 {
            peaks.push(lo);
            continue;
        }
        if d_lo.signum() == d_hi.signum() || d_hi == 0.0 {
            continue;
        }
        while hi - lo > 4.0 * f64::EPSILON * hi {
            let mid = 0.5 * (lo + hi);
            let d = kg_denominator(mid, m, c);
            if d == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if d.signum() == d_lo.signum() {
                lo = mid;
                d_lo = d;
            } else {
                hi = mid;
            }
        }
        peaks.push(0.5 * (lo + hi));
    }
    if let Some(last) = scan.last() {
        if kg_denominator(last.p2, m, c) == 0.0 {
            peaks.push(last.p2);
        }
    }
    peaks
}

/// A pole of `K` certified by the root finder and checked by a local fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleCheck {
    pub x: f64,
    /// Pole position `m² x` in `p²`.
    pub p2: f64,
    /// `1/g'(x)`: residue of `K` in `p²`, and of `1/(g(x) - 1)` in `x`.
    pub residue_p2: f64,
    /// Residue of `K` itself in the variable `x`, `1/(m² g'(x))`.
    pub residue_x: f64,
    /// Intercept of the local fit of `(p² - pole) K`, absent for multiple roots.
    pub fitted_residue: Option<f64>,
    pub fit_residual: Option<f64>,
}

impl PoleCheck {
    pub fn fit_passes(&self) -> bool {
        self.fit_residual.is_some_and(|r| r < POLE_FIT_RESIDUAL)
            && self
                .fitted_residue
                .is_some_and(|r| ((r - self.residue_p2) / self.residue_p2).abs() < POLE_FIT_RESIDUAL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleReport {
    pub solution: SpectrumSolution,
    pub poles: Vec<PoleCheck>,
}

impl PoleReport {
    pub fn all_fits_pass(&self) -> bool {
        self.poles.iter().all(|p| p.fitted_residue.is_none() || p.fit_passes())
    }
}

/// Poles of `K` at `p² = m² x_i` for every positive root of `g(x) = 1`.
pub fn find_poles(m: f64, c: &CutoffPolynomial) -> Result<PoleReport> {
    let solution = masses_from_lambdas(c, m)?;
    let xs: Vec<f64> = solution.physical().map(|r| r.x).collect();
    let mut poles = Vec::with_capacity(xs.len());
    for (i, r) in solution.physical().enumerate() {
        let p2 = m * m * r.x;
        let residue_p2 = 1.0 / r.g_prime;
        let (fitted_residue, fit_residual) = if r.flags.degenerate {
            (None, None)
        } else {
            // keep the stencil well clear of neighbouring poles
            let mut gap = f64::INFINITY;
            if i > 0 {
                gap = gap.min(r.x - xs[i - 1]);
            }
            if i + 1 < xs.len() {
                gap = gap.min(xs[i + 1] - r.x);
            }
            let delta = (1e-5 * r.x).min(0.02 * gap) * m * m;
            let (res, resid) = fit_residue(|p2| kg_denominator(p2, m, c), p2, delta);
            (Some(res), Some(resid))
        };
        poles.push(PoleCheck {
            x: r.x,
            p2,
            residue_p2,
            residue_x: residue_p2 / (m * m),
            fitted_residue,
            fit_residual,
        });
    }
    Ok(PoleReport { solution, poles })
}

/// Least-squares cubic through `h / D(pole + h)` at `h = ±1..±4 δ`; returns
/// the intercept and the RMS misfit relative to it.
fn fit_residue<D: Fn(f64) -> f64>(denominator: D, pole: f64, delta: f64) -> (f64, f64) {
    const STEPS: [f64; 8] = [-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0];
    let samples: Vec<(f64, f64)> = STEPS
        .iter()
        .map(|&t| {
            let h = t * delta;
            (t, h / denominator(pole + h))
        })
        .collect();
    let coeffs = least_squares_poly::<4>(&samples);
    let misfit = compensated_sum(samples.iter().map(|&(t, y)| {
        let fit = ((coeffs[3] * t + coeffs[2]) * t + coeffs[1]) * t + coeffs[0];
        (y - fit) * (y - fit)
    }));
    let rms = (misfit / samples.len() as f64).sqrt();
    (coeffs[0], rms / coeffs[0].abs())
}

/// Polynomial least squares of degree `N - 1` by normal equations with partial pivoting.
fn least_squares_poly<const N: usize>(samples: &[(f64, f64)]) -> [f64; N] {
    let mut a = [[0.0; N]; N];
    let mut b = [0.0; N];
    for &(t, y) in samples {
        let mut pow = [1.0; N];
        for k in 1..N {
            pow[k] = pow[k - 1] * t;
        }
        for r in 0..N {
            b[r] += pow[r] * y;
            for col in 0..N {
                a[r][col] += pow[r] * pow[col];
            }
        }
    }
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col];
        for r in col + 1..N {
            let factor = a[r][col] / pivot_row[col];
            for (v, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= factor * p;
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = [0.0; N];
    for r in (0..N).rev() {
        let s: f64 = (r + 1..N).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Numerator of the scalarised self-energy proxy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Numerator {
    /// `N = 1`, the coefficient of `p̸`.
    Scalar,
    /// `N = m sqrt(1 + f(-k²/m²))`, the coefficient of the identity.
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LoopVariant {
    /// Use the cutoff polynomial; `false` evaluates with `f ≡ 0`.
    pub modified: bool,
    pub numerator: Numerator,
}

impl LoopVariant {
    pub const ALL: [LoopVariant; 4] = [
        LoopVariant {
            modified: false,
            numerator: Numerator::Scalar,
        },
        LoopVariant {
            modified: false,
            numerator: Numerator::Mass,
        },
        LoopVariant {
            modified: true,
            numerator: Numerator::Scalar,
        },
        LoopVariant {
            modified: true,
            numerator: Numerator::Mass,
        },
    ];

    pub fn name(&self) -> &'static str {
        match (self.modified, self.numerator) {
            (false, Numerator::Scalar) => "unmodified_scalar",
            (false, Numerator::Mass) => "unmodified_mass",
            (true, Numerator::Scalar) => "modified_scalar",
            (true, Numerator::Mass) => "modified_mass",
        }
    }
}

/// Large-cutoff behaviour of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    /// `I(Λ) ≈ α + β ln Λ`.
    pub log_intercept: f64,
    pub log_slope: f64,
    pub log_r2: f64,
    /// Slope of `ln |I(Λ_{k+1}) - I(Λ_k)|` against `ln Λ_k`.
    pub power_exponent: f64,
    pub power_r2: f64,
    /// `ΔI_{k+1} / ΔI_k` for consecutive increments.
    pub increment_ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopSeries {
    pub variant: LoopVariant,
    /// `I(Λ_k)` for every cutoff.
    pub values: Vec<f64>,
    /// `I(Λ_{k+1}) - I(Λ_k)`, each integrated directly over its shell.
    pub increments: Vec<f64>,
    /// Quadrature error estimates accumulated into each value.
    pub errors: Vec<f64>,
    pub tail: TailFit,
}

impl LoopSeries {
    /// Whether `|ΔI|` strictly decreases across shells starting above `lambda`.
    pub fn increments_shrink_beyond(&self, cutoffs: &[f64], lambda: f64) -> bool {
        let tail: Vec<f64> = self
            .increments
            .iter()
            .zip(cutoffs)
            .filter(|(_, &c)| c > lambda)
            .map(|(d, _)| d.abs())
            .collect();
        tail.windows(2).all(|w| w[1] < w[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopResult {
    pub p_e: f64,
    pub m: f64,
    pub lambdas: CutoffPolynomial,
    pub cutoffs: Vec<f64>,
    pub series: Vec<LoopSeries>,
}

impl LoopResult {
    pub fn series(&self, variant: LoopVariant) -> Option<&LoopSeries> {
        self.series.iter().find(|s| s.variant == variant)
    }
}

/// Whether `k² + m²(1 + f(-k²/m²))` is positive for all `k` by the sign of every monomial.
pub fn euclidean_positive_symbolic(c: &CutoffPolynomial) -> bool {
    c.lambda1 <= 0.0 && c.lambda2 >= 0.0 && c.lambda3 <= 0.0
}

/// Rejects a zero of `1 + y + f(-y)` (and, for the mass numerator, of
/// `1 + f(-y)`) with `y = k²/m²` in `(0, k_max²/m²]`.
pub fn check_euclidean_denominator(c: &CutoffPolynomial, m: f64, k_max: f64, numerator: Numerator) -> Result<()> {
    if euclidean_positive_symbolic(c) {
        return Ok(());
    }
    let y_max = (k_max / m).powi(2);
    let first_zero = |cubic: Cubic| cubic.roots().real.into_iter().find(|&y| y > 0.0 && y <= y_max);
    let denominator = Cubic {
        c3: -c.lambda3,
        c2: c.lambda2,
        c1: 1.0 - c.lambda1,
        c0: 1.0,
    };
    if let Some(y) = first_zero(denominator) {
        return Err(Error::NonPositiveDenominator { k: m * y.sqrt() });
    }
    if numerator == Numerator::Mass {
        let mass_sq = Cubic {
            c3: -c.lambda3,
            c2: c.lambda2,
            c1: -c.lambda1,
            c0: 1.0,
        };
        if let Some(y) = first_zero(mass_sq) {
            return Err(Error::Domain {
                what: "1 + f(-k²/m²) turns negative at this k",
                value: m * y.sqrt(),
            });
        }
    }
    Ok(())
}

/// Radial integrand `k³ N(k) / [(k² + m²(1 + f(-k²/m²))) max(pE², k²)]`.
fn loop_integrand(k: f64, p_e: f64, m: f64, c: &CutoffPolynomial, numerator: Numerator) -> f64 {
    let y = (k / m) * (k / m);
    let one_plus_f = 1.0 + c.f(-y);
    let n = match numerator {
        Numerator::Scalar => 1.0,
        Numerator::Mass => m * one_plus_f.max(0.0).sqrt(),
    };
    let k2 = k * k;
    // k³/(m² h k²) split to stay finite for large y
    let denominator = m * m * (y + one_plus_f);
    k * (k2 / denominator) * n / p_e.max(k).powi(2)
}

/// `I(Λ)` at every cutoff for each requested variant.
///
/// Breaks sit at `pE`, at `m sqrt(x_i)` for the positive roots of the
/// mass condition, and on a ladder of factor 4 from `10⁻³ min(m, pE)`.
pub fn loop_integral(
    p_e: f64,
    m: f64,
    c: &CutoffPolynomial,
    cutoffs: &[f64],
    variants: &[LoopVariant],
) -> Result<LoopResult> {
    let p_e = ensure_positive("external momentum pE", p_e)?;
    let m = ensure_positive("base mass", m)?;
    if cutoffs.is_empty() || cutoffs[0] <= 0.0 || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("cutoffs must be positive and strictly increasing"));
    }
    let k_max = *cutoffs.last().unwrap_or(&0.0);
    let mut special: Vec<f64> = Vec::new();
    special.push(p_e);
    let roots = masses_from_lambdas(c, m)?;
    special.extend(roots.physical().map(|r| m * r.x.sqrt()));
    let mut k = 1e-3 * m.min(p_e);
    while k < k_max {
        special.push(k);
        k *= 4.0;
    }
    special.sort_by(f64::total_cmp);

    let zero = CutoffPolynomial::zero();
    let tol = Tolerance::relative(1e-11);
    let mut series = Vec::with_capacity(variants.len());
    for &variant in variants {
        let poly = if variant.modified { *c } else { zero };
        check_euclidean_denominator(&poly, m, k_max, variant.numerator)?;
        let f = |k: f64| loop_integrand(k, p_e, m, &poly, variant.numerator);
        let mut shells = Vec::with_capacity(cutoffs.len());
        let mut errs = Vec::with_capacity(cutoffs.len());
        let mut lower = 0.0;
        for &upper in cutoffs {
            let mut points = Vec::new();
            points.push(lower);
            points.extend(special.iter().copied().filter(|&s| s > lower && s < upper));
            points.push(upper);
            let r = integrate_with_breaks(f, &points, tol)?;
            shells.push(r.value);
            errs.push(r.error);
            lower = upper;
        }
        let mut values = Vec::with_capacity(shells.len());
        let mut errors = Vec::with_capacity(shells.len());
        for i in 0..shells.len() {
            values.push(compensated_sum(shells[..=i].iter().copied()));
            errors.push(errs[..=i].iter().sum());
        }
        let increments = shells[1..].to_vec();
        let tail = tail_fit(cutoffs, &values, &increments);
        series.push(LoopSeries {
            variant,
            values,
            increments,
            errors,
            tail,
        });
    }
    Ok(LoopResult {
        p_e,
        m,
        lambdas: *c,
        cutoffs: cutoffs.to_vec(),
        series,
    })
}

/// `count` cutoffs doubling from `start`.
pub fn octave_cutoffs(start: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start * (i as f64).exp2()).collect()
}

fn tail_fit(cutoffs: &[f64], values: &[f64], increments: &[f64]) -> TailFit {
    let logs: Vec<f64> = cutoffs.iter().map(|c| c.ln()).collect();
    let (log_intercept, log_slope, log_r2) = linear_fit(&logs, values);
    let pairs: Vec<(f64, f64)> = increments
        .iter()
        .zip(&logs)
        .filter(|(d, _)| **d != 0.0)
        .map(|(d, l)| (*l, d.abs().ln()))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let (_, power_exponent, power_r2) = linear_fit(&xs, &ys);
    let increment_ratios = increments.windows(2).map(|w| w[1] / w[0]).collect();
    TailFit {
        log_intercept,
        log_slope,
        log_r2,
        power_exponent,
        power_r2,
        increment_ratios,
    }
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, R²)`, NaN when underdetermined.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len().min(y.len());
    if n < 2 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let mx = compensated_sum(x[..n].iter().copied()) / nf;
    let my = compensated_sum(y[..n].iter().copied()) / nf;
    let sxx = compensated_sum(x[..n].iter().map(|v| (v - mx) * (v - mx)));
    let sxy = compensated_sum(x[..n].iter().zip(&y[..n]).map(|(a, b)| (a - mx) * (b - my)));
    let syy = compensated_sum(y[..n].iter().map(|v| (v - my) * (v - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (intercept, slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Preset;

    #[test]
    fn free_propagator_values() {
        let zero = CutoffPolynomial::zero();
        let k = kg_propagator(0.0, 1.0, &zero, 1e-12).unwrap();
        assert!((k - Complex64::new(-1.0, 0.0)).norm() < 1e-11);
        let near = kg_propagator(1.0 + 1e-10, 1.0, &zero, 1e-9).unwrap();
        assert!(near.norm() > 0.5e9);
        assert!(kg_propagator(0.0, 1.0, &zero, 0.0).is_err());
    }

    #[test]
    fn dirac_ratio() {
        let zero = CutoffPolynomial::zero();
        let d = dirac_propagator_scalarized(0.0, 1.0, &zero, 1e-12).unwrap();
        assert!((d.vector_coeff.re + 1.0).abs() < 1e-11 && (d.scalar_coeff.re + 1.0).abs() < 1e-11);
        for p2 in [0.3, 2.0, -5.0] {
            let d = dirac_propagator_scalarized(p2, 2.5, &zero, 1e-9).unwrap();
            assert!(((d.scalar_coeff / d.vector_coeff).re - 2.5).abs() < 1e-12);
        }
        let c = Preset::Table1a.lambdas();
        let m = Preset::Table1a.masses().lightest();
        for r in find_poles(m, &c).unwrap().poles {
            let d = dirac_propagator_scalarized(r.p2, m, &c, 1e-9 * m * m).unwrap();
            let ratio = (d.scalar_coeff / d.vector_coeff).re;
            assert!((ratio / (m * r.x.sqrt()) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn imaginary_mass_is_reported() {
        let c = CutoffPolynomial::new(-2.0, 0.0, 0.0).unwrap();
        let d = dirac_propagator_scalarized(1.0, 1.0, &c, 1e-9).unwrap();
        assert!(!d.mass_is_real());
    }

    #[test]
    fn free_pole_has_unit_residue() {
        let report = find_poles(1.0, &CutoffPolynomial::zero()).unwrap();
        assert_eq!(report.poles.len(), 1);
        let p = report.poles[0];
        assert!((p.p2 - 1.0).abs() < 1e-15);
        assert!((p.fitted_residue.unwrap() - 1.0).abs() < 1e-9);
        assert!(p.fit_passes());
    }

    #[test]
    fn degenerate_poles_are_flagged() {
        let c = CutoffPolynomial::new(-2.0, 3.0, -1.0).unwrap();
        let report = find_poles(1.0, &c).unwrap();
        assert!(report.solution.is_degenerate());
        assert!(report.poles[0].fitted_residue.is_none());
    }

    #[test]
    fn scan_peaks_match_roots() {
        let preset = Preset::Table3;
        let c = preset.lambdas();
        let m = preset.masses().lightest();
        let scan = scan_kg(0.1 * m * m, 10.0 * 1.77f64.powi(2), 4000, m, &c, DEFAULT_EPS * m * m).unwrap();
        let peaks = locate_peaks(&scan, m, &c);
        let report = find_poles(m, &c).unwrap();
        assert_eq!(peaks.len(), 3);
        for (peak, pole) in peaks.iter().zip(&report.poles) {
            assert!((peak / pole.p2 - 1.0).abs() < 1e-6);
        }
        for (x, expect) in report.poles.iter().zip([1.0, 4.27e4, 1.20e7]) {
            assert!((x.x / expect - 1.0).abs() < 5e-3);
        }
    }

    #[test]
    fn positivity_checks() {
        assert!(euclidean_positive_symbolic(&Preset::Table3.lambdas()));
        let bad = CutoffPolynomial::new(0.0, -1.0, 0.0).unwrap();
        match check_euclidean_denominator(&bad, 1.0, 100.0, Numerator::Scalar) {
            Err(Error::NonPositiveDenominator { k }) => {
                let y = k * k;
                assert!((1.0 + y - y * y).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_euclidean_denominator(&bad, 1.0, 1.0, Numerator::Scalar).is_ok());
    }

    #[test]
    fn linear_fit_exact_line() {
        let (a, b, r2) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((a - 1.0).abs() < 1e-15 && (b - 2.0).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn least_squares_recovers_cubic() {
        let s: Vec<(f64, f64)> = [-2.0, -1.0, 0.5, 1.0, 3.0]
            .iter()
            .map(|&t: &f64| (t, 1.0 - t + 0.5 * t * t * t))
            .collect();
        let c = least_squares_poly::<4>(&s);
        for (got, want) in c.iter().zip([1.0, -1.0, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
