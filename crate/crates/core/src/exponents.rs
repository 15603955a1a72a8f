//! Logarithmic characteristics of symmetric infinitely divisible laws.
//!
//! Natural units throughout: masses in GeV, lengths and times in 1/GeV.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::density::levy_density_1d;
use crate::error::{ensure_positive, Error, Result};
use crate::quad::{integrate_with_breaks, Tolerance};

/// Length scale `a`, time scale `tau` and base mass `m` of the relativistic law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentParams {
    a: f64,
    tau: f64,
    m: f64,
}

impl ExponentParams {
    pub fn new(a: f64, tau: f64, m: f64) -> Result<Self> {
        Ok(Self {
            a: ensure_positive("length scale a", a)?,
            tau: ensure_positive("time scale tau", tau)?,
            m: ensure_positive("mass m", m)?,
        })
    }

    /// `a = tau = 1/m` (Compton length and time with hbar = c = 1).
    pub fn from_mass(m: f64) -> Result<Self> {
        let m = ensure_positive("mass m", m)?;
        Ok(Self {
            a: 1.0 / m,
            tau: 1.0 / m,
            m,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Gaussian coefficient `beta^2 = alpha tau / m` with the action `alpha = hbar = 1`.
    pub fn beta2(&self) -> f64 {
        self.tau / self.m
    }

    /// Parameters of the branch with mass `M = m sqrt(root_x)`: both scales shrink by `sqrt(root_x)`.
    pub fn rescaled(&self, root_x: f64) -> Result<Self> {
        let root_x = ensure_positive("spectrum root x", root_x)?;
        let s = root_x.sqrt();
        Ok(Self {
            a: self.a / s,
            tau: self.tau / s,
            m: self.m * s,
        })
    }
}

/// A real, even exponent `u -> eta(u)` with `eta(0) = 0` and `eta <= 0`.
pub trait LogCharacteristic {
    fn eta(&self, u: f64) -> f64;
}

impl<F: Fn(f64) -> f64> LogCharacteristic for F {
    fn eta(&self, u: f64) -> f64 {
        self(u)
    }
}

/// The relativistic exponent `1 - sqrt(1 + a^2 u^2)` of these parameters.
impl LogCharacteristic for ExponentParams {
    fn eta(&self, u: f64) -> f64 {
        eta_relativistic(u, self)
    }
}

/// Pure Gaussian exponent `-beta2 u^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianExponent {
    pub beta2: f64,
}

impl LogCharacteristic for GaussianExponent {
    fn eta(&self, u: f64) -> f64 {
        -0.5 * self.beta2 * u * u
    }
}

pub fn eta_relativistic(u: f64, params: &ExponentParams) -> f64 {
    let au = params.a * u;
    let s = au * au;
    // 1 - sqrt(1 + s), without the cancellation at small s
    -s / (1.0 + (1.0 + s).sqrt())
}

/// Kinetic energy `sqrt(m^2 + p^2) - m`.
pub fn kinetic_energy(p: f64, m: f64) -> Result<f64> {
    let m = ensure_positive("mass m", m)?;
    let p2 = p * p;
    Ok(p2 / ((m * m + p2).sqrt() + m))
}

/// Relativistic exponent of the branch mass `M = m sqrt(root_x)`.
pub fn eta_modified_branch(u: f64, base: &ExponentParams, root_x: f64) -> Result<f64> {
    Ok(eta_relativistic(u, &base.rescaled(root_x)?))
}

/// An even, nonnegative jump density with a characteristic length.
///
/// Implementors assert `∫ min(x², 1) W(x) dx < ∞`; the quadrature checks the
/// tail numerically and reports divergence.
pub trait JumpDensity {
    fn density(&self, x: f64) -> f64;

    /// Length where the density changes regime; used to place quadrature panels.
    fn scale(&self) -> f64;
}

/// No jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoJumps;

impl JumpDensity for NoJumps {
    fn density(&self, _x: f64) -> f64 {
        0.0
    }

    fn scale(&self) -> f64 {
        1.0
    }
}

/// The Bessel kernel `K1(|x|/a) / (pi |x|)` of the relativistic process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativisticKernel(pub ExponentParams);

impl JumpDensity for RelativisticKernel {
    fn density(&self, x: f64) -> f64 {
        levy_density_1d(x, &self.0).unwrap_or(f64::INFINITY)
    }

    fn scale(&self) -> f64 {
        self.0.a
    }
}

/// Drift, Gaussian coefficient and jump density of a Lévy law.
///
/// Only the symmetric case is evaluated; `gamma` is carried for completeness.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyTriplet<W> {
    pub gamma: f64,
    pub beta2: f64,
    pub jump: W,
}

impl<W: JumpDensity> LevyTriplet<W> {
    pub fn new(gamma: f64, beta2: f64, jump: W) -> Result<Self> {
        if !(beta2 >= 0.0) {
            return Err(Error::Domain {
                what: "Gaussian coefficient beta^2 must be nonnegative",
                value: beta2,
            });
        }
        Ok(Self { gamma, beta2, jump })
    }
}

impl LevyTriplet<RelativisticKernel> {
    /// The pure-jump triplet of the relativistic process.
    pub fn relativistic(params: ExponentParams) -> Self {
        Self {
            gamma: 0.0,
            beta2: 0.0,
            jump: RelativisticKernel(params),
        }
    }
}

/// Quadrature policy for the jump integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpQuadrature {
    pub tolerance: Tolerance,
    /// Doubling panels beyond the kernel scale before declaring divergence.
    pub max_panels: usize,
}

impl Default for JumpQuadrature {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::relative(1e-10),
            max_panels: 64,
        }
    }
}

// Panels with more than this many radians of oscillation drop the cosine
// part and carry its bound in the error instead.
const OSCILLATION_CUTOFF: f64 = 2000.0;

/// `-beta^2 u^2 / 2 + ∫ (cos ux - 1) W(x) dx` for a symmetric triplet.
pub fn eta_from_triplet<W: JumpDensity>(u: f64, triplet: &LevyTriplet<W>, policy: &JumpQuadrature) -> Result<f64> {
    let gaussian = -0.5 * triplet.beta2 * u * u;
    if u == 0.0 {
        return Ok(0.0);
    }
    let w = &triplet.jump;
    let s = w.scale();
    // 1 - cos(ux) = 2 sin^2(ux/2), keeps the small-x product well conditioned
    let integrand = |x: f64| {
        let h = (0.5 * u * x).sin();
        -2.0 * h * h * w.density(x)
    };

    // Geometric panels towards the origin act like a logarithmic substitution.
    let mut breaks: Vec<f64> = (0..=40).rev().map(|j| s * (-(j as f64)).exp2()).collect();
    breaks.insert(0, 0.0);
    let core = integrate_with_breaks(integrand, &breaks, policy.tolerance)?;
    let mut total = core.value;
    let mut partial_sums = Vec::new();
    partial_sums.push(2.0 * total);

    let mut lo = s;
    let mut quiet_panels = 0;
    for _ in 0..policy.max_panels {
        let hi = 2.0 * lo;
        let tol = policy.tolerance.with_abs(0.1 * policy.tolerance.rel * total.abs());
        let piece = if u.abs() * lo > OSCILLATION_CUTOFF {
            integrate_with_breaks(|x| -w.density(x), &[lo, hi], tol)?.value
        } else {
            integrate_with_breaks(integrand, &[lo, hi], tol)?.value
        };
        total += piece;
        partial_sums.push(2.0 * total);
        if piece.abs() <= policy.tolerance.rel * total.abs() {
            quiet_panels += 1;
            if quiet_panels >= 2 {
                return Ok(gaussian + 2.0 * total);
            }
        } else {
            quiet_panels = 0;
        }
        lo = hi;
    }
    if total == 0.0 {
        return Ok(gaussian);
    }
    Err(Error::DivergentTail { partial_sums })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ExponentParams {
        ExponentParams::from_mass(1.0).unwrap()
    }

    #[test]
    fn relativistic_values() {
        let p = unit();
        assert_eq!(eta_relativistic(0.0, &p), 0.0);
        assert!((eta_relativistic(3f64.sqrt(), &p) + 1.0).abs() < 1e-15);
        // quadratic Taylor term plus the quartic correction a^4 u^4 / 8 = 1.25e-9
        let x: f64 = 1e-4;
        assert!((eta_relativistic(0.01, &p) - (-0.5 * x + 0.125 * x * x)).abs() < 1e-9);
        assert!((eta_relativistic(0.01, &p) + 5e-5).abs() < 1.3e-9);
    }

    #[test]
    fn kinetic_energy_values() {
        assert_eq!(kinetic_energy(0.0, 1.0).unwrap(), 0.0);
        assert!((kinetic_energy(3f64.sqrt(), 1.0).unwrap() - 1.0).abs() < 1e-15);
        // p^2/2m with the first relativistic correction -p^4/8m^3
        let p2: f64 = 1e-6;
        assert!((kinetic_energy(1e-3, 1.0).unwrap() - (0.5 * p2 - 0.125 * p2 * p2)).abs() < 1e-13);
        assert!(kinetic_energy(1.0, 0.0).is_err());
    }

    #[test]
    fn modified_branch_values() {
        let p = unit();
        for u in [0.0, 0.3, 2.0, -7.0] {
            assert_eq!(eta_modified_branch(u, &p, 1.0).unwrap(), eta_relativistic(u, &p));
        }
        let want = 1.0 - 1.25f64.sqrt();
        assert!((eta_modified_branch(1.0, &p, 4.0).unwrap() - want).abs() < 1e-15);
        assert!(eta_modified_branch(1.0, &p, 0.0).is_err());
        assert!(eta_modified_branch(1.0, &p, -2.0).is_err());
    }

    #[test]
    fn from_mass_sets_compton_scales() {
        let p = ExponentParams::from_mass(4.0).unwrap();
        assert_eq!(p.a(), 0.25);
        assert_eq!(p.tau(), 0.25);
        assert!(ExponentParams::new(1.0, -1.0, 1.0).is_err());
        assert!(ExponentParams::from_mass(f64::NAN).is_err());
    }

    #[test]
    fn triplet_pure_gaussian() {
        let t = LevyTriplet::new(0.0, 2.0, NoJumps).unwrap();
        let eta = eta_from_triplet(3.0, &t, &JumpQuadrature::default()).unwrap();
        assert!((eta + 9.0).abs() < 1e-12);
        assert_eq!(eta_from_triplet(0.0, &t, &JumpQuadrature::default()).unwrap(), 0.0);
        assert!(LevyTriplet::new(0.0, -1.0, NoJumps).is_err());
    }

    #[test]
    fn triplet_relativistic_kernel_matches_closed_form() {
        let p = unit();
        let t = LevyTriplet::relativistic(p);
        let eta = eta_from_triplet(1.0, &t, &JumpQuadrature::default()).unwrap();
        assert!((eta - (1.0 - 2f64.sqrt())).abs() < 1e-8, "{eta}");
    }

    struct Harmonic;
    impl JumpDensity for Harmonic {
        fn density(&self, x: f64) -> f64 {
            1.0 / x.abs()
        }
        fn scale(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn divergent_tail_is_reported() {
        let t = LevyTriplet::new(0.0, 0.0, Harmonic).unwrap();
        match eta_from_triplet(1.0, &t, &JumpQuadrature::default()) {
            Err(Error::DivergentTail { partial_sums }) => {
                assert_eq!(partial_sums.len(), 65);
                assert!(partial_sums.windows(2).all(|w| w[1] < w[0]));
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
