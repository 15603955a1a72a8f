//! Cubic cutoff `f(x) = λ1 x + λ2 x² + λ3 x³`, the mass condition
//! `g(x) = x - f(x) = 1`, and conversions between cutoff coefficients, roots
//! and masses `M = m sqrt(x)`.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::cubic::Cubic;
use crate::error::{ensure_positive, Error, Result};

/// Roots whose ratio is within this of 1 raise a near-coincidence warning.
pub const NEAR_COINCIDENT: f64 = 1e-6;
/// `|g'(x)|` below this marks a multiple root.
pub const DEGENERATE_SLOPE: f64 = 1e-12;
/// Polished roots satisfy `|g(x) - 1| <= ROOT_RESIDUAL * max(1, x)`.
pub const ROOT_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CutoffPolynomial {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl CutoffPolynomial {
    pub fn new(lambda1: f64, lambda2: f64, lambda3: f64) -> Result<Self> {
        for v in [lambda1, lambda2, lambda3] {
            if !v.is_finite() {
                return Err(Error::Domain {
                    what: "cutoff coefficients must be finite",
                    value: v,
                });
            }
        }
        Ok(Self {
            lambda1,
            lambda2,
            lambda3,
        })
    }

    /// `f ≡ 0`, the unmodified theory.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.lambda1 == 0.0 && self.lambda2 == 0.0 && self.lambda3 == 0.0
    }

    pub fn f(&self, x: f64) -> f64 {
        ((self.lambda3 * x + self.lambda2) * x + self.lambda1) * x
    }

    pub fn f_prime(&self, x: f64) -> f64 {
        (3.0 * self.lambda3 * x + 2.0 * self.lambda2) * x + self.lambda1
    }

    pub fn g(&self, x: f64) -> f64 {
        x - self.f(x)
    }

    pub fn g_prime(&self, x: f64) -> f64 {
        1.0 - self.f_prime(x)
    }

    /// `λ3 x³ + λ2 x² + (λ1 - 1) x + 1`, which vanishes exactly where `g(x) = 1`.
    pub fn mass_condition(&self) -> Cubic {
        Cubic {
            c3: self.lambda3,
            c2: self.lambda2,
            c1: self.lambda1 - 1.0,
            c0: 1.0,
        }
    }

    /// True for the sign pattern `λ1 < 0, λ2 > 0, λ3 < 0` of all tabulated fits.
    pub fn has_table_signs(&self) -> bool {
        self.lambda1 < 0.0 && self.lambda2 > 0.0 && self.lambda3 < 0.0
    }
}

pub fn f_eval(x: f64, c: &CutoffPolynomial) -> f64 {
    c.f(x)
}

pub fn g_eval(x: f64, c: &CutoffPolynomial) -> f64 {
    c.g(x)
}

/// Three family masses, ascending, in GeV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassTriple {
    masses: [f64; 3],
}

impl MassTriple {
    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        ensure_positive("mass", m1)?;
        ensure_positive("mass", m2)?;
        ensure_positive("mass", m3)?;
        if !(m1 <= m2 && m2 <= m3) {
            return Err(Error::Domain {
                what: "masses must be ascending",
                value: m2,
            });
        }
        Ok(Self { masses: [m1, m2, m3] })
    }

    pub fn masses(&self) -> [f64; 3] {
        self.masses
    }

    pub fn lightest(&self) -> f64 {
        self.masses[0]
    }

    pub fn heaviest(&self) -> f64 {
        self.masses[2]
    }
}

/// Which mass anchors `m` in `M_i = m sqrt(x_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BaseMass {
    /// `m = m1`, so `x1 = 1`.
    #[default]
    Lightest,
    Explicit(f64),
}

impl BaseMass {
    pub fn resolve(&self, masses: &MassTriple) -> Result<f64> {
        match *self {
            BaseMass::Lightest => Ok(masses.lightest()),
            BaseMass::Explicit(m) => ensure_positive("base mass", m),
        }
    }
}

/// Cutoff whose mass condition has roots `x1, x2, x3`.
pub fn lambdas_from_roots(x1: f64, x2: f64, x3: f64) -> Result<CutoffPolynomial> {
    let xs = [x1, x2, x3];
    for x in xs {
        ensure_positive("spectrum root", x)?;
    }
    let [r1, r2, r3] = xs.map(|x| 1.0 / x);
    let c = CutoffPolynomial::new(1.0 - (r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -(r1 * r2 * r3))?;
    let cubic = c.mass_condition();
    for x in xs {
        let residual = cubic.eval(x).abs();
        // when the terms cancel at a far root, rounding of the evaluation sets the floor
        let floor = 64.0 * f64::EPSILON * cubic.magnitude(x);
        if residual > (ROOT_RESIDUAL * x.max(1.0)).max(floor) {
            return Err(Error::Domain {
                what: "cutoff does not reproduce the requested root",
                value: x,
            });
        }
    }
    Ok(c)
}

/// Cutoff placing poles at the given masses; `x_i = (M_i / m)²`.
pub fn lambdas_from_masses(masses: &MassTriple, base: BaseMass) -> Result<CutoffPolynomial> {
    let m = base.resolve(masses)?;
    let [x1, x2, x3] = masses.masses().map(|mi| (mi / m) * (mi / m));
    lambdas_from_roots(x1, x2, x3)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RootFlags {
    pub real: bool,
    pub positive: bool,
    pub residue_positive: bool,
    pub degenerate: bool,
}

/// One real solution of `g(x) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRoot {
    pub x: f64,
    pub multiplicity: u8,
    /// `m sqrt(x)` when a base mass is known and `x > 0`.
    pub mass: Option<f64>,
    /// `1 / g'(x)`, absent for multiple roots.
    pub residue: Option<f64>,
    pub g_prime: f64,
    pub flags: RootFlags,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumWarning {
    /// Two roots with ratio within [`NEAR_COINCIDENT`] of one.
    NearCoincident { x1: f64, x2: f64 },
    /// A complex-conjugate pair `re ± i im` has no physical mass.
    ComplexPair { re: f64, im: f64 },
    /// A root with `|g'(x)| < 1e-12`.
    Degenerate { x: f64 },
    /// No real root at all.
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSolution {
    pub lambdas: CutoffPolynomial,
    pub base_mass: Option<f64>,
    /// Real roots, ascending.
    pub roots: Vec<SpectrumRoot>,
    pub discriminant: f64,
    pub warnings: Vec<SpectrumWarning>,
}

impl SpectrumSolution {
    pub fn is_degenerate(&self) -> bool {
        self.roots.iter().any(|r| r.flags.degenerate)
    }

    /// Roots that are real and strictly positive, i.e. physical mass branches.
    pub fn physical(&self) -> impl Iterator<Item = &SpectrumRoot> {
        self.roots.iter().filter(|r| r.flags.positive)
    }

    pub fn masses(&self) -> Vec<f64> {
        self.roots.iter().filter_map(|r| r.mass).collect()
    }
}

/// Real roots of `g(x) = 1`, polished, with multiplicities and diagnostics.
pub fn roots_from_lambdas(c: &CutoffPolynomial) -> SpectrumSolution {
    let cubic = c.mass_condition();
    let raw = cubic.roots();
    let mut warnings = Vec::new();
    let mut roots: Vec<SpectrumRoot> = Vec::new();
    for x in raw.real {
        let slope = c.g_prime(x);
        if let Some(prev) = roots.last_mut() {
            let close = (x - prev.x).abs() <= NEAR_COINCIDENT * x.abs().max(prev.x.abs());
            if close && (slope.abs() < DEGENERATE_SLOPE || prev.g_prime.abs() < DEGENERATE_SLOPE) {
                prev.multiplicity += 1;
                prev.flags.degenerate = true;
                continue;
            }
            if close {
                warnings.push(SpectrumWarning::NearCoincident { x1: prev.x, x2: x });
            }
        }
        roots.push(SpectrumRoot {
            x,
            multiplicity: 1,
            mass: None,
            residue: None,
            g_prime: slope,
            flags: RootFlags {
                real: true,
                positive: x > 0.0,
                residue_positive: false,
                degenerate: slope.abs() < DEGENERATE_SLOPE,
            },
        });
    }
    for r in &roots {
        if r.flags.degenerate {
            warnings.push(SpectrumWarning::Degenerate { x: r.x });
        }
    }
    if let Some(z) = raw.complex {
        warnings.push(SpectrumWarning::ComplexPair { re: z.re, im: z.im });
    }
    if roots.is_empty() {
        warnings.push(SpectrumWarning::Empty);
    }
    SpectrumSolution {
        lambdas: *c,
        base_mass: None,
        roots,
        discriminant: raw.discriminant,
        warnings,
    }
}

/// Full spectrum for base mass `m`: masses `m sqrt(x_i)` and residues `1/g'(x_i)`.
pub fn masses_from_lambdas(c: &CutoffPolynomial, m: f64) -> Result<SpectrumSolution> {
    let m = ensure_positive("base mass", m)?;
    let mut sol = roots_from_lambdas(c);
    sol.base_mass = Some(m);
    for r in sol.roots.iter_mut() {
        if r.flags.positive {
            r.mass = Some(m * r.x.sqrt());
        }
        if !r.flags.degenerate {
            let res = 1.0 / r.g_prime;
            r.residue = Some(res);
            r.flags.residue_positive = res > 0.0;
        }
    }
    Ok(sol)
}

/// Residues `1 / g'(x_i)` at simple roots.
pub fn residues(c: &CutoffPolynomial, roots: &[f64]) -> Result<Vec<f64>> {
    roots
        .iter()
        .map(|&x| {
            let d = c.g_prime(x);
            if d.abs() < DEGENERATE_SLOPE {
                Err(Error::DegenerateRoot { x, derivative: d })
            } else {
                Ok(1.0 / d)
            }
        })
        .collect()
}

/// Bundled presets: three family masses in GeV with tabulated coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Charge -1/3 quarks, first estimate.
    Table1a,
    /// Charge -1/3 quarks, second estimate.
    Table1b,
    /// Charge 2/3 quarks, first estimate.
    Table2a,
    /// Charge 2/3 quarks, second estimate.
    Table2b,
    /// Charged leptons.
    Table3,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Table1a,
        Preset::Table1b,
        Preset::Table2a,
        Preset::Table2b,
        Preset::Table3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Table1a => "table1a",
            Preset::Table1b => "table1b",
            Preset::Table2a => "table2a",
            Preset::Table2b => "table2b",
            Preset::Table3 => "table3",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn masses(&self) -> MassTriple {
        let [a, b, c] = match self {
            Preset::Table1a => [3e-3, 70e-3, 4.13],
            Preset::Table1b => [7e-3, 120e-3, 4.27],
            Preset::Table2a => [1.5e-3, 1.16, 171.2],
            Preset::Table2b => [3.0e-3, 1.34, 174.0],
            Preset::Table3 => [5.11e-4, 105.6e-3, 1.77],
        };
        MassTriple { masses: [a, b, c] }
    }

    /// Cutoff coefficients as printed (three significant figures).
    pub fn printed_lambdas(&self) -> CutoffPolynomial {
        let (l1, l2, l3) = match self {
            Preset::Table1a => (-1.84e-3, 1.84e-3, -9.69e-10),
            Preset::Table1b => (-3.41e-3, 3.41e-3, -9.14e-9),
            Preset::Table2a => (-1.67e-6, 1.67e-6, -1.28e-16),
            Preset::Table2b => (-5.01e-6, 5.01e-6, -1.49e-15),
            Preset::Table3 => (-2.35e-5, 2.35e-5, -1.95e-12),
        };
        CutoffPolynomial {
            lambda1: l1,
            lambda2: l2,
            lambda3: l3,
        }
    }

    /// Full-precision cutoff with base mass equal to the lightest member.
    pub fn lambdas(&self) -> CutoffPolynomial {
        lambdas_from_masses(&self.masses(), BaseMass::Lightest).expect("preset masses are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn f_and_g_values() {
        let c = CutoffPolynomial::new(-2.0, 3.0, -1.0).unwrap();
        assert_eq!(f_eval(0.0, &c), 0.0);
        assert_eq!(f_eval(1.0, &c), 0.0);
        assert_eq!(g_eval(1.0, &c), 1.0);
        assert_eq!(g_eval(1.0, &CutoffPolynomial::zero()), 1.0);
        let t3 = Preset::Table3.printed_lambdas();
        assert!((f_eval(1.0, &t3) + 1.95e-12).abs() < 1e-18);
        // The printed three-digit coefficients are too coarse at x = (70/3)²:
        // λ2 x² ≈ 545 there, so rounding λ2 alone moves g by O(1).
        let x = (70.0f64 / 3.0).powi(2);
        let printed = g_eval(x, &Preset::Table1a.printed_lambdas());
        assert!((printed - 0.190_257_724).abs() < 1e-6, "{printed}");
        let full = g_eval(x, &Preset::Table1a.lambdas());
        assert!((full - 1.0).abs() < 5e-3, "{full}");
    }

    #[test]
    fn lambdas_of_unit_roots() {
        let c = lambdas_from_roots(1.0, 1.0, 1.0).unwrap();
        assert_eq!(c, CutoffPolynomial::new(-2.0, 3.0, -1.0).unwrap());
        assert!(lambdas_from_roots(1.0, 0.0, 2.0).is_err());
        assert!(lambdas_from_roots(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn lambdas_match_printed_rows() {
        let c = lambdas_from_roots(1.0, 42704.0, 1.19979e7).unwrap();
        let want = Preset::Table3.printed_lambdas();
        assert!(rel(c.lambda1, want.lambda1) < 5e-3);
        assert!(rel(c.lambda2, want.lambda2) < 5e-3);
        assert!(rel(c.lambda3, want.lambda3) < 5e-3);
        let c = lambdas_from_roots(1.0, 544.4, 1.895e6).unwrap();
        let want = Preset::Table1a.printed_lambdas();
        assert!(rel(c.lambda1, want.lambda1) < 5e-3);
        assert!(rel(c.lambda3, want.lambda3) < 5e-3);
    }

    #[test]
    fn zero_cutoff_has_unit_root() {
        let sol = masses_from_lambdas(&CutoffPolynomial::zero(), 1.0).unwrap();
        assert_eq!(sol.roots.len(), 1);
        assert_eq!(sol.roots[0].x, 1.0);
        assert_eq!(sol.roots[0].mass, Some(1.0));
        assert_eq!(sol.roots[0].residue, Some(1.0));
        assert!(sol.warnings.is_empty());
    }

    #[test]
    fn triple_root_is_degenerate() {
        let c = CutoffPolynomial::new(-2.0, 3.0, -1.0).unwrap();
        let sol = masses_from_lambdas(&c, 1.0).unwrap();
        assert_eq!(sol.roots.len(), 1);
        assert_eq!(sol.roots[0].multiplicity, 3);
        assert!(sol.is_degenerate());
        assert_eq!(sol.roots[0].residue, None);
        assert!(matches!(residues(&c, &[1.0]), Err(Error::DegenerateRoot { .. })));
    }

    #[test]
    fn complex_pair_leaves_one_mass() {
        // λ3 (x-2)(x²-6x+25) with λ3 = -1/50
        let c = CutoffPolynomial::new(0.26, 0.16, -0.02).unwrap();
        let sol = masses_from_lambdas(&c, 1.0).unwrap();
        assert_eq!(sol.roots.len(), 1);
        assert!((sol.roots[0].x - 2.0).abs() < 1e-13);
        assert!((sol.masses()[0] - 2f64.sqrt()).abs() < 1e-13);
        assert!(sol.discriminant < 0.0);
        assert!(sol
            .warnings
            .iter()
            .any(|w| matches!(w, SpectrumWarning::ComplexPair { re, im } if (re - 3.0).abs() < 1e-9 && (im - 4.0).abs() < 1e-9)));
    }

    #[test]
    fn presets_round_trip() {
        for p in Preset::ALL {
            let c = p.lambdas();
            assert!(c.has_table_signs());
            let masses = p.masses();
            let sol = masses_from_lambdas(&c, masses.lightest()).unwrap();
            let got = sol.masses();
            assert_eq!(got.len(), 3, "{p:?}");
            for (g, w) in got.iter().zip(masses.masses()) {
                assert!(rel(*g, w) < 1e-6, "{p:?} {g} {w}");
            }
            for r in &sol.roots {
                assert!(c.mass_condition().eval(r.x).abs() <= ROOT_RESIDUAL * r.x.max(1.0));
            }
        }
    }

    #[test]
    fn explicit_base_mass() {
        let masses = MassTriple::new(1.0, 2.0, 3.0).unwrap();
        assert!(lambdas_from_masses(&masses, BaseMass::Explicit(0.0)).is_err());
        let c = lambdas_from_masses(&masses, BaseMass::Explicit(0.5)).unwrap();
        let sol = masses_from_lambdas(&c, 0.5).unwrap();
        for (g, w) in sol.masses().iter().zip([1.0, 2.0, 3.0]) {
            assert!(rel(*g, w) < 1e-12);
        }
        assert!(MassTriple::new(2.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn near_coincident_roots_warn() {
        let c = lambdas_from_roots(1.0, 1.0 + 5e-7, 10.0).unwrap();
        let sol = roots_from_lambdas(&c);
        assert!(sol
            .warnings
            .iter()
            .any(|w| matches!(w, SpectrumWarning::NearCoincident { .. })));
    }
}
