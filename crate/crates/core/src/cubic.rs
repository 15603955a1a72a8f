//! Real roots of cubic polynomials with widely spread roots.
//!
//! The closed-form (trigonometric or Cardano) solution on the monic form
//! supplies starting values. The root of largest magnitude is polished and
//! removed by backward deflation, the remaining quadratic is solved with the
//! cancellation-free formula, and every real root is Newton-polished against
//! the original coefficients.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use num_complex::Complex64;

/// `c3 x^3 + c2 x^2 + c1 x + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicRoots {
    /// Real roots, ascending, repeated according to multiplicity.
    pub real: Vec<f64>,
    /// One member (positive imaginary part) of a complex-conjugate pair.
    pub complex: Option<Complex64>,
    /// Discriminant `18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2` of the cubic.
    pub discriminant: f64,
}

impl Cubic {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1
    }

    /// Sum of absolute term magnitudes at `x`; the rounding scale of [`Cubic::eval`].
    pub fn magnitude(&self, x: f64) -> f64 {
        let ax = x.abs();
        ((self.c3.abs() * ax + self.c2.abs()) * ax + self.c1.abs()) * ax + self.c0.abs()
    }

    pub fn discriminant(&self) -> f64 {
        let (a, b, c, d) = (self.c3, self.c2, self.c1, self.c0);
        18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c - 27.0 * a * a * d * d
    }

    /// Newton iterations against the original coefficients, accepting only
    /// steps that do not increase `|p(x)|`.
    pub fn polish(&self, mut x: f64) -> f64 {
        let mut fx = self.eval(x);
        for _ in 0..16 {
            let d = self.derivative(x);
            if fx == 0.0 || d == 0.0 || !d.is_finite() {
                break;
            }
            let step = fx / d;
            let next = x - step;
            let fnext = self.eval(next);
            if !(fnext.abs() <= fx.abs()) {
                break;
            }
            x = next;
            fx = fnext;
            if step.abs() <= 2.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        x
    }

    pub fn roots(&self) -> CubicRoots {
        let discriminant = self.discriminant();
        if self.c3 == 0.0 {
            let (real, complex) = quadratic(self.c2, self.c1, self.c0);
            let mut real: Vec<f64> = real.into_iter().map(|r| self.polish(r)).collect();
            real.sort_by(f64::total_cmp);
            return CubicRoots {
                real,
                complex,
                discriminant,
            };
        }
        let first = self.polish(self.largest_root_estimate());
        // backward deflation: p(x) = c3 (x - r)(x^2 + e x + f)
        let b = self.c2 / self.c3;
        let c = self.c1 / self.c3;
        let d = self.c0 / self.c3;
        let (e, f) = if first == 0.0 {
            (b, c)
        } else if first.abs().powi(3) >= d.abs() {
            // dividing out the dominant root: backward deflation is stable
            let f = -d / first;
            ((f - c) / first, f)
        } else {
            let e = b + first;
            (e, c + e * first)
        };
        let (rest, complex) = quadratic(1.0, e, f);
        let mut real = Vec::with_capacity(3);
        real.push(first);
        real.extend(rest.into_iter().map(|r| self.polish(r)));
        real.sort_by(f64::total_cmp);
        CubicRoots {
            real,
            complex,
            discriminant,
        }
    }

    /// Closed-form estimate of the real root of largest magnitude.
    fn largest_root_estimate(&self) -> f64 {
        let b = self.c2 / self.c3;
        let c = self.c1 / self.c3;
        let d = self.c0 / self.c3;
        // x = s y keeps the monic coefficients near unity
        let s = b.abs().max(c.abs().sqrt()).max(d.abs().cbrt());
        if s == 0.0 {
            return 0.0;
        }
        let (b, c, d) = (b / s, c / (s * s), d / (s * s * s));
        let p = c - b * b / 3.0;
        let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
        let disc = q * q / 4.0 + p * p * p / 27.0;
        let shift = -b / 3.0;
        let y = if disc <= 0.0 {
            // three real roots
            let r = (-p / 3.0).max(0.0).sqrt();
            let roots = if r == 0.0 {
                [shift; 3]
            } else {
                let cos_arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
                let theta = cos_arg.acos();
                [0, 1, 2].map(|k| 2.0 * r * ((theta - 2.0 * PI * k as f64) / 3.0).cos() + shift)
            };
            roots
                .into_iter()
                .fold(0.0, |best: f64, v| if v.abs() > best.abs() { v } else { best })
        } else {
            let sq = disc.sqrt();
            let a = -q.signum() * (q.abs() / 2.0 + sq).cbrt();
            let t = if a == 0.0 { 0.0 } else { a - p / (3.0 * a) };
            t + shift
        };
        y * s
    }
}

/// Roots of `a x^2 + b x + c` without cancellation: real roots, or one member of a complex pair.
fn quadratic(a: f64, b: f64, c: f64) -> (Vec<f64>, Option<Complex64>) {
    if a == 0.0 {
        if b == 0.0 {
            return (Vec::new(), None);
        }
        return (alloc::vec![-c / b], None);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        return (Vec::new(), Some(Complex64::new(re, im)));
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return (alloc::vec![0.0, 0.0], None);
    }
    (alloc::vec![q / a, c / q], None)
}
