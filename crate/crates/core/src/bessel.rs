//! Modified Bessel functions of the second kind, orders 0, 1 and 2.
//!
//! Below `z = 2` the ascending series (logarithmic form) is summed directly;
//! above it Steed's continued fraction (Temme's CF2) gives `K0` and `K1`
//! together. `K2` follows from the upward recurrence, which is stable for
//! the `K` family.

use crate::error::{Error, Result};
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const CROSSOVER: f64 = 2.0;
const MAX_TERMS: usize = 500;

/// `K_order(z)` for `order` in `{0, 1, 2}` and `z > 0`.
pub fn bessel_k(order: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            what: "Bessel K argument must be positive",
            value: z,
        });
    }
    if order > 2 {
        return Err(Error::UnsupportedOrder(order));
    }
    let (k0, k1) = k0_k1(z);
    Ok(match order {
        0 => k0,
        1 => k1,
        _ => k0 + 2.0 / z * k1,
    })
}

/// `(K0(z), K1(z))` for `z > 0`. Infinite arguments return zeros.
pub fn k0_k1(z: f64) -> (f64, f64) {
    debug_assert!(z > 0.0);
    if z <= CROSSOVER {
        series(z)
    } else {
        steed(z)
    }
}

fn series(z: f64) -> (f64, f64) {
    let t = 0.25 * z * z;
    let log_term = (0.5 * z).ln() + EULER_GAMMA;

    // term0 = t^k / (k!)^2, term1 = t^k / (k! (k+1)!)
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut harmonic = 0.0; // H_k
    let mut sum0 = -log_term;
    let mut sum1 = log_term - 0.5;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term0 *= t / (kf * kf);
        term1 *= t / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let d0 = term0 * (harmonic - log_term);
        let d1 = term1 * (log_term - harmonic - 0.5 / (kf + 1.0));
        sum0 += d0;
        sum1 += d1;
        if d0.abs() <= f64::EPSILON * 0.25 * sum0.abs() && d1.abs() <= f64::EPSILON * 0.25 * sum1.abs() {
            break;
        }
    }
    (sum0, 1.0 / z + 0.5 * z * sum1)
}

fn steed(z: f64) -> (f64, f64) {
    if z.is_infinite() {
        return (0.0, 0.0);
    }
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON * 0.5 {
            break;
        }
    }
    h *= a1;
    let k0 = (core::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() / s;
    let k1 = k0 * (z + 0.5 - h) / z;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath.besselk at 40 digits
    const REFERENCE: &[(u32, f64, f64)] = &[
        (0, 1e-8, 18.536612259610778409),
        (0, 0.01, 4.7212447301610949651),
        (0, 1.0, 0.42102443824070833334),
        (0, 1.9999, 0.11390786025689361566),
        (0, 2.0001, 0.11387988708044139592),
        (0, 50.0, 3.4101677497894955139e-23),
        (0, 700.0, 4.669776431685376881e-306),
        (1, 1e-8, 99999999.999999904817),
        (1, 0.5, 1.6564411200033008937),
        (1, 2.0, 0.13986588181652242728),
        (1, 10.0, 0.000018648773453825584597),
        (1, 300.0, 3.7298958583323726986e-132),
        (2, 1e-6, 1999999999999.5),
        (2, 1.0, 1.6248388986351774828),
        (2, 5.0, 0.0053089437122234599581),
        (2, 700.0, 4.6831281768188282127e-306),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(n, z, want) in REFERENCE {
            let got = bessel_k(n, z).unwrap();
            let rel = ((got - want) / want).abs();
            assert!(rel < 1e-12, "K{n}({z}) = {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(bessel_k(0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_k(1, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_k(0, f64::NAN), Err(Error::Domain { .. })));
        assert_eq!(bessel_k(3, 1.0), Err(Error::UnsupportedOrder(3)));
    }

    #[test]
    fn underflows_to_zero() {
        assert_eq!(bessel_k(0, 800.0).unwrap(), 0.0);
        assert_eq!(bessel_k(2, f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn small_argument_k1_is_reciprocal() {
        let z = 1e-6;
        assert!((bessel_k(1, z).unwrap() * z - 1.0).abs() < 1e-10);
    }
}
