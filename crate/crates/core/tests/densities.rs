use std::f64::consts::PI;

use levyqm_core::bessel::bessel_k;
use levyqm_core::density::{levy_density_1d, levy_density_3d, moments, transition_density, DensityTable};
use levyqm_core::exponents::{eta_from_triplet, eta_relativistic, ExponentParams, JumpQuadrature, LevyTriplet};
use levyqm_core::grid::GridSpec;

/// Normal-inverse-Gaussian density with α = 1/a, δ = a t.
fn nig_density(x: f64, t: f64, a: f64) -> f64 {
    let r = (x * x + t * t * a * a).sqrt();
    t / PI * t.exp() * bessel_k(1, r / a).unwrap() / r
}

#[test]
fn fft_density_matches_closed_form() {
    for (m, dt) in [(1.0, 1.0), (2.0, 0.3), (0.5, 4.0)] {
        let p = ExponentParams::from_mass(m).unwrap();
        let grid = GridSpec::for_density(dt, &p, &p).unwrap();
        let table = transition_density(dt, &p, &p, &grid).unwrap();
        let t = dt / p.tau();
        let peak = nig_density(0.0, t, p.a());
        for j in (0..grid.n()).step_by(37) {
            let x = table.x(j);
            let want = nig_density(x, t, p.a());
            assert!((table.values()[j] - want).abs() < 1e-9 * peak, "m={m} dt={dt} x={x}");
        }
    }
}

#[test]
fn chapman_kolmogorov_on_default_grid() {
    let p = ExponentParams::from_mass(1.0).unwrap();
    for (dt, s) in [(1.0f64, 1.0), (0.5, 1.5)] {
        let grid = GridSpec::for_density(dt.min(s), &p, &p).unwrap();
        assert_eq!(grid.n(), 1 << 14);
        let a = transition_density(dt, &p, &p, &grid).unwrap();
        let b = transition_density(s, &p, &p, &grid).unwrap();
        let joint = transition_density(dt + s, &p, &p, &grid).unwrap();
        let conv = a.convolve(&b).unwrap();
        assert!(conv.l1_distance(&joint).unwrap() < 1e-6);
        for table in [&a, &b, &joint] {
            assert!((table.mass() - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn spectral_convolution_matches_direct_sum() {
    let p = ExponentParams::from_mass(1.0).unwrap();
    let grid = GridSpec::new(2048, 0.05).unwrap();
    let a = transition_density(1.0, &p, &p, &grid).unwrap();
    let b = transition_density(0.5, &p, &p, &grid).unwrap();
    let spectral = a.convolve(&b).unwrap();
    let n = grid.n() as i64;
    let half = n / 2;
    let direct: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|j| {
                    // x_i - x_j lands on node (i - j + n/2)
                    let k = i - j + half;
                    (0..n)
                        .contains(&k)
                        .then(|| a.values()[j as usize] * b.values()[k as usize])
                })
                .sum::<f64>()
                * grid.dx()
        })
        .collect();
    let direct = DensityTable::from_values(grid, direct).unwrap();
    assert!(spectral.l1_distance(&direct).unwrap() < 1e-9);
}

#[test]
fn variance_and_low_moments() {
    let p = ExponentParams::new(0.7, 1.3, 1.0).unwrap();
    let dt = 2.0;
    let grid = GridSpec::for_density(dt, &p, &p).unwrap();
    let table = transition_density(dt, &p, &p, &grid).unwrap();
    assert!((moments(&table, 0).unwrap() - 1.0).abs() < 1e-6);
    assert!(moments(&table, 1).unwrap().abs() < 1e-9);
    let expected = dt / p.tau() * p.a() * p.a();
    assert!((moments(&table, 2).unwrap() / expected - 1.0).abs() < 1e-3);
}

#[test]
fn table_invariants() {
    let p = ExponentParams::from_mass(1.0).unwrap();
    let grid = GridSpec::for_density(0.25, &p, &p).unwrap();
    let table = transition_density(0.25, &p, &p, &grid).unwrap();
    let v = table.values();
    assert!(v.iter().all(|&x| x >= 0.0));
    for j in 1..grid.n() / 2 {
        let m = grid.n() - j;
        assert!((v[j] - v[m]).abs() <= 1e-9 * v[j].abs().max(1e-300));
    }
}

#[test]
fn levy_khintchine_bridge() {
    for a in [1.0, 0.2] {
        let p = ExponentParams::new(a, 1.0, 1.0).unwrap();
        let triplet = LevyTriplet::relativistic(p);
        let policy = JumpQuadrature::default();
        for k in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let u = k / a;
            let quad = eta_from_triplet(u, &triplet, &policy).unwrap();
            let exact = eta_relativistic(u, &p);
            assert!(((quad - exact) / exact).abs() < 1e-4, "a={a} u={u}: {quad} vs {exact}");
        }
    }
}

#[test]
fn kernel_limits() {
    let p = ExponentParams::from_mass(1.0).unwrap();
    let x = 1e-4;
    assert!((levy_density_1d(x, &p).unwrap() * x * x * PI - 1.0).abs() < 0.01);
    assert_eq!(levy_density_1d(-0.3, &p).unwrap(), levy_density_1d(0.3, &p).unwrap());
    assert!((levy_density_3d(x, &p).unwrap() * x.powi(4) * PI * PI - 1.0).abs() < 0.01);
    // K2(z) ~ sqrt(π/2z) e^{-z} gives W(10)/W(5) ≈ e^{-5} (5/10)^{5/2}
    let ratio = levy_density_3d(10.0, &p).unwrap() / levy_density_3d(5.0, &p).unwrap();
    let asymptotic = (-5.0f64).exp() * 0.5f64.powf(2.5);
    assert!((ratio / asymptotic - 1.0).abs() < 0.2);
    // W(r; a) = a^{-3} Ŵ(r/a)
    let q = ExponentParams::new(2.5, 1.0, 1.0).unwrap();
    let scaled = levy_density_3d(2.5 * 1.7, &q).unwrap() * 2.5f64.powi(3);
    assert!((scaled / levy_density_3d(1.7, &p).unwrap() - 1.0).abs() < 1e-13);
}
