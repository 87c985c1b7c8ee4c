//! Independent reference computations checked against the library paths.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use csl_heating::{
    diatomic_branches, dipole_approx_error, heating_rate_per_mass, lambda_eff, multi_atom_checks,
    suppression_factor, DiatomicCell, Dispersion, NoiseSpectrum, PhysicalConstants,
    QuadratureOptions,
};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NORM: f64 = 1.504_505_556_127_350_1;

fn hard_cutoff_closed_form(wc: f64) -> f64 {
    libm::erf(wc) - NORM * (-wc * wc).exp() * (0.5 * wc.powi(3) + 0.75 * wc)
}

/// Midpoint rule for `8/(3√π) ∫₀^wc w⁴ e^{−w²} dw`.
fn riemann(wc: f64, points: usize) -> f64 {
    let h = wc / points as f64;
    let mut sum = 0.0;
    let mut c = 0.0;
    for i in 0..points {
        let w = (i as f64 + 0.5) * h;
        let w2 = w * w;
        // Kahan summation
        let y = w2 * w2 * (-w2).exp() - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    NORM * sum * h
}

#[test]
fn closed_form_confirmed_by_riemann_sum() {
    let oracle = riemann(1.0, 10_000_000);
    assert_relative_eq!(oracle, 0.150_854_963_915_390_36, max_relative = 1e-12);
    assert_relative_eq!(hard_cutoff_closed_form(1.0), oracle, max_relative = 1e-12);
}

#[test]
fn quadrature_matches_closed_form_across_cutoffs() {
    let r_c = 1e-7;
    let c_s = 5000.0;
    let d = Dispersion::linear(c_s).unwrap();
    for wc in [0.05, 0.3, 0.7, 1.0, 1.5, 2.5, 3.5, 5.0] {
        let s = NoiseSpectrum::hard_cutoff(3.0, wc * c_s / r_c).unwrap();
        let r = lambda_eff(&s, &d, r_c, &QuadratureOptions::default()).unwrap();
        let expected = if wc < 0.2 {
            riemann(wc, 200_000)
        } else {
            hard_cutoff_closed_form(wc)
        };
        assert_relative_eq!(r.value / 3.0, expected, max_relative = 1e-9);
    }
}

#[test]
fn smooth_families_against_riemann_sum() {
    // exp and Lorentzian cutoffs at w_c = 1 with linear sound; frozen 40-digit values
    let d = Dispersion::linear(5000.0).unwrap();
    let r_c = 1e-7;
    let omega_c = 5e10;
    let cases = [
        (
            NoiseSpectrum::exp_cutoff(1.0, omega_c).unwrap(),
            0.248_340_647_231_042_4,
        ),
        (
            NoiseSpectrum::lorentzian(1.0, omega_c).unwrap(),
            0.343_829_541_521_749_5,
        ),
    ];
    for (s, frozen) in cases {
        let q = lambda_eff(&s, &d, r_c, &QuadratureOptions::default()).unwrap();
        assert_relative_eq!(q.value, frozen, max_relative = 1e-10);
        // crude midpoint oracle on [0, 8]
        let n = 400_000;
        let h = 8.0 / n as f64;
        let sum: f64 = (0..n)
            .map(|i| {
                let w = (i as f64 + 0.5) * h;
                w.powi(4) * (-w * w).exp() * s.evaluate(5000.0 * w / r_c).unwrap()
            })
            .sum();
        assert_relative_eq!(NORM * sum * h, frozen, max_relative = 1e-8);
    }
}

#[test]
fn small_cutoff_series() {
    let wc: f64 = 0.1;
    // Σ (−1)ⁿ w^{2n+5} / (n! (2n+5))
    let mut series = 0.0;
    let mut factorial = 1.0;
    for n in 0..12 {
        if n > 0 {
            factorial *= f64::from(n);
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        series += sign * wc.powi(2 * n + 5) / (factorial * f64::from(2 * n + 5));
    }
    series *= NORM;
    let s = NoiseSpectrum::hard_cutoff(1.0, wc * 5e10).unwrap();
    let f = suppression_factor(
        &s,
        &Dispersion::linear(5000.0).unwrap(),
        1e-7,
        &QuadratureOptions::default(),
    )
    .unwrap();
    assert_relative_eq!(f, series, max_relative = 1e-12);
}

#[test]
fn standard_heating_formula() {
    let c = PhysicalConstants::default();
    let independent =
        0.75 * (1.054_571_817e-34f64).powi(2) / ((1.672_621_923_69e-27f64).powi(2) * 1e-14);
    assert_relative_eq!(
        heating_rate_per_mass(1.0, &c, 1e-7).unwrap(),
        independent,
        max_relative = 1e-12
    );
    assert!((independent - 0.2981).abs() < 1e-4);
}

/// Embeds the Hermitian 2×2 matrix as a real symmetric 4×4 and diagonalizes
/// it with nalgebra; every eigenvalue appears twice.
fn nalgebra_eigenvalues(m: [[Complex64; 2]; 2]) -> Vec<f64> {
    let mut real = DMatrix::<f64>::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            real[(i, j)] = m[i][j].re;
            real[(i + 2, j + 2)] = m[i][j].re;
            real[(i, j + 2)] = -m[i][j].im;
            real[(i + 2, j)] = m[i][j].im;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(real)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    vec![ev[0], ev[2]]
}

#[test]
fn diatomic_against_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let cell = DiatomicCell::new(
            rng.random_range(0.1..10.0),
            rng.random_range(0.1..10.0),
            rng.random_range(0.5..3.0),
            1.0,
        )
        .unwrap();
        let k = rng.random_range(-PI..=PI);
        let b = diatomic_branches(&cell, k).unwrap();
        let ev = nalgebra_eigenvalues(cell.dynamical_matrix(k));
        let scale = ev[1];
        assert!((b.omega_acoustic.powi(2) - ev[0]).abs() < 1e-12 * scale);
        assert!((b.omega_optical.powi(2) - ev[1]).abs() < 1e-12 * scale);

        // D e = ω² e
        let d = cell.dynamical_matrix(k);
        for (omega, e) in [
            (b.omega_acoustic, b.e_acoustic),
            (b.omega_optical, b.e_optical),
        ] {
            for row in 0..2 {
                let lhs = d[row][0] * e[0] + d[row][1] * e[1];
                assert!((lhs - omega * omega * e[row]).norm() < 1e-12 * scale);
            }
        }
    }
}

#[test]
fn zone_centre_optical_frequency() {
    let cell = DiatomicCell::new(1.0, 2.0, 1.0, 1.0).unwrap();
    let ev = nalgebra_eigenvalues(cell.dynamical_matrix(0.0));
    assert!(ev[0].abs() < 1e-14);
    assert_relative_eq!(ev[1], 3.0, max_relative = 1e-14);
    let b = diatomic_branches(&cell, 0.0).unwrap();
    assert_relative_eq!(
        b.omega_optical.powi(2),
        2.0 * (1.0 / 1.0 + 1.0 / 2.0),
        max_relative = 1e-14
    );
}

#[test]
fn multi_atom_residuals_for_random_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (m1, m2) = (rng.random_range(0.1..10.0), rng.random_range(0.1..10.0));
        let r = multi_atom_checks(&DiatomicCell::new(m1, m2, 1.0, 1.0).unwrap()).unwrap();
        assert!(r.max_residual() < 1e-12, "{m1} {m2}: {:?}", r.residuals());
        assert_relative_eq!(r.c_magnitude, (m1 + m2).powf(-0.5), max_relative = 1e-15);
    }
}

#[test]
fn dipole_bound_dominates_exact_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let x: f64 = rng.random_range(1e-3..1.0);
        // |e^{ix} − 1 − ix| without cancellation in the real part
        let exact = Complex64::new(-2.0 * (0.5 * x).sin().powi(2), x.sin() - x).norm();
        let bound = dipole_approx_error(x, 1.0).unwrap();
        assert!(exact <= bound * (1.0 + 1e-12), "x = {x}");
    }
    // well inside the lattice scale the bound is negligible
    assert!(dipole_approx_error(5.0 / 1e-7, 1e-11).unwrap() < 1e-5);
}
