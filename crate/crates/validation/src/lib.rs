//! Acceptance checks with pinned tolerances.
//!
//! Each check returns whether it passed and a one-line summary of what it
//! measured. [`run_all`] times them against their runtime budgets; the
//! `acceptance` test target prints the outcome of every check.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use csl_heating::lattice::diatomic::MULTI_ATOM_TOLERANCE;
use csl_heating::{
    bz_sum_lambda_eff, heating_rate_per_mass, lambda_eff, lambda_eff_mc, load_tabulated,
    multi_atom_checks, occupancy_cancellation_check, DiatomicCell, Dispersion, MonatomicLattice,
    NoiseSpectrum, PhysicalConstants, QuadratureOptions, TableKind, Tabulated,
};
use csl_heating_cli::{OracleReport, ResultEnvelope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "../../cli/tests/common/cases.rs"]
mod cases;

pub const WHITE_REL_TOL: f64 = 1e-10;
pub const CLOSED_FORM_REL_TOL: f64 = 1e-9;
pub const RATE_REL_TOL: f64 = 1e-12;
pub const MC_SAMPLES: usize = 1_000_000;
pub const MC_SIGMAS: f64 = 4.0;
pub const LATTICE_REL_TOL: f64 = 1e-3;
pub const LATTICE_SIZES: [usize; 3] = [16, 32, 64];
pub const LATTICE_RATIO: f64 = 6.0;
/// Below this the white-noise lattice error is pure rounding and is not
/// required to keep decreasing.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;
pub const DIATOMIC_PAIRS: usize = 100;
pub const OCCUPANCY_MAX_N: u64 = 1_000_000;
pub const PROPERTY_CASES: usize = 64;

const NORM: f64 = 1.504_505_556_127_350_1;
const R_C: f64 = 1e-7;
const C_S: f64 = 5000.0;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

type Check = fn() -> (bool, String);

pub fn checks() -> Vec<(u8, &'static str, Option<Duration>, Check)> {
    let secs = |s: u64| Some(Duration::from_secs(s));
    vec![
        (
            1,
            "white-noise identity",
            secs(1),
            white_noise_identity as Check,
        ),
        (
            2,
            "hard-cutoff closed form",
            secs(1),
            hard_cutoff_closed_form,
        ),
        (
            3,
            "standard heating formula",
            None,
            standard_heating_formula,
        ),
        (
            4,
            "Monte Carlo vs quadrature",
            secs(30),
            monte_carlo_equivalence,
        ),
        (5, "lattice sum convergence", secs(60), lattice_convergence),
        (6, "diatomic cell identities", secs(1), diatomic_identities),
        (7, "occupancy cancellation", None, occupancy_cancellation),
        (8, "property suite", None, property_suite),
        (9, "CLI contract", None, cli_contract),
    ]
}

pub fn run_all() -> Vec<Outcome> {
    checks()
        .into_iter()
        .map(|(id, name, budget, check)| {
            let start = Instant::now();
            let (ok, mut detail) = check();
            let elapsed = start.elapsed();
            let in_time = budget.is_none_or(|b| elapsed <= b);
            if !in_time {
                detail.push_str(&format!(
                    "; runtime {elapsed:.2?} over budget {:?}",
                    budget.unwrap()
                ));
            }
            Outcome {
                id,
                name,
                passed: ok && in_time,
                detail,
                elapsed,
                budget,
            }
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn tabulated_spectrum() -> NoiseSpectrum {
    let records = [
        (0.0, 1.0),
        (2e10, 1.0),
        (5e10, 0.5),
        (1e11, 0.1),
        (2e11, 0.0),
    ];
    match load_tabulated(&records, TableKind::Spectrum).unwrap() {
        Tabulated::Spectrum(s) => s,
        Tabulated::Dispersion(_) => unreachable!(),
    }
}

/// Acoustic-like table reaching far enough for every `r_c` used here.
fn tabulated_dispersion() -> Dispersion {
    let records: Vec<(f64, f64)> = (1..=40)
        .map(|i| {
            let q = 2.5e8 * f64::from(i);
            (q, 2.0e13 * (q / 1e10 * PI / 2.0).min(PI / 2.0).sin())
        })
        .collect();
    match load_tabulated(&records, TableKind::Dispersion).unwrap() {
        Tabulated::Dispersion(d) => d,
        Tabulated::Spectrum(_) => unreachable!(),
    }
}

fn dispersions() -> Vec<Dispersion> {
    vec![
        Dispersion::linear(C_S).unwrap(),
        Dispersion::debye_capped(C_S, 1e11).unwrap(),
        Dispersion::sine_band(1e11, 3e7).unwrap(),
        tabulated_dispersion(),
    ]
}

fn spectra() -> Vec<NoiseSpectrum> {
    let omega_c = C_S / R_C;
    vec![
        NoiseSpectrum::white(1.0).unwrap(),
        NoiseSpectrum::hard_cutoff(1.0, omega_c).unwrap(),
        NoiseSpectrum::exp_cutoff(1.0, omega_c).unwrap(),
        NoiseSpectrum::lorentzian(1.0, omega_c).unwrap(),
        tabulated_spectrum(),
    ]
}

fn white_noise_identity() -> (bool, String) {
    let white = NoiseSpectrum::white(2.5).unwrap();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for d in dispersions() {
        for r_c in [1e-8, 1e-7, 1e-6] {
            let v = lambda_eff(&white, &d, r_c, &QuadratureOptions::default())
                .unwrap()
                .value;
            worst = worst.max(rel(v, 2.5));
            runs += 1;
        }
    }
    (worst <= WHITE_REL_TOL, format!("{runs} dispersion/r_c combinations, worst rel. error {worst:.2e} (tol {WHITE_REL_TOL:e})"))
}

fn closed_form(wc: f64) -> f64 {
    libm::erf(wc) - NORM * (-wc * wc).exp() * (0.5 * wc.powi(3) + 0.75 * wc)
}

fn hard_cutoff_closed_form() -> (bool, String) {
    let d = Dispersion::linear(C_S).unwrap();
    let mut worst: f64 = 0.0;
    let mut at_one = 0.0;
    for wc in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let s = NoiseSpectrum::hard_cutoff(1.0, wc * C_S / R_C).unwrap();
        let v = lambda_eff(&s, &d, R_C, &QuadratureOptions::default())
            .unwrap()
            .value;
        worst = worst.max(rel(v, closed_form(wc)));
        if wc == 1.0 {
            at_one = v;
        }
    }
    // midpoint sum with 1e7 points, computed once and frozen
    let riemann_at_one = 0.150_854_963_915_389_8;
    let riemann_dev = rel(at_one, riemann_at_one);
    (
        worst <= CLOSED_FORM_REL_TOL && riemann_dev <= CLOSED_FORM_REL_TOL,
        format!("worst rel. error {worst:.2e} over 5 cutoffs; w_c = 1 gives {at_one:.10} ({riemann_dev:.1e} from the Riemann sum)"),
    )
}

fn standard_heating_formula() -> (bool, String) {
    let hbar: f64 = 1.054_571_817e-34;
    let m_p: f64 = 1.672_621_923_69e-27;
    let by_hand = 0.75 * hbar * hbar / (m_p * m_p * R_C * R_C);
    let v = heating_rate_per_mass(1.0, &PhysicalConstants::default(), R_C).unwrap();
    let err = rel(v, by_hand);
    (
        err <= RATE_REL_TOL && (v - 0.2981).abs() < 1e-4,
        format!("{v:.6} W/kg per unit rate at r_c = 1e-7 m, rel. error {err:.1e} (tol {RATE_REL_TOL:e})"),
    )
}

fn monte_carlo_equivalence() -> (bool, String) {
    let mut worst_sigma: f64 = 0.0;
    let mut pairs = 0;
    let mut failures = Vec::new();
    for (i, s) in spectra().iter().enumerate() {
        for (j, d) in dispersions().iter().enumerate() {
            let seed = (10 * i + j) as u64;
            let quad = lambda_eff(s, d, R_C, &QuadratureOptions::default()).unwrap();
            let mc = lambda_eff_mc(s, |q| d.evaluate_vector(q), R_C, MC_SAMPLES, seed).unwrap();
            let se = (mc.error_estimate.powi(2) + quad.error_estimate.powi(2)).sqrt();
            let diff = (mc.value - quad.value).abs();
            let sigmas = if diff == 0.0 { 0.0 } else { diff / se };
            worst_sigma = worst_sigma.max(sigmas);
            if diff != 0.0 && diff >= MC_SIGMAS * se {
                failures.push(format!("{}/{}", s.family_name(), d.family_name()));
            }
            pairs += 1;
        }
    }
    (
        failures.is_empty(),
        format!(
            "{pairs} spectrum/dispersion pairs at {MC_SAMPLES} samples, worst deviation {worst_sigma:.2} sigma (limit {MC_SIGMAS}){}",
            if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
        ),
    )
}

fn lattice_errors(spectrum: &NoiseSpectrum) -> Vec<f64> {
    let d = Dispersion::linear(C_S).unwrap();
    let continuum = lambda_eff(spectrum, &d, R_C, &QuadratureOptions::default())
        .unwrap()
        .value;
    LATTICE_SIZES
        .iter()
        .map(|&l| {
            let lattice =
                MonatomicLattice::new(PI * R_C / LATTICE_RATIO, l, 4.66e-26, d.clone()).unwrap();
            let bz = bz_sum_lambda_eff(&lattice, spectrum, R_C).unwrap();
            rel(bz.lambda_eff, continuum)
        })
        .collect()
}

fn lattice_convergence() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, s) in [
        ("white", NoiseSpectrum::white(1.0).unwrap()),
        (
            "hard cutoff w_c=1",
            NoiseSpectrum::hard_cutoff(1.0, C_S / R_C).unwrap(),
        ),
    ] {
        let errs = lattice_errors(&s);
        let last = *errs.last().unwrap();
        let monotone = errs
            .windows(2)
            .all(|w| w[1] < w[0] || w[1] <= ROUNDOFF_FLOOR);
        ok &= last < LATTICE_REL_TOL && monotone;
        parts.push(format!(
            "{label}: rel. errors {} at L = 16/32/64{}{}",
            errs.iter()
                .map(|e| format!("{e:.2e}"))
                .collect::<Vec<_>>()
                .join(" / "),
            if last < LATTICE_REL_TOL {
                ""
            } else {
                " (above 1e-3 at L = 64)"
            },
            if monotone { "" } else { " (not monotone)" },
        ));
    }
    (ok, parts.join("; "))
}

fn diatomic_identities() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let amu = csl_heating::constants::ATOMIC_MASS_UNIT;
    for _ in 0..DIATOMIC_PAIRS {
        let m1 = rng.random_range(1.0..250.0) * amu;
        let m2 = rng.random_range(1.0..250.0) * amu;
        let cell = DiatomicCell::new(m1, m2, rng.random_range(1.0..100.0), 3e-10).unwrap();
        match multi_atom_checks(&cell) {
            Ok(r) => {
                let c_err = rel(r.c_magnitude, (m1 + m2).powf(-0.5));
                worst = worst.max(r.max_residual()).max(c_err);
                if c_err >= MULTI_ATOM_TOLERANCE {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    (
        failures == 0,
        format!("{DIATOMIC_PAIRS} random mass pairs, worst residual {worst:.2e} (tol {MULTI_ATOM_TOLERANCE:e}), {failures} failures"),
    )
}

fn occupancy_cancellation() -> (bool, String) {
    let c = PhysicalConstants::default();
    let omega = 5e10;
    let quantum = c.hbar * omega;
    let mismatches = (0..=OCCUPANCY_MAX_N)
        .filter(|&n| occupancy_cancellation_check(n, omega, &c).net.to_bits() != quantum.to_bits())
        .count();
    (mismatches == 0, format!("net gain equals hbar*omega bit-for-bit for n = 0..={OCCUPANCY_MAX_N}, {mismatches} mismatches"))
}

fn cutoff_family(kind: usize, lambda0: f64, omega_c: f64) -> NoiseSpectrum {
    match kind % 3 {
        0 => NoiseSpectrum::hard_cutoff(lambda0, omega_c),
        1 => NoiseSpectrum::exp_cutoff(lambda0, omega_c),
        _ => NoiseSpectrum::lorentzian(lambda0, omega_c),
    }
    .unwrap()
}

fn property_suite() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = QuadratureOptions::default();
    let disp = dispersions();
    let lam =
        |s: &NoiseSpectrum, d: &Dispersion, r_c: f64| lambda_eff(s, d, r_c, &opts).unwrap().value;
    let mut violations = [0usize; 4];

    for _ in 0..PROPERTY_CASES {
        // pointwise-ordered spectra give ordered λ_eff
        let kind = rng.random_range(0..3);
        let d = &disp[rng.random_range(0..disp.len())];
        let wc = rng.random_range(0.05..6.0);
        let factor = rng.random_range(1.0..4.0);
        let lo = lam(&cutoff_family(kind, 1.0, wc * C_S / R_C), d, R_C);
        let hi = lam(&cutoff_family(kind, 1.0, factor * wc * C_S / R_C), d, R_C);
        if lo > hi * (1.0 + 1e-12) {
            violations[0] += 1;
        }

        // between the smallest and largest rate the phonons can see
        let lambda0 = rng.random_range(0.1..10.0);
        let s = cutoff_family(kind, lambda0, wc * C_S / R_C);
        let v = lam(&s, d, R_C);
        let floor = s.evaluate(d.evaluate(opts.w_max / R_C).unwrap()).unwrap();
        if v > lambda0 * (1.0 + 1e-12) || v < floor * (1.0 - 1e-12) || v < 0.0 {
            violations[1] += 1;
        }

        // rescaling frequencies in both the spectrum and the dispersion
        let scale = if rng.random_bool(0.5) { 10.0 } else { 0.1 };
        let base = lam(
            &cutoff_family(kind, 1.0, wc * C_S / R_C),
            &Dispersion::linear(C_S).unwrap(),
            R_C,
        );
        let scaled = lam(
            &cutoff_family(kind, 1.0, scale * wc * C_S / R_C),
            &Dispersion::linear(scale * C_S).unwrap(),
            R_C,
        );
        if rel(scaled, base) > 1e-9 {
            violations[2] += 1;
        }

        // only Ω_c r_c / c_s matters for a linear dispersion
        let r_c = [1e-8, 1e-7, 1e-6][rng.random_range(0..3)];
        let c_s = [1e3, 5e3, 2e4][rng.random_range(0..3)];
        let physical = lam(
            &cutoff_family(kind, 1.0, wc * c_s / r_c),
            &Dispersion::linear(c_s).unwrap(),
            r_c,
        );
        let unit = lam(
            &cutoff_family(kind, 1.0, wc),
            &Dispersion::linear(1.0).unwrap(),
            1.0,
        );
        if rel(physical, unit) > 1e-9 {
            violations[3] += 1;
        }
    }
    let total: usize = violations.iter().sum();
    (
        total == 0,
        format!(
            "{PROPERTY_CASES} cases each; violations: monotonicity {}, bounds {}, scaling {}, w_c law {}",
            violations[0], violations[1], violations[2], violations[3]
        ),
    )
}

pub fn cli_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli")
}

fn reserialize(text: &str) -> Result<String, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    if value["command"] == "oracle" {
        let r: OracleReport = serde_json::from_str(text).map_err(|e| e.to_string())?;
        r.write_json(&mut out).map_err(|e| e.to_string())?;
    } else {
        let r: ResultEnvelope = serde_json::from_str(text).map_err(|e| e.to_string())?;
        r.write_json(&mut out).map_err(|e| e.to_string())?;
    }
    String::from_utf8(out).map_err(|e| e.to_string())
}

fn cli_contract() -> (bool, String) {
    let root = cli_root();
    // golden cases reference fixtures relative to the CLI crate
    let previous = std::env::current_dir().unwrap();
    std::env::set_current_dir(&root).unwrap();
    let all = cases::load(&root);
    let mut problems = Vec::new();
    let mut round_trips = 0;
    for case in &all {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = csl_heating_cli::run(
            std::iter::once("csl-heat".to_string()).chain(case.args.iter().cloned()),
            &mut out,
            &mut err,
        );
        let stdout = String::from_utf8(out).unwrap();
        if code != case.exit {
            problems.push(format!("{}: exit {code} != {}", case.name, case.exit));
        }
        match std::fs::read_to_string(cases::expected_path(&root, case)) {
            Ok(expected) if expected == stdout => {}
            _ => problems.push(format!("{}: output differs from golden file", case.name)),
        }
        if stdout.starts_with('{') {
            match reserialize(&stdout) {
                Ok(again) if again == stdout => round_trips += 1,
                _ => problems.push(format!("{}: JSON does not round-trip", case.name)),
            }
        }
    }
    std::env::set_current_dir(previous).unwrap();

    for sub in ["lambda-eff", "rate", "scan", "oracle"] {
        if !all.iter().any(|c| c.args.iter().any(|a| a == sub)) {
            problems.push(format!("no golden case for {sub}"));
        }
    }
    for code in [0, 2, 3, 4] {
        if !all.iter().any(|c| c.exit == code) {
            problems.push(format!("exit code {code} never exercised"));
        }
    }
    (
        problems.is_empty(),
        format!(
            "{} golden cases, {round_trips} JSON round trips{}",
            all.len(),
            if problems.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.join("; "))
            }
        ),
    )
}
