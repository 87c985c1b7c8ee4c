//! Effective collapse rate seen by longitudinal phonons and the resulting
//! heating power.
//!
//! With `w = r_c q`, the effective rate is the average of `λ(ω_L(w/r_c))`
//! over the normalized weight `e^{−w²} w²` on `R³`. For an isotropic
//! dispersion this collapses to the radial integral
//!
//! ```text
//! λ_eff = 8/(3√π) ∫₀^∞ w⁴ e^{−w²} λ(ω_L(w/r_c)) dw
//! ```
//!
//! which is truncated at `w_max` with the neglected tail bounded
//! analytically. The heating power of a body of mass `M` is then
//! `(3/4) ħ² λ_eff M / (m_N² r_c²)`.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::dispersion::Dispersion;
use crate::error::{ensure_positive, Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::spectrum::NoiseSpectrum;

/// `8 / (3√π)`, the normalization of `w⁴ e^{−w²}` on `[0, ∞)`.
pub const RADIAL_NORM: f64 = 1.504_505_556_127_350_1;

/// Smallest admissible radial truncation.
pub const MIN_W_MAX: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Correlation length, m.
    pub r_c: f64,
    pub spectrum: NoiseSpectrum,
}

impl NoiseParams {
    pub fn new(r_c: f64, spectrum: NoiseSpectrum) -> Result<Self> {
        ensure_positive("r_c", r_c)?;
        spectrum.validate()?;
        Ok(Self { r_c, spectrum })
    }
}

/// The heated body. Per-mass results do not need a mass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TargetBody {
    /// Total mass, kg.
    pub total_mass: Option<f64>,
}

impl TargetBody {
    pub fn with_mass(total_mass: f64) -> Result<Self> {
        ensure_positive("total_mass", total_mass)?;
        Ok(Self {
            total_mass: Some(total_mass),
        })
    }

    pub fn per_mass() -> Self {
        Self { total_mass: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Upper limit of the radial variable `w = r_c q`.
    pub w_max: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_subdivisions: 200,
            w_max: 8.0,
        }
    }
}

impl QuadratureOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rel_tol must be >= 0, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "abs_tol must be >= 0, got {}",
                self.abs_tol
            )));
        }
        if !(self.w_max >= MIN_W_MAX && self.w_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "w_max must be finite and >= {MIN_W_MAX}, got {}",
                self.w_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RadialQuadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaEffResult {
    /// s⁻¹
    pub value: f64,
    /// s⁻¹
    pub error_estimate: f64,
    pub evaluations: usize,
    pub method: Method,
}

/// `8/(3√π) ∫_w^∞ t⁴ e^{−t²} dt`, in closed form.
pub fn radial_tail_fraction(w: f64) -> f64 {
    libm::erfc(w) + RADIAL_NORM * (-w * w).exp() * (0.5 * w.powi(3) + 0.75 * w)
}

/// Breakpoints in `w` where the radial integrand is discontinuous or kinked.
pub fn radial_breakpoints(
    spectrum: &NoiseSpectrum,
    dispersion: &Dispersion,
    r_c: f64,
    w_max: f64,
) -> Vec<f64> {
    let from_spectrum = spectrum
        .breakpoints()
        .into_iter()
        .filter_map(|omega| dispersion.invert(omega).ok());
    let mut ws: Vec<f64> = from_spectrum
        .chain(dispersion.kinks())
        .map(|q| q * r_c)
        .filter(|&w| w > 0.0 && w < w_max)
        .collect();
    ws.sort_by(f64::total_cmp);
    ws.dedup();
    ws
}

/// `λ_eff` by adaptive radial quadrature.
///
/// Returns [`Error::Convergence`] with the best estimate when the
/// tolerance is not met within `opts.max_subdivisions` bisections. The
/// convergence test applies to the quadrature error; the analytic tail
/// bound beyond `w_max` is added to the reported error afterwards.
pub fn lambda_eff(
    spectrum: &NoiseSpectrum,
    dispersion: &Dispersion,
    r_c: f64,
    opts: &QuadratureOptions,
) -> Result<LambdaEffResult> {
    ensure_positive("r_c", r_c)?;
    spectrum.validate()?;
    dispersion.validate()?;
    opts.validate()?;

    let breakpoints = radial_breakpoints(spectrum, dispersion, r_c, opts.w_max);
    let integrand = |w: f64| {
        let w2 = w * w;
        w2 * w2 * (-w2).exp() * spectrum.rate(dispersion.omega(w / r_c))
    };
    let tol = Tolerance {
        rel: opts.rel_tol,
        abs: opts.abs_tol / RADIAL_NORM,
        max_subdivisions: opts.max_subdivisions,
    };
    let integral = quadrature::integrate(integrand, 0.0, opts.w_max, &breakpoints, tol);

    let tail = spectrum.amplitude() * radial_tail_fraction(opts.w_max);
    let result = LambdaEffResult {
        value: (RADIAL_NORM * integral.value).max(0.0),
        error_estimate: RADIAL_NORM * integral.error + tail,
        evaluations: integral.evaluations,
        method: Method::RadialQuadrature,
    };
    if integral.converged {
        Ok(result)
    } else {
        Err(Error::Convergence {
            best: Box::new(result),
        })
    }
}

/// Heating power in W: `(3/4) ħ² λ_eff M / (m_N² r_c²)`.
///
/// A body without a mass is treated as 1 kg, giving W/kg.
pub fn heating_rate(
    lambda_eff: f64,
    body: &TargetBody,
    consts: &PhysicalConstants,
    r_c: f64,
) -> Result<f64> {
    if !(lambda_eff >= 0.0 && lambda_eff.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda_eff must be finite and nonnegative, got {lambda_eff}"
        )));
    }
    consts.validate()?;
    ensure_positive("r_c", r_c)?;
    let mass = match body.total_mass {
        Some(m) => {
            ensure_positive("total_mass", m)?;
            m
        }
        None => 1.0,
    };
    let ratio = consts.hbar / (consts.m_n * r_c);
    Ok(0.75 * ratio * ratio * lambda_eff * mass)
}

/// Heating power per unit mass, W/kg.
pub fn heating_rate_per_mass(lambda_eff: f64, consts: &PhysicalConstants, r_c: f64) -> Result<f64> {
    heating_rate(lambda_eff, &TargetBody::per_mass(), consts, r_c)
}

/// `λ_eff / λ₀`, clamped to `[0, 1]` against rounding.
pub fn suppression_factor(
    spectrum: &NoiseSpectrum,
    dispersion: &Dispersion,
    r_c: f64,
    opts: &QuadratureOptions,
) -> Result<f64> {
    let amplitude = spectrum.amplitude();
    if amplitude == 0.0 {
        return Err(Error::UndefinedRatio("spectrum amplitude is zero".into()));
    }
    let lam = lambda_eff(spectrum, dispersion, r_c, opts)?;
    Ok((lam.value / amplitude).clamp(0.0, 1.0))
}

/// The dimensionless cutoff `Ω_c r_c / c_s`.
pub fn dimensionless_cutoff(omega_c: f64, r_c: f64, c_s: f64) -> f64 {
    omega_c * r_c / c_s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn opts() -> QuadratureOptions {
        QuadratureOptions::default()
    }

    /// Frozen independently (40-digit arithmetic): `erf(w) − 8/(3√π) e^{−w²}(w³/2 + 3w/4)`.
    const HARD_CUTOFF: [(f64, f64); 5] = [
        (0.1, 2.987_601_531_906_594e-6),
        (0.5, 0.007_876_706_767_370_408),
        (1.0, 0.150_854_963_915_390_4),
        (2.0, 0.843_764_372_422_277_7),
        (5.0, 0.999_999_998_614_202_7),
    ];

    #[test]
    fn radial_norm_constant() {
        assert_relative_eq!(
            RADIAL_NORM,
            8.0 / (3.0 * std::f64::consts::PI.sqrt()),
            max_relative = 1e-15
        );
    }

    #[test]
    fn tail_fraction() {
        assert_relative_eq!(radial_tail_fraction(0.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(radial_tail_fraction(4.0), 5.9413e-6, max_relative = 1e-4);
        assert!(radial_tail_fraction(8.0) < 1e-24);
        for (w, v) in HARD_CUTOFF {
            assert_relative_eq!(1.0 - radial_tail_fraction(w), v, max_relative = 1e-6);
        }
    }

    #[test]
    fn white_noise_identity() {
        let s = NoiseSpectrum::white(1.0).unwrap();
        for d in [
            Dispersion::linear(5000.0).unwrap(),
            Dispersion::sine_band(1e13, 1e9).unwrap(),
        ] {
            let r = lambda_eff(&s, &d, 1e-7, &opts()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
            assert_eq!(r.method, Method::RadialQuadrature);
        }
    }

    #[test]
    fn hard_cutoff_closed_form() {
        let d = Dispersion::linear(5000.0).unwrap();
        let r_c = 1e-7;
        for (wc, expected) in HARD_CUTOFF {
            let s = NoiseSpectrum::hard_cutoff(1.0, wc * 5000.0 / r_c).unwrap();
            let r = lambda_eff(&s, &d, r_c, &opts()).unwrap();
            assert_relative_eq!(r.value, expected, max_relative = 1e-9);
            assert!(r.error_estimate <= 1e-9 * r.value);
        }
    }

    #[test]
    fn zero_spectrum() {
        let s = NoiseSpectrum::white(0.0).unwrap();
        let r = lambda_eff(&s, &Dispersion::linear(1.0).unwrap(), 1.0, &opts()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn small_cutoff_series() {
        let wc: f64 = 0.1;
        let series = RADIAL_NORM * (wc.powi(5) / 5.0 - wc.powi(7) / 7.0 + wc.powi(9) / 18.0);
        let s = NoiseSpectrum::hard_cutoff(2.0, wc).unwrap();
        let d = Dispersion::linear(1.0).unwrap();
        let f = suppression_factor(&s, &d, 1.0, &opts()).unwrap();
        assert_relative_eq!(f, series, max_relative = 1e-6);
        assert_relative_eq!(f, 2.99e-6, max_relative = 1e-3);
    }

    #[test]
    fn invalid_inputs() {
        let s = NoiseSpectrum::white(1.0).unwrap();
        let d = Dispersion::linear(1.0).unwrap();
        assert!(matches!(
            lambda_eff(&s, &d, 0.0, &opts()),
            Err(Error::InvalidArgument(_))
        ));
        let bad = QuadratureOptions {
            w_max: 3.0,
            ..opts()
        };
        assert!(matches!(
            lambda_eff(&s, &d, 1.0, &bad),
            Err(Error::InvalidArgument(_))
        ));
        let bad = QuadratureOptions {
            rel_tol: -1.0,
            ..opts()
        };
        assert!(matches!(
            lambda_eff(&s, &d, 1.0, &bad),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn convergence_error_carries_estimate() {
        let s = NoiseSpectrum::lorentzian(1.0, 3.0).unwrap();
        let d = Dispersion::sine_band(7.0, 1.3).unwrap();
        let tight = QuadratureOptions {
            rel_tol: 0.0,
            abs_tol: 0.0,
            max_subdivisions: 2,
            w_max: 8.0,
        };
        match lambda_eff(&s, &d, 1.0, &tight) {
            Err(Error::Convergence { best }) => {
                assert!(best.value > 0.0);
                assert!(best.evaluations > 0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn heating_rate_examples() {
        let c = PhysicalConstants::default();
        assert_eq!(
            heating_rate(0.0, &TargetBody::with_mass(1.0).unwrap(), &c, 1e-7).unwrap(),
            0.0
        );
        let one = heating_rate(1.0, &TargetBody::with_mass(1.0).unwrap(), &c, 1e-7).unwrap();
        assert_relative_eq!(one, 0.298_138_467_739_837_44, max_relative = 1e-12);
        let two = heating_rate(1.0, &TargetBody::with_mass(2.0).unwrap(), &c, 1e-7).unwrap();
        assert_relative_eq!(two, 2.0 * one, max_relative = 1e-15);
        assert_eq!(heating_rate_per_mass(1.0, &c, 1e-7).unwrap(), one);
        let far = heating_rate_per_mass(1.0, &c, 2e-7).unwrap();
        assert_relative_eq!(far, one / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn heating_rate_rejects_bad_inputs() {
        let c = PhysicalConstants::default();
        assert!(heating_rate_per_mass(-1.0, &c, 1e-7).is_err());
        assert!(heating_rate_per_mass(1.0, &c, 0.0).is_err());
        assert!(heating_rate(
            1.0,
            &TargetBody {
                total_mass: Some(0.0)
            },
            &c,
            1e-7
        )
        .is_err());
        let bad = PhysicalConstants {
            hbar: 0.0,
            m_n: 1.0,
        };
        assert!(heating_rate_per_mass(1.0, &bad, 1e-7).is_err());
    }

    #[test]
    fn suppression_undefined_for_zero_amplitude() {
        let s = NoiseSpectrum::hard_cutoff(0.0, 1.0).unwrap();
        let d = Dispersion::linear(1.0).unwrap();
        assert!(matches!(
            suppression_factor(&s, &d, 1.0, &opts()),
            Err(Error::UndefinedRatio(_))
        ));
    }

    #[test]
    fn breakpoints_mapped_through_dispersion() {
        let s = NoiseSpectrum::hard_cutoff(1.0, 5e10).unwrap();
        let d = Dispersion::debye_capped(5000.0, 1e11).unwrap();
        let bps = radial_breakpoints(&s, &d, 1e-7, 8.0);
        assert_eq!(bps.len(), 2);
        assert_relative_eq!(bps[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(bps[1], 2.0, max_relative = 1e-12);
        // cutoff above the Debye cap contributes nothing
        let s = NoiseSpectrum::hard_cutoff(1.0, 5e11).unwrap();
        assert_eq!(radial_breakpoints(&s, &d, 1e-7, 8.0).len(), 1);
    }
}
