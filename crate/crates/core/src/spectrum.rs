//! Reduction-rate power spectra `λ(ω)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::tabulated::Knots;

/// Frequency-resolved collapse rate. Every family is even in `ω`, so only
/// `|ω|` is ever looked at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NoiseSpectrum {
    /// `λ(ω) = lambda0`.
    White { lambda0: f64 },
    /// `λ(ω) = lambda0` for `|ω| < omega_c`, zero otherwise.
    HardCutoff { lambda0: f64, omega_c: f64 },
    /// `λ(ω) = lambda0 · exp(−|ω|/omega_c)`.
    ExpCutoff { lambda0: f64, omega_c: f64 },
    /// `λ(ω) = lambda0 / (1 + ω²/omega_c²)`.
    Lorentzian { lambda0: f64, omega_c: f64 },
    /// Linear interpolation in `(ω, λ)`; zero beyond the last knot and
    /// flat below the first.
    Tabulated { knots: Knots },
}

impl NoiseSpectrum {
    pub fn white(lambda0: f64) -> Result<Self> {
        check_amplitude(lambda0)?;
        Ok(Self::White { lambda0 })
    }

    pub fn hard_cutoff(lambda0: f64, omega_c: f64) -> Result<Self> {
        check_amplitude(lambda0)?;
        ensure_positive("omega_c", omega_c)?;
        Ok(Self::HardCutoff { lambda0, omega_c })
    }

    pub fn exp_cutoff(lambda0: f64, omega_c: f64) -> Result<Self> {
        check_amplitude(lambda0)?;
        ensure_positive("omega_c", omega_c)?;
        Ok(Self::ExpCutoff { lambda0, omega_c })
    }

    pub fn lorentzian(lambda0: f64, omega_c: f64) -> Result<Self> {
        check_amplitude(lambda0)?;
        ensure_positive("omega_c", omega_c)?;
        Ok(Self::Lorentzian { lambda0, omega_c })
    }

    /// Re-checks parameters of a value that did not come through a
    /// constructor (e.g. deserialized).
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::White { lambda0 } => check_amplitude(lambda0),
            Self::HardCutoff { lambda0, omega_c }
            | Self::ExpCutoff { lambda0, omega_c }
            | Self::Lorentzian { lambda0, omega_c } => {
                check_amplitude(lambda0)?;
                ensure_positive("omega_c", omega_c)
            }
            Self::Tabulated { .. } => Ok(()),
        }
    }

    /// `λ(|omega|)`.
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        ensure_finite("omega", omega)?;
        Ok(self.rate(omega.abs()))
    }

    /// Unchecked evaluation at a nonnegative frequency, for inner loops.
    pub(crate) fn rate(&self, omega_abs: f64) -> f64 {
        match self {
            Self::White { lambda0 } => *lambda0,
            Self::HardCutoff { lambda0, omega_c } => {
                if omega_abs < *omega_c {
                    *lambda0
                } else {
                    0.0
                }
            }
            Self::ExpCutoff { lambda0, omega_c } => lambda0 * (-omega_abs / omega_c).exp(),
            Self::Lorentzian { lambda0, omega_c } => {
                let x = omega_abs / omega_c;
                lambda0 / (1.0 + x * x)
            }
            Self::Tabulated { knots } => {
                if omega_abs < knots.first_x() {
                    knots.ys()[0]
                } else {
                    knots.interpolate(omega_abs).unwrap_or(0.0)
                }
            }
        }
    }

    /// The noise correlator strength `γ(ω) = 8 π^{3/2} r_c³ λ(ω)`, in m³/s.
    pub fn gamma(&self, omega: f64, r_c: f64) -> Result<f64> {
        ensure_positive("r_c", r_c)?;
        let lambda = self.evaluate(omega)?;
        Ok(8.0 * PI.powf(1.5) * r_c.powi(3) * lambda)
    }

    /// Upper bound of `λ` over all frequencies: `lambda0`, or the largest
    /// tabulated value.
    pub fn amplitude(&self) -> f64 {
        match self {
            Self::White { lambda0 }
            | Self::HardCutoff { lambda0, .. }
            | Self::ExpCutoff { lambda0, .. }
            | Self::Lorentzian { lambda0, .. } => *lambda0,
            Self::Tabulated { knots } => knots.max_y(),
        }
    }

    /// Frequencies where `λ` is discontinuous or has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::HardCutoff { omega_c, .. } => vec![*omega_c],
            Self::Tabulated { knots } => knots.xs().iter().copied().filter(|&x| x > 0.0).collect(),
            _ => Vec::new(),
        }
    }

    /// The cutoff scale `omega_c`, for families that have one.
    pub fn cutoff(&self) -> Option<f64> {
        match self {
            Self::HardCutoff { omega_c, .. }
            | Self::ExpCutoff { omega_c, .. }
            | Self::Lorentzian { omega_c, .. } => Some(*omega_c),
            _ => None,
        }
    }

    /// Same family with `omega_c` replaced.
    pub fn with_cutoff(&self, omega_c: f64) -> Result<Self> {
        match *self {
            Self::HardCutoff { lambda0, .. } => Self::hard_cutoff(lambda0, omega_c),
            Self::ExpCutoff { lambda0, .. } => Self::exp_cutoff(lambda0, omega_c),
            Self::Lorentzian { lambda0, .. } => Self::lorentzian(lambda0, omega_c),
            _ => Err(Error::InvalidArgument(format!(
                "spectrum family '{}' has no cutoff frequency",
                self.family_name()
            ))),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::White { .. } => "white",
            Self::HardCutoff { .. } => "hard_cutoff",
            Self::ExpCutoff { .. } => "exp_cutoff",
            Self::Lorentzian { .. } => "lorentzian",
            Self::Tabulated { .. } => "tabulated",
        }
    }
}

fn check_amplitude(lambda0: f64) -> Result<()> {
    if lambda0.is_finite() && lambda0 >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "lambda0 must be finite and nonnegative, got {lambda0}"
        )))
    }
}
