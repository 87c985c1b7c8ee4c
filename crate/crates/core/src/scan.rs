//! One-parameter sweeps of `λ_eff` and the heating rate.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::dispersion::Dispersion;
use crate::error::{ensure_positive, Error, Result};
use crate::heating::{heating_rate_per_mass, lambda_eff, QuadratureOptions};
use crate::spectrum::NoiseSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanParam {
    /// Spectrum cutoff frequency, rad/s.
    OmegaC,
    /// Correlation length, m.
    RC,
    /// Sound speed, m/s.
    CS,
}

impl ScanParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::OmegaC => "omega_c",
            Self::RC => "r_c",
            Self::CS => "c_s",
        }
    }
}

impl fmt::Display for ScanParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega_c" => Ok(Self::OmegaC),
            "r_c" => Ok(Self::RC),
            "c_s" => Ok(Self::CS),
            other => Err(Error::InvalidArgument(format!(
                "unknown scan parameter '{other}' (expected omega_c, r_c or c_s)"
            ))),
        }
    }
}

/// Everything a single `λ_eff` evaluation needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseConfig {
    pub spectrum: NoiseSpectrum,
    pub dispersion: Dispersion,
    pub r_c: f64,
    pub constants: PhysicalConstants,
    pub quadrature: QuadratureOptions,
}

impl BaseConfig {
    /// Fails if `param` has no counterpart in this configuration.
    pub fn check_param(&self, param: ScanParam) -> Result<()> {
        let applicable = match param {
            ScanParam::OmegaC => self.spectrum.cutoff().is_some(),
            ScanParam::RC => true,
            ScanParam::CS => self.dispersion.sound_speed().is_some(),
        };
        if applicable {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "cannot scan {param}: spectrum '{}' / dispersion '{}' has no such parameter",
                self.spectrum.family_name(),
                self.dispersion.family_name()
            )))
        }
    }

    /// Copy of `self` with `param` set to `value`.
    pub fn with_param(&self, param: ScanParam, value: f64) -> Result<Self> {
        let mut next = self.clone();
        match param {
            ScanParam::OmegaC => next.spectrum = self.spectrum.with_cutoff(value)?,
            ScanParam::RC => {
                ensure_positive("r_c", value)?;
                next.r_c = value;
            }
            ScanParam::CS => next.dispersion = self.dispersion.with_sound_speed(value)?,
        }
        Ok(next)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanValues {
    pub lambda_eff: f64,
    pub error: f64,
    pub rate_per_mass: f64,
    /// `None` when the spectrum amplitude is zero.
    pub suppression: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub value: f64,
    pub outcome: Result<ScanValues>,
}

/// Evaluates the base configuration at one parameter value.
pub fn scan_point(base: &BaseConfig, param: ScanParam, value: f64) -> Result<ScanValues> {
    let config = base.with_param(param, value)?;
    let lam = lambda_eff(
        &config.spectrum,
        &config.dispersion,
        config.r_c,
        &config.quadrature,
    )?;
    let amplitude = config.spectrum.amplitude();
    Ok(ScanValues {
        lambda_eff: lam.value,
        error: lam.error_estimate,
        rate_per_mass: heating_rate_per_mass(lam.value, &config.constants, config.r_c)?,
        suppression: (amplitude > 0.0).then(|| (lam.value / amplitude).clamp(0.0, 1.0)),
    })
}

/// Runs every grid point independently; rows come back in grid order.
///
/// Parameters that the base configuration cannot vary (e.g. `omega_c` on
/// white noise) fail the whole scan. Per-point failures, including
/// convergence errors, are kept in the row.
pub fn scan(param: ScanParam, grid: &[f64], base: &BaseConfig) -> Result<Vec<ScanRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("scan grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "scan grid value {bad} is not finite"
        )));
    }
    base.check_param(param)?;

    Ok(grid
        .par_iter()
        .map(|&value| ScanRow {
            value,
            outcome: scan_point(base, param, value),
        })
        .collect())
}

/// `points` evenly spaced values from `from` to `to`, inclusive.
pub fn linear_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    check_grid_args(from, to, points)?;
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                to
            } else {
                from + step * i as f64
            }
        })
        .collect())
}

/// `points` geometrically spaced values from `from` to `to`, inclusive.
pub fn log_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    check_grid_args(from, to, points)?;
    if from <= 0.0 || to <= 0.0 {
        return Err(Error::InvalidArgument(
            "log grid bounds must be positive".into(),
        ));
    }
    // base 10 so that decade grids land exactly on powers of ten
    let (la, lb) = (from.log10(), to.log10());
    let step = (lb - la) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => from,
            i if i == points - 1 => to,
            i => 10f64.powf(la + step * i as f64),
        })
        .collect())
}

fn check_grid_args(from: f64, to: f64, points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!(
            "a grid needs at least 2 points, got {points}"
        )));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidArgument("grid bounds must be finite".into()));
    }
    Ok(())
}
