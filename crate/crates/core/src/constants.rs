//! Physical constants entering the heating rate.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Result};

/// Reduced Planck constant, CODATA 2018, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Proton mass, CODATA 2018, kg.
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;
/// Unified atomic mass unit, CODATA 2018, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// `ħ` and the reference nucleon mass `m_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub m_n: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            m_n: PROTON_MASS,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, m_n: f64) -> Result<Self> {
        ensure_positive("hbar", hbar)?;
        ensure_positive("m_n", m_n)?;
        Ok(Self { hbar, m_n })
    }

    /// `m_N` taken as the atomic mass unit instead of the proton mass.
    pub fn with_atomic_mass_unit() -> Self {
        Self {
            hbar: HBAR,
            m_n: ATOMIC_MASS_UNIT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("hbar", self.hbar)?;
        ensure_positive("m_n", self.m_n)
    }

    /// Which reference mass `m_n` corresponds to, for output metadata.
    pub fn nucleon_mass_label(&self) -> &'static str {
        if self.m_n == PROTON_MASS {
            "proton"
        } else if self.m_n == ATOMIC_MASS_UNIT {
            "atomic_mass_unit"
        } else {
            "custom"
        }
    }
}
