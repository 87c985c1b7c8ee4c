//! Nearest-neighbour diatomic chain in mass-weighted coordinates.
//!
//! At `k = 0` the acoustic eigenvector has components proportional to
//! `√m_κ`, so with unit normalization each atom carries `√m_κ / √m_cell`.
//! Weighting by `√m_κ` and summing over the cell then gives `√m_cell`,
//! whose square is the cell mass: the cell responds to mass-proportional
//! noise like a single atom of mass `m_cell`. Optical modes leave the cell
//! centre of mass at rest and drop out of that sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Residual threshold for [`multi_atom_checks`].
pub const MULTI_ATOM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiatomicCell {
    /// kg
    pub m1: f64,
    /// kg
    pub m2: f64,
    /// Spring constant, N/m.
    pub spring: f64,
    /// Cell length, m.
    pub a: f64,
}

impl DiatomicCell {
    pub fn new(m1: f64, m2: f64, spring: f64, a: f64) -> Result<Self> {
        let cell = Self { m1, m2, spring, a };
        cell.validate()?;
        Ok(cell)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("m1", self.m1)?;
        ensure_positive("m2", self.m2)?;
        ensure_positive("spring", self.spring)?;
        ensure_positive("a", self.a)
    }

    pub fn cell_mass(&self) -> f64 {
        self.m1 + self.m2
    }

    /// Long-wavelength slope of the acoustic branch, `√(K a² / (2 m_cell))`.
    pub fn sound_speed(&self) -> f64 {
        (self.spring * self.a * self.a / (2.0 * self.cell_mass())).sqrt()
    }

    /// The mass-weighted dynamical matrix at `k`.
    pub fn dynamical_matrix(&self, k: f64) -> [[Complex64; 2]; 2] {
        let coupling = self.coupling(k);
        [
            [Complex64::new(2.0 * self.spring / self.m1, 0.0), coupling],
            [
                coupling.conj(),
                Complex64::new(2.0 * self.spring / self.m2, 0.0),
            ],
        ]
    }

    fn coupling(&self, k: f64) -> Complex64 {
        let phase = Complex64::from_polar(1.0, -k * self.a);
        -(self.spring / (self.m1 * self.m2).sqrt()) * (1.0 + phase)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branches {
    /// rad/s
    pub omega_acoustic: f64,
    /// rad/s
    pub omega_optical: f64,
    pub e_acoustic: [Complex64; 2],
    pub e_optical: [Complex64; 2],
}

/// Acoustic and optical modes at wave number `k`, `|k| ≤ π/a`.
///
/// Eigenvectors are unit-normalized and phased so that their first
/// nonzero component is real and positive.
pub fn diatomic_branches(cell: &DiatomicCell, k: f64) -> Result<Branches> {
    cell.validate()?;
    let edge = PI / cell.a;
    if !k.is_finite() || k.abs() > edge * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "|k| must not exceed pi/a = {edge}, got {k}"
        )));
    }

    let d = cell.dynamical_matrix(k);
    let (a, c, b) = (d[0][0].re, d[1][1].re, d[0][1]);
    let mean = 0.5 * (a + c);
    let half_gap = 0.5 * (a - c);
    let upper = mean + (half_gap * half_gap + b.norm_sqr()).sqrt();
    // det D = 4K²/(m1 m2) sin²(ka/2), formed directly to avoid cancellation near k = 0
    let s = (0.5 * k * cell.a).sin();
    let det = 4.0 * cell.spring * cell.spring / (cell.m1 * cell.m2) * s * s;
    let lower = det / upper;
    let scale = a + c;
    if lower < -1e-12 * scale {
        return Err(Error::InternalConsistency(format!(
            "negative eigenvalue {lower} (scale {scale})"
        )));
    }
    let lower = lower.max(0.0);

    let e_acoustic =
        eigenvector(a, c, b, lower).unwrap_or([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let e_optical =
        eigenvector(a, c, b, upper).unwrap_or([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);

    Ok(Branches {
        omega_acoustic: lower.sqrt(),
        omega_optical: upper.sqrt(),
        e_acoustic,
        e_optical,
    })
}

/// Null vector of `[[a − μ, b], [b*, c − μ]]`, or `None` when the matrix is
/// numerically `μ·I` (degenerate case).
fn eigenvector(a: f64, c: f64, b: Complex64, mu: f64) -> Option<[Complex64; 2]> {
    let from_row1 = [b, Complex64::new(mu - a, 0.0)];
    let from_row2 = [Complex64::new(mu - c, 0.0), b.conj()];
    let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let (n1, n2) = (norm(&from_row1), norm(&from_row2));
    let (v, n) = if n1 >= n2 {
        (from_row1, n1)
    } else {
        (from_row2, n2)
    };
    if n <= f64::EPSILON * (a.abs() + c.abs() + b.norm()) {
        return None;
    }
    let mut v = [v[0] / n, v[1] / n];
    let lead = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    let phase = lead.conj() / lead.norm();
    v = [v[0] * phase, v[1] * phase];
    Some(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiAtomReport {
    /// `|C| = (m1 + m2)^{−1/2}`.
    pub c_magnitude: f64,
    pub cell_mass: f64,
    /// `|Σ_κ √m_κ e_κ^{acoustic}|²`, which should equal `cell_mass`.
    pub summed_amplitude_sq: f64,
    /// `max_κ |e_κ^{acoustic} − √m_κ |C||`.
    pub acoustic_residual: f64,
    /// `|Σ_κ √m_κ e_κ^{optical}|`, relative to `Σ_κ √m_κ |e_κ^{optical}|`.
    pub optical_residual: f64,
    /// `|summed_amplitude_sq − cell_mass| / cell_mass`.
    pub mass_residual: f64,
}

impl MultiAtomReport {
    pub fn residuals(&self) -> [f64; 3] {
        [
            self.acoustic_residual,
            self.optical_residual,
            self.mass_residual,
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().into_iter().fold(0.0, f64::max)
    }
}

/// Residuals of the `k = 0` polarization structure, without judging them.
pub fn multi_atom_report(cell: &DiatomicCell) -> Result<MultiAtomReport> {
    let modes = diatomic_branches(cell, 0.0)?;
    let sqrt_m = [cell.m1.sqrt(), cell.m2.sqrt()];
    let c_magnitude = cell.cell_mass().sqrt().recip();

    let acoustic_residual = (0..2)
        .map(|i| (modes.e_acoustic[i] - sqrt_m[i] * c_magnitude).norm())
        .fold(0.0, f64::max);

    let optical_sum: Complex64 = (0..2).map(|i| sqrt_m[i] * modes.e_optical[i]).sum();
    let optical_scale: f64 = (0..2).map(|i| sqrt_m[i] * modes.e_optical[i].norm()).sum();
    let optical_residual = optical_sum.norm() / optical_scale;

    let amplitude: Complex64 = (0..2).map(|i| sqrt_m[i] * modes.e_acoustic[i]).sum();
    let summed_amplitude_sq = amplitude.norm_sqr();
    let mass_residual = (summed_amplitude_sq - cell.cell_mass()).abs() / cell.cell_mass();

    Ok(MultiAtomReport {
        c_magnitude,
        cell_mass: cell.cell_mass(),
        summed_amplitude_sq,
        acoustic_residual,
        optical_residual,
        mass_residual,
    })
}

/// Verifies the `k = 0` polarization structure of the diatomic cell.
///
/// Fails with [`Error::CheckFailure`] if any residual exceeds
/// [`MULTI_ATOM_TOLERANCE`].
pub fn multi_atom_checks(cell: &DiatomicCell) -> Result<MultiAtomReport> {
    let report = multi_atom_report(cell)?;
    if report.max_residual() > MULTI_ATOM_TOLERANCE {
        return Err(Error::CheckFailure {
            message: "multi-atom polarization identities violated".into(),
            residuals: report.residuals().to_vec(),
        });
    }
    Ok(report)
}
