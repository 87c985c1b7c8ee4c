//! Brute-force checks on finite periodic lattices.
//!
//! [`bz_sum_lambda_eff`] assembles the golden-rule heating rate of a
//! finite simple-cubic crystal term by term: one phonon is created per
//! final state, the lattice sum enforces momentum conservation on the
//! discrete Brillouin-zone grid, and only the longitudinal displacement is
//! modelled. Dividing by the white-noise rate of the same body gives a
//! discrete `λ_eff` that must approach the continuum quadrature as the
//! grid is refined. The diatomic chain in [`diatomic`] checks how the
//! result carries over to cells with more than one atom.

pub mod diatomic;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::dispersion::Dispersion;
use crate::error::{ensure_positive, Error, Result};
use crate::spectrum::NoiseSpectrum;

/// Largest admissible zone-edge Gaussian weight, relative to its peak.
pub const ZONE_EDGE_WEIGHT_LIMIT: f64 = 1e-8;

/// Simple-cubic lattice of `cells³` atoms with periodic boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonatomicLattice {
    /// Lattice constant, m.
    pub a: f64,
    /// Cells per side.
    pub cells: usize,
    /// Atomic mass, kg.
    pub atom_mass: f64,
    pub dispersion: Dispersion,
}

impl MonatomicLattice {
    pub fn new(a: f64, cells: usize, atom_mass: f64, dispersion: Dispersion) -> Result<Self> {
        let lattice = Self {
            a,
            cells,
            atom_mass,
            dispersion,
        };
        lattice.validate()?;
        Ok(lattice)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("a", self.a)?;
        ensure_positive("atom_mass", self.atom_mass)?;
        if self.cells < 4 || !self.cells.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "cells per side must be even and >= 4, got {}",
                self.cells
            )));
        }
        self.dispersion.validate()
    }

    /// Number of unit cells `L³`.
    pub fn cell_count(&self) -> usize {
        self.cells.pow(3)
    }

    /// Grid spacing `2π / (L a)` in rad/m.
    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.cells as f64 * self.a)
    }

    pub fn grid(&self) -> BzGrid {
        BzGrid {
            cells: self.cells,
            dk: self.dk(),
        }
    }
}

/// The `L³` allowed wave vectors `(2π/(L a)) n` with `n_i ∈ (−L/2, L/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BzGrid {
    cells: usize,
    dk: f64,
}

impl BzGrid {
    pub fn len(&self) -> usize {
        self.cells.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        self.cells == 0
    }

    /// Integer labels along one axis.
    pub fn axis(&self) -> impl Iterator<Item = i64> + Clone {
        let half = (self.cells / 2) as i64;
        (1 - half)..=half
    }

    pub fn wave_vector(&self, n: [i64; 3]) -> [f64; 3] {
        n.map(|c| self.dk * c as f64)
    }

    /// Maps an integer label back into `(−L/2, L/2]`.
    pub fn wrap(&self, n: i64) -> i64 {
        let l = self.cells as i64;
        let half = l / 2;
        (n + half - 1).rem_euclid(l) - half + 1
    }

    pub fn points(&self) -> impl Iterator<Item = [i64; 3]> + '_ {
        let axis = self.axis();
        axis.clone().flat_map(move |x| {
            let axis2 = axis.clone();
            axis.clone()
                .flat_map(move |y| axis2.clone().map(move |z| [x, y, z]))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BzSumResult {
    /// Discrete `λ_eff`, s⁻¹.
    pub lambda_eff: f64,
    /// Golden-rule heating power of the finite crystal, W.
    pub rate: f64,
    /// `π r_c / a`.
    pub ratio: f64,
    /// Gaussian weight `e^{−w²} w²` at the zone face, relative to its peak.
    pub zone_edge_weight: f64,
    /// Grid points summed (excluding `k = 0`).
    pub terms: usize,
    /// Set when the zone-edge weight exceeds [`ZONE_EDGE_WEIGHT_LIMIT`].
    pub warning: Option<String>,
}

/// `|Σ_ℓ e^{i q·R_ℓ} q·u_ℓ|²` between the phonon vacuum and one longitudinal
/// phonon at `k`, with `q = k`: `𝒩 ħ k² / (2 m_A ω_L(k))`.
pub fn one_phonon_amplitude_factor(
    lattice: &MonatomicLattice,
    k: [f64; 3],
    consts: &PhysicalConstants,
) -> Result<f64> {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if !k2.is_finite() || k2 <= 0.0 {
        return Err(Error::InvalidArgument(
            "k = 0 carries no energy; the factor is undefined".into(),
        ));
    }
    let omega = lattice.dispersion.omega(k2.sqrt());
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "dispersion vanishes at |k| = {}; one-phonon amplitude diverges",
            k2.sqrt()
        )));
    }
    let n = lattice.cell_count() as f64;
    Ok(n * consts.hbar * k2 / (2.0 * lattice.atom_mass * omega))
}

/// Discrete golden-rule `λ_eff` on the lattice's Brillouin-zone grid.
///
/// For each final state with one phonon at `k ≠ 0` the term is
///
/// ```text
/// r_c³/(π^{3/2} m_N²) · Δ³k · e^{−r_c² k²} λ(ω_k) ħω_k · m_A² |M_k|²
/// ```
///
/// where `|M_k|²` is [`one_phonon_amplitude_factor`] and `Δ³k` is the
/// weight of the momentum-conserving peak of the lattice sum. The total is
/// divided by the white-noise rate `(3/4) ħ² M / (m_N² r_c²)` with
/// `M = L³ m_A`. Terms are reduced per slab and then pairwise, so the
/// result does not depend on the thread count.
pub fn bz_sum_lambda_eff(
    lattice: &MonatomicLattice,
    spectrum: &NoiseSpectrum,
    r_c: f64,
) -> Result<BzSumResult> {
    lattice.validate()?;
    spectrum.validate()?;
    ensure_positive("r_c", r_c)?;
    let consts = PhysicalConstants::default();

    let grid = lattice.grid();
    let dk = grid.dk;
    let prefactor = r_c.powi(3) / (PI.powf(1.5) * consts.m_n * consts.m_n) * dk.powi(3);
    let mass_sq = lattice.atom_mass * lattice.atom_mass;

    let axis: Vec<i64> = grid.axis().collect();
    let slabs: Vec<Result<f64>> = axis
        .par_iter()
        .map(|&x| {
            let mut terms = Vec::with_capacity(axis.len() * axis.len());
            for &y in &axis {
                for &z in &axis {
                    if x == 0 && y == 0 && z == 0 {
                        continue;
                    }
                    let k = grid.wave_vector([x, y, z]);
                    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                    let omega = lattice.dispersion.omega(k2.sqrt());
                    let amplitude = one_phonon_amplitude_factor(lattice, k, &consts)?;
                    let energy = consts.hbar * omega;
                    let weight = (-r_c * r_c * k2).exp();
                    terms.push(
                        prefactor * weight * spectrum.rate(omega) * energy * mass_sq * amplitude,
                    );
                }
            }
            Ok(pairwise_sum(&terms))
        })
        .collect();
    let slabs = slabs.into_iter().collect::<Result<Vec<f64>>>()?;
    let rate = pairwise_sum(&slabs);

    let total_mass = lattice.cell_count() as f64 * lattice.atom_mass;
    let white_rate =
        0.75 * consts.hbar * consts.hbar * total_mass / (consts.m_n * consts.m_n * r_c * r_c);

    let ratio = PI * r_c / lattice.a;
    let zone_edge_weight = (1.0 - ratio * ratio).exp() * ratio * ratio;
    let warning = (zone_edge_weight > ZONE_EDGE_WEIGHT_LIMIT).then(|| {
        format!(
            "zone-edge Gaussian weight {zone_edge_weight:.3e} exceeds {ZONE_EDGE_WEIGHT_LIMIT:e} of its peak \
             (pi r_c / a = {ratio:.3}); the lattice is not in the continuum regime"
        )
    });

    Ok(BzSumResult {
        lambda_eff: rate / white_rate,
        rate,
        ratio,
        zone_edge_weight,
        terms: grid.len() - 1,
        warning,
    })
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        xs.iter().sum()
    } else {
        let (l, r) = xs.split_at(xs.len() / 2);
        pairwise_sum(l) + pairwise_sum(r)
    }
}

/// Energy bookkeeping for a mode holding `n` phonons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupancyBalance {
    /// Creation channel, `(n+1) ħω`, J.
    pub gain_up: f64,
    /// Annihilation channel, `−n ħω`, J.
    pub gain_down: f64,
    /// `ħω`, J.
    pub net: f64,
}

/// Creation and annihilation contributions for an `n`-phonon initial state.
/// The net coefficient `(n+1) − n` is formed in integer arithmetic, so
/// `net` is exactly `ħω` for every `n`.
pub fn occupancy_cancellation_check(
    n: u64,
    omega: f64,
    consts: &PhysicalConstants,
) -> OccupancyBalance {
    let quantum = consts.hbar * omega;
    let up = n + 1;
    OccupancyBalance {
        gain_up: up as f64 * quantum,
        gain_down: -(n as f64) * quantum,
        net: (up - n) as f64 * quantum,
    }
}

/// Uniform bound `(q u_max)²/2` on `|e^{iq·u} − (1 + iq·u)|` for `|u| ≤ u_max`.
pub fn dipole_approx_error(q: f64, u_max: f64) -> Result<f64> {
    if !q.is_finite() || !u_max.is_finite() || q < 0.0 || u_max < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "q and u_max must be finite and nonnegative, got {q}, {u_max}"
        )));
    }
    let x = q * u_max;
    Ok(0.5 * x * x)
}
