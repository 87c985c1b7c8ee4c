//! Heating of solids by mass-proportional collapse noise with a colored
//! power spectrum.
//!
//! The central quantity is the effective rate [`lambda_eff`]: the collapse
//! rate spectrum `λ(ω)` averaged over longitudinal acoustic phonons with
//! the Gaussian weight set by the correlation length `r_c`. For white
//! noise it equals the constant rate; a spectrum that cuts off below the
//! phonon frequencies at `q ~ 1/r_c` suppresses it. [`heating_rate`] turns
//! it into a power.
//!
//! ```
//! use csl_heating::{lambda_eff, Dispersion, NoiseSpectrum, QuadratureOptions};
//!
//! let spectrum = NoiseSpectrum::hard_cutoff(1.0, 5e10)?;
//! let sound = Dispersion::linear(5000.0)?;
//! let result = lambda_eff(&spectrum, &sound, 1e-7, &QuadratureOptions::default())?;
//! assert!((result.value - 0.150_854_963_915_390_4).abs() < 1e-9);
//! # Ok::<(), csl_heating::Error>(())
//! ```
//!
//! The [`lattice`] module holds brute-force finite-lattice checks of the
//! same result, and [`lambda_eff_mc`] a Monte Carlo estimate that also
//! accepts direction-dependent dispersions.

pub mod constants;
pub mod dispersion;
pub mod error;
pub mod heating;
pub mod lattice;
pub mod montecarlo;
pub mod quadrature;
pub mod scan;
pub mod spectrum;
pub mod tabulated;

pub use constants::PhysicalConstants;
pub use dispersion::Dispersion;
pub use error::{Error, Result};
pub use heating::{
    heating_rate, heating_rate_per_mass, lambda_eff, suppression_factor, LambdaEffResult, Method,
    NoiseParams, QuadratureOptions, TargetBody,
};
pub use lattice::diatomic::{
    diatomic_branches, multi_atom_checks, multi_atom_report, Branches, DiatomicCell,
    MultiAtomReport,
};
pub use lattice::{
    bz_sum_lambda_eff, dipole_approx_error, occupancy_cancellation_check,
    one_phonon_amplitude_factor, BzGrid, BzSumResult, MonatomicLattice, OccupancyBalance,
};
pub use montecarlo::lambda_eff_mc;
pub use scan::{scan, BaseConfig, ScanParam, ScanRow, ScanValues};
pub use spectrum::NoiseSpectrum;
pub use tabulated::{
    load_tabulated, read_tabulated_csv, read_tabulated_file, Knots, TableKind, Tabulated,
};
