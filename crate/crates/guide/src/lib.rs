//! The book's chapters, included as docs so `cargo test` runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}

#[doc = include_str!("../../../book/src/dispersion.md")]
pub mod dispersion {}

#[doc = include_str!("../../../book/src/lambda_eff.md")]
pub mod lambda_eff {}

#[doc = include_str!("../../../book/src/monte_carlo.md")]
pub mod monte_carlo {}

#[doc = include_str!("../../../book/src/heating_rate.md")]
pub mod heating_rate {}

#[doc = include_str!("../../../book/src/lattice_oracle.md")]
pub mod lattice_oracle {}

#[doc = include_str!("../../../book/src/multi_atom.md")]
pub mod multi_atom {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
