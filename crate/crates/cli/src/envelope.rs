//! Machine-readable results.
//!
//! JSON is the canonical form: every value is written with the shortest
//! representation that parses back to the same `f64`, so a printed
//! envelope reads back bit-exactly. The CSV form is a flat
//! `field,value,unit` listing of the same content.

use std::collections::BTreeMap;
use std::io::{self, Write};

use csl_heating::{Dispersion, Method, MultiAtomReport, NoiseSpectrum, PhysicalConstants};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: "csl-heat".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsUsed {
    pub hbar: f64,
    pub m_n: f64,
    /// `proton`, `atomic_mass_unit` or `custom`.
    pub m_n_reference: String,
}

impl From<&PhysicalConstants> for ConstantsUsed {
    fn from(c: &PhysicalConstants) -> Self {
        Self {
            hbar: c.hbar,
            m_n: c.m_n,
            m_n_reference: c.nucleon_mass_label().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub w_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    /// The arguments as given on the command line.
    pub spectrum_arg: String,
    pub dispersion_arg: String,
    pub spectrum: NoiseSpectrum,
    pub dispersion: Dispersion,
    pub r_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Results {
    pub lambda_eff: f64,
    pub lambda_eff_error: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Absent when the spectrum amplitude is zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suppression: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_per_mass: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub tool: ToolInfo,
    pub command: String,
    pub inputs: Inputs,
    pub constants: ConstantsUsed,
    pub tolerances: Tolerances,
    pub results: Results,
    pub units: BTreeMap<String, String>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

pub fn units(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|&(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn result_units() -> BTreeMap<String, String> {
    units(&[
        ("hbar", "J s"),
        ("lambda_eff", "1/s"),
        ("lambda_eff_error", "1/s"),
        ("lambda0", "1/s"),
        ("mass", "kg"),
        ("m_n", "kg"),
        ("omega_c", "rad/s"),
        ("r_c", "m"),
        ("rate", "W"),
        ("rate_per_mass", "W/kg"),
        ("suppression", "1"),
        ("c_s", "m/s"),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleInputs {
    pub spectrum_arg: String,
    pub dispersion_arg: String,
    pub spectrum: NoiseSpectrum,
    pub dispersion: Dispersion,
    pub r_c: f64,
    /// Cells per edge.
    pub lattice: usize,
    /// `π r_c / a`.
    pub ratio: f64,
    /// Lattice constant derived from `ratio`.
    pub a: f64,
    pub atom_mass: f64,
    pub m1: f64,
    pub m2: f64,
    pub spring: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleThresholds {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub w_max: f64,
    pub max_deviation: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeComparison {
    pub discrete_lambda_eff: f64,
    pub continuum_lambda_eff: f64,
    pub continuum_error: f64,
    /// `|discrete − continuum| / continuum`.
    pub deviation: f64,
    pub zone_edge_weight: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub tool: ToolInfo,
    pub command: String,
    pub inputs: OracleInputs,
    pub constants: ConstantsUsed,
    pub thresholds: OracleThresholds,
    pub lattice: LatticeComparison,
    pub multi_atom: MultiAtomReport,
    pub passed: bool,
    pub units: BTreeMap<String, String>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// `{:e}` keeps the shortest round-trip digits and stays compact for the
/// very large and very small magnitudes that occur here.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:e}")
    }
}

struct Row {
    field: String,
    value: String,
    unit: &'static str,
}

fn row(field: &str, value: impl Into<String>, unit: &'static str) -> Row {
    Row {
        field: field.into(),
        value: value.into(),
        unit,
    }
}

fn num(field: &str, value: f64, unit: &'static str) -> Row {
    row(field, fmt_f64(value), unit)
}

fn write_rows(out: &mut dyn Write, rows: &[Row], warnings: &[String]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value", "unit"])?;
    for r in rows {
        w.write_record([r.field.as_str(), r.value.as_str(), r.unit])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    out.write_all(&bytes)?;
    for warning in warnings {
        writeln!(out, "# warning: {warning}")?;
    }
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::RadialQuadrature => "radial-quadrature",
        Method::MonteCarlo => "monte-carlo",
    }
}

impl ResultEnvelope {
    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let i = &self.inputs;
        let t = &self.tolerances;
        let r = &self.results;
        let mut rows = vec![
            row(
                "tool",
                format!("{} {}", self.tool.name, self.tool.version),
                "",
            ),
            row("command", self.command.clone(), ""),
            row("spectrum", i.spectrum_arg.clone(), ""),
            row("dispersion", i.dispersion_arg.clone(), ""),
            num("r_c", i.r_c, "m"),
        ];
        if let Some(m) = i.mass {
            rows.push(num("mass", m, "kg"));
        }
        rows.extend([
            num("hbar", self.constants.hbar, "J s"),
            num("m_n", self.constants.m_n, "kg"),
            row("m_n_reference", self.constants.m_n_reference.clone(), ""),
            row("method", method_name(t.method), ""),
            num("rel_tol", t.rel_tol, "1"),
            num("abs_tol", t.abs_tol, "1/s"),
            row("max_subdivisions", t.max_subdivisions.to_string(), ""),
            num("w_max", t.w_max, "1"),
        ]);
        if let Some(s) = t.samples {
            rows.push(row("samples", s.to_string(), ""));
        }
        if let Some(s) = t.seed {
            rows.push(row("seed", s.to_string(), ""));
        }
        rows.extend([
            num("lambda_eff", r.lambda_eff, "1/s"),
            num("lambda_eff_error", r.lambda_eff_error, "1/s"),
            row("evaluations", r.evaluations.to_string(), ""),
            row("converged", r.converged.to_string(), ""),
        ]);
        if let Some(s) = r.suppression {
            rows.push(num("suppression", s, "1"));
        }
        if let Some(p) = r.rate {
            rows.push(num("rate", p, "W"));
        }
        if let Some(p) = r.rate_per_mass {
            rows.push(num("rate_per_mass", p, "W/kg"));
        }
        write_rows(out, &rows, &self.warnings)
    }
}

impl OracleReport {
    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let i = &self.inputs;
        let l = &self.lattice;
        let m = &self.multi_atom;
        let rows = vec![
            row(
                "tool",
                format!("{} {}", self.tool.name, self.tool.version),
                "",
            ),
            row("command", self.command.clone(), ""),
            row("spectrum", i.spectrum_arg.clone(), ""),
            row("dispersion", i.dispersion_arg.clone(), ""),
            num("r_c", i.r_c, "m"),
            row("lattice", i.lattice.to_string(), "cells per edge"),
            num("ratio", i.ratio, "1"),
            num("a", i.a, "m"),
            num("atom_mass", i.atom_mass, "kg"),
            num("hbar", self.constants.hbar, "J s"),
            num("m_n", self.constants.m_n, "kg"),
            num("max_deviation", self.thresholds.max_deviation, "1"),
            num("max_residual", self.thresholds.max_residual, "1"),
            num("discrete_lambda_eff", l.discrete_lambda_eff, "1/s"),
            num("continuum_lambda_eff", l.continuum_lambda_eff, "1/s"),
            num("continuum_error", l.continuum_error, "1/s"),
            num("deviation", l.deviation, "1"),
            num("zone_edge_weight", l.zone_edge_weight, "1"),
            row("terms", l.terms.to_string(), ""),
            num("m1", i.m1, "mass units"),
            num("m2", i.m2, "mass units"),
            num("c_magnitude", m.c_magnitude, "mass units^-1/2"),
            num("cell_mass", m.cell_mass, "mass units"),
            num("summed_amplitude_sq", m.summed_amplitude_sq, "mass units"),
            num("acoustic_residual", m.acoustic_residual, "1"),
            num("optical_residual", m.optical_residual, "1"),
            num("mass_residual", m.mass_residual, "1"),
            row("passed", self.passed.to_string(), ""),
        ];
        write_rows(out, &rows, &self.warnings)
    }
}
