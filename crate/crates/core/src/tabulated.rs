//! Piecewise-linear tables and their ingestion from two-column CSV.
//!
//! Both spectra and dispersions can be supplied as tables. The loader
//! validates ordering and sign, and for dispersions makes sure the curve
//! starts at the origin.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::spectrum::NoiseSpectrum;

/// Strictly increasing abscissae with matching ordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Knots {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Knots {
    /// Builds a table from `(x, y)` pairs that must already be sorted.
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Format(format!(
                "a table needs at least 2 records, got {}",
                points.len()
            )));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Format(format!(
                    "record {i} is not finite: ({x}, {y})"
                )));
            }
        }
        let unsorted: Vec<usize> = points
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1].0 <= w[0].0)
            .map(|(i, _)| i + 1)
            .collect();
        if !unsorted.is_empty() {
            return Err(Error::Format(format!(
                "abscissae must be strictly increasing; violated at records {unsorted:?}"
            )));
        }
        if let Some(i) = points.iter().position(|&(x, _)| x < 0.0) {
            return Err(Error::Domain(format!("record {i} has a negative abscissa")));
        }
        if let Some(i) = points.iter().position(|&(_, y)| y < 0.0) {
            return Err(Error::Domain(format!("record {i} has a negative value")));
        }
        Ok(Self {
            xs: points.iter().map(|p| p.0).collect(),
            ys: points.iter().map(|p| p.1).collect(),
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn first_x(&self) -> f64 {
        self.xs[0]
    }

    pub fn last_x(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn last_y(&self) -> f64 {
        self.ys[self.ys.len() - 1]
    }

    pub fn max_y(&self) -> f64 {
        self.ys.iter().copied().fold(0.0, f64::max)
    }

    /// Linear interpolation inside `[first_x, last_x]`; knot values are
    /// returned exactly. Outside the range the caller decides, so this
    /// returns `None`.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return None;
        }
        if x == self.xs[n - 1] {
            return Some(self.ys[n - 1]);
        }
        // index of the first knot strictly greater than x
        let hi = self.xs.partition_point(|&k| k <= x);
        let lo = hi - 1;
        let (x0, x1) = (self.xs[lo], self.xs[hi]);
        let (y0, y1) = (self.ys[lo], self.ys[hi]);
        Some(y0 + (y1 - y0) * ((x - x0) / (x1 - x0)))
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.xs
            .iter()
            .copied()
            .zip(self.ys.iter().copied())
            .collect()
    }
}

impl TryFrom<Vec<(f64, f64)>> for Knots {
    type Error = Error;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self> {
        Knots::new(&points)
    }
}

impl From<Knots> for Vec<(f64, f64)> {
    fn from(knots: Knots) -> Self {
        knots.points()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Columns `(omega_rad_per_s, lambda_per_s)`.
    Spectrum,
    /// Columns `(q_rad_per_m, omega_rad_per_s)`.
    Dispersion,
}

/// A validated table, tagged with what it describes.
#[derive(Debug, Clone, PartialEq)]
pub enum Tabulated {
    Spectrum(NoiseSpectrum),
    Dispersion(Dispersion),
}

/// Validates raw records and wraps them as a tabulated spectrum or dispersion.
///
/// For dispersions the origin `(0, 0)` is prepended when missing, a nonzero
/// value at `q = 0` is rejected, and any decrease in frequency is reported
/// with the offending record indices.
pub fn load_tabulated(records: &[(f64, f64)], kind: TableKind) -> Result<Tabulated> {
    if records.len() < 2 {
        return Err(Error::Format(format!(
            "a table needs at least 2 records, got {}",
            records.len()
        )));
    }
    match kind {
        TableKind::Spectrum => Ok(Tabulated::Spectrum(NoiseSpectrum::Tabulated {
            knots: Knots::new(records)?,
        })),
        TableKind::Dispersion => {
            let mut points = records.to_vec();
            if points[0].0 == 0.0 {
                if points[0].1 != 0.0 {
                    return Err(Error::Validation {
                        message: "dispersion must vanish at q = 0".into(),
                        indices: vec![0],
                    });
                }
            } else {
                points.insert(0, (0.0, 0.0));
            }
            let knots = Knots::new(&points)?;
            // indices refer to the caller's records, so undo the prepend shift
            let shift = points.len() - records.len();
            let decreasing: Vec<usize> = knots
                .ys()
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[1] < w[0])
                .map(|(i, _)| i + 1 - shift)
                .collect();
            if !decreasing.is_empty() {
                return Err(Error::Validation {
                    message: "dispersion frequencies must be nondecreasing".into(),
                    indices: decreasing,
                });
            }
            Ok(Tabulated::Dispersion(Dispersion::Tabulated { knots }))
        }
    }
}

/// Parses two-column CSV records. A header row is optional and lines
/// starting with `#` are ignored.
pub fn parse_csv_records<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);

    let mut records = Vec::new();
    for (row, result) in rdr.records().enumerate() {
        let record = result.map_err(|e| Error::Format(format!("CSV row {row}: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Format(format!(
                "CSV row {row}: expected 2 columns, found {}",
                record.len()
            )));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) => records.push((x, y)),
            // the first data line may be a header
            _ if row == 0 && records.is_empty() => continue,
            _ => {
                return Err(Error::Format(format!(
                    "CSV row {row}: cannot parse ({}, {}) as numbers",
                    &record[0], &record[1]
                )))
            }
        }
    }
    Ok(records)
}

pub fn read_tabulated_csv<R: Read>(reader: R, kind: TableKind) -> Result<Tabulated> {
    load_tabulated(&parse_csv_records(reader)?, kind)
}

pub fn read_tabulated_file(path: impl AsRef<Path>, kind: TableKind) -> Result<Tabulated> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Format(format!("cannot open {}: {e}", path.display())))?;
    read_tabulated_csv(file, kind)
}
