//! `family:p1,p2` and `csv:path` arguments.

use csl_heating::{
    read_tabulated_file, Dispersion, Error, NoiseSpectrum, Result, TableKind, Tabulated,
};

pub const SPECTRUM_FORMS: &str =
    "white:LAMBDA0 | hardcutoff:LAMBDA0,OMEGA_C | expcutoff:LAMBDA0,OMEGA_C | \
                                  lorentzian:LAMBDA0,OMEGA_C | csv:PATH";
pub const DISPERSION_FORMS: &str =
    "linear:C_S | debye:C_S,OMEGA_D | sine:OMEGA_MAX,Q_EDGE | csv:PATH";

fn split(arg: &str) -> Result<(String, &str)> {
    let (family, rest) = arg.split_once(':').ok_or_else(|| {
        Error::InvalidArgument(format!("'{arg}' is not of the form family:params"))
    })?;
    Ok((
        family.trim().to_ascii_lowercase().replace(['-', '_'], ""),
        rest,
    ))
}

fn numbers<const N: usize>(family: &str, rest: &str) -> Result<[f64; N]> {
    let parsed = rest
        .split(',')
        .map(|p| {
            p.trim().parse::<f64>().map_err(|_| {
                Error::InvalidArgument(format!("{family}: '{}' is not a number", p.trim()))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    parsed.try_into().map_err(|v: Vec<f64>| {
        Error::InvalidArgument(format!("{family} takes {N} parameter(s), got {}", v.len()))
    })
}

pub fn parse_spectrum(arg: &str) -> Result<NoiseSpectrum> {
    let (family, rest) = split(arg)?;
    match family.as_str() {
        "white" => {
            let [l] = numbers(&family, rest)?;
            NoiseSpectrum::white(l)
        }
        "hardcutoff" => {
            let [l, w] = numbers(&family, rest)?;
            NoiseSpectrum::hard_cutoff(l, w)
        }
        "expcutoff" | "exp" => {
            let [l, w] = numbers(&family, rest)?;
            NoiseSpectrum::exp_cutoff(l, w)
        }
        "lorentzian" => {
            let [l, w] = numbers(&family, rest)?;
            NoiseSpectrum::lorentzian(l, w)
        }
        "csv" => match read_tabulated_file(rest, TableKind::Spectrum)? {
            Tabulated::Spectrum(s) => Ok(s),
            Tabulated::Dispersion(_) => unreachable!("spectrum table requested"),
        },
        other => Err(Error::InvalidArgument(format!(
            "unknown spectrum family '{other}' (expected {SPECTRUM_FORMS})"
        ))),
    }
}

pub fn parse_dispersion(arg: &str) -> Result<Dispersion> {
    let (family, rest) = split(arg)?;
    match family.as_str() {
        "linear" => {
            let [c] = numbers(&family, rest)?;
            Dispersion::linear(c)
        }
        "debye" | "debyecapped" => {
            let [c, w] = numbers(&family, rest)?;
            Dispersion::debye_capped(c, w)
        }
        "sine" | "sineband" => {
            let [w, q] = numbers(&family, rest)?;
            Dispersion::sine_band(w, q)
        }
        "csv" => match read_tabulated_file(rest, TableKind::Dispersion)? {
            Tabulated::Dispersion(d) => Ok(d),
            Tabulated::Spectrum(_) => unreachable!("dispersion table requested"),
        },
        other => Err(Error::InvalidArgument(format!(
            "unknown dispersion family '{other}' (expected {DISPERSION_FORMS})"
        ))),
    }
}
