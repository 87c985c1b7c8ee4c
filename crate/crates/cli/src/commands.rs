use std::f64::consts::PI;
use std::io::Write;

use csl_heating::lattice::diatomic::MULTI_ATOM_TOLERANCE;
use csl_heating::scan::{linear_grid, log_grid};
use csl_heating::{
    bz_sum_lambda_eff, heating_rate, heating_rate_per_mass, lambda_eff, lambda_eff_mc,
    multi_atom_report, scan, BaseConfig, DiatomicCell, Error, LambdaEffResult, MonatomicLattice,
    NoiseParams, NoiseSpectrum, PhysicalConstants, Result, TargetBody,
};

use crate::envelope::{
    fmt_f64, result_units, units, ConstantsUsed, Inputs, LatticeComparison, OracleInputs,
    OracleReport, OracleThresholds, ResultEnvelope, Results, Tolerances, ToolInfo,
};
use crate::model::{parse_dispersion, parse_spectrum};
use crate::{
    Cli, Command, EvalArgs, MethodArg, OracleArgs, OutputFormat, ScanArgs, EXIT_CHECK,
    EXIT_CONVERGENCE, EXIT_OK,
};

/// Largest lattice-vs-continuum deviation the oracle accepts.
pub const ORACLE_MAX_DEVIATION: f64 = 1e-2;

fn io(e: std::io::Error) -> Error {
    Error::InternalConsistency(format!("cannot write output: {e}"))
}

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::LambdaEff(args) => emit(cli, evaluate(cli, args, None, "lambda-eff", false)?, out),
        Command::Rate(args) => emit(
            cli,
            evaluate(cli, &args.eval, args.mass, "rate", true)?,
            out,
        ),
        Command::Scan(args) => cmd_scan(cli, args, out, err),
        Command::Oracle(args) => cmd_oracle(cli, args, out),
    }
}

fn emit(cli: &Cli, envelope: ResultEnvelope, out: &mut dyn Write) -> Result<i32> {
    match cli.output {
        OutputFormat::Json => envelope.write_json(out),
        OutputFormat::Csv => envelope.write_csv(out),
    }
    .map_err(io)?;
    Ok(if envelope.results.converged {
        EXIT_OK
    } else {
        EXIT_CONVERGENCE
    })
}

fn evaluate(
    cli: &Cli,
    args: &EvalArgs,
    mass: Option<f64>,
    command: &str,
    with_rate: bool,
) -> Result<ResultEnvelope> {
    let constants = cli.constants()?;
    let quadrature = cli.quadrature(&args.model)?;
    let spectrum = parse_spectrum(&args.model.spectrum)?;
    let dispersion = parse_dispersion(&args.model.dispersion)?;
    let r_c = args.model.r_c;
    NoiseParams::new(r_c, spectrum.clone())?;
    let body = match mass {
        Some(m) => TargetBody::with_mass(m)?,
        None => TargetBody::per_mass(),
    };

    let mut warnings = Vec::new();
    let (lam, converged): (LambdaEffResult, bool) = match args.method {
        MethodArg::Quad => match lambda_eff(&spectrum, &dispersion, r_c, &quadrature) {
            Ok(r) => (r, true),
            Err(Error::Convergence { best }) => {
                warnings.push(format!(
                    "quadrature did not reach rel_tol {} within {} subdivisions; values are the best estimate",
                    quadrature.rel_tol, quadrature.max_subdivisions
                ));
                (*best, false)
            }
            Err(e) => return Err(e),
        },
        MethodArg::Mc => {
            let r = lambda_eff_mc(
                &spectrum,
                |q| dispersion.evaluate_vector(q),
                r_c,
                args.samples,
                cli.seed,
            )?;
            (r, true)
        }
    };

    let amplitude = spectrum.amplitude();
    let (rate, rate_per_mass) = if with_rate {
        let total = match body.total_mass {
            Some(_) => Some(heating_rate(lam.value, &body, &constants, r_c)?),
            None => None,
        };
        (
            total,
            Some(heating_rate_per_mass(lam.value, &constants, r_c)?),
        )
    } else {
        (None, None)
    };
    let mc = args.method == MethodArg::Mc;

    Ok(ResultEnvelope {
        tool: ToolInfo::current(),
        command: command.into(),
        inputs: Inputs {
            spectrum_arg: args.model.spectrum.clone(),
            dispersion_arg: args.model.dispersion.clone(),
            spectrum,
            dispersion,
            r_c,
            mass,
        },
        constants: ConstantsUsed::from(&constants),
        tolerances: Tolerances {
            method: args.method.into(),
            rel_tol: quadrature.rel_tol,
            abs_tol: quadrature.abs_tol,
            max_subdivisions: quadrature.max_subdivisions,
            w_max: quadrature.w_max,
            samples: mc.then_some(args.samples),
            seed: mc.then_some(cli.seed),
        },
        results: Results {
            lambda_eff: lam.value,
            lambda_eff_error: lam.error_estimate,
            evaluations: lam.evaluations,
            converged,
            suppression: (amplitude > 0.0).then(|| (lam.value / amplitude).clamp(0.0, 1.0)),
            rate,
            rate_per_mass,
        },
        units: result_units(),
        warnings,
    })
}

pub const SCAN_HEADER: [&str; 6] = [
    "param",
    "value",
    "lambda_eff",
    "error",
    "rate_per_mass_W_per_kg",
    "suppression",
];

fn cmd_scan(cli: &Cli, args: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let base = BaseConfig {
        spectrum: parse_spectrum(&args.model.spectrum)?,
        dispersion: parse_dispersion(&args.model.dispersion)?,
        r_c: args.model.r_c,
        constants: cli.constants()?,
        quadrature: cli.quadrature(&args.model)?,
    };
    NoiseParams::new(base.r_c, base.spectrum.clone())?;
    let grid = if args.log {
        log_grid(args.from, args.to, args.points)?
    } else {
        linear_grid(args.from, args.to, args.points)?
    };
    let rows = scan(args.param, &grid, &base)?;

    let q = &base.quadrature;
    let tool = ToolInfo::current();
    let mut text = format!(
        "# {} {} scan\n# spectrum={} dispersion={} r_c={} m\n# hbar={} J s, m_n={} kg ({})\n\
         # rel_tol={} abs_tol={} max_subdivisions={} w_max={}\n",
        tool.name,
        tool.version,
        args.model.spectrum,
        args.model.dispersion,
        fmt_f64(base.r_c),
        fmt_f64(base.constants.hbar),
        fmt_f64(base.constants.m_n),
        base.constants.nucleon_mass_label(),
        fmt_f64(q.rel_tol),
        fmt_f64(q.abs_tol),
        q.max_subdivisions,
        fmt_f64(q.w_max),
    );

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InternalConsistency(format!("cannot write CSV: {e}"));
    w.write_record(SCAN_HEADER).map_err(csv_err)?;
    let mut failed = 0;
    for row in &rows {
        let values = match &row.outcome {
            Ok(v) => [
                v.lambda_eff,
                v.error,
                v.rate_per_mass,
                v.suppression.unwrap_or(f64::NAN),
            ],
            Err(e) => {
                failed += 1;
                writeln!(err, "warning: {}={}: {e}", args.param, fmt_f64(row.value)).map_err(io)?;
                [f64::NAN; 4]
            }
        };
        let mut record = vec![args.param.name().to_string(), fmt_f64(row.value)];
        record.extend(values.iter().map(|&v| fmt_f64(v)));
        w.write_record(&record).map_err(csv_err)?;
    }
    let body = w
        .into_inner()
        .map_err(|e| Error::InternalConsistency(e.to_string()))?;
    text.push_str(&String::from_utf8_lossy(&body));
    if failed > 0 {
        text.push_str(&format!(
            "# warning: {failed} of {} rows failed\n",
            rows.len()
        ));
    }
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_oracle(cli: &Cli, args: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let spectrum: NoiseSpectrum = parse_spectrum(&args.model.spectrum)?;
    let dispersion = parse_dispersion(&args.model.dispersion)?;
    let quadrature = cli.quadrature(&args.model)?;
    let r_c = args.model.r_c;
    NoiseParams::new(r_c, spectrum.clone())?;
    if !(args.ratio.is_finite() && args.ratio > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "--ratio must be positive, got {}",
            args.ratio
        )));
    }
    let a = PI * r_c / args.ratio;

    let lattice = MonatomicLattice::new(a, args.lattice, args.atom_mass, dispersion.clone())?;
    let cell = DiatomicCell::new(args.m1, args.m2, args.spring, a)?;
    let bz = bz_sum_lambda_eff(&lattice, &spectrum, r_c)?;
    let continuum = lambda_eff(&spectrum, &dispersion, r_c, &quadrature)?;
    if continuum.value == 0.0 {
        return Err(Error::UndefinedRatio("continuum lambda_eff is zero".into()));
    }
    let deviation = (bz.lambda_eff - continuum.value).abs() / continuum.value;
    let multi_atom = multi_atom_report(&cell)?;
    let passed =
        deviation < ORACLE_MAX_DEVIATION && multi_atom.max_residual() < MULTI_ATOM_TOLERANCE;

    let mut warnings: Vec<String> = bz.warning.into_iter().collect();
    if cli.hbar.is_some() || cli.m_n.is_some() {
        warnings
            .push("constant overrides cancel in lambda_eff and are not used by the oracle".into());
    }
    if deviation >= ORACLE_MAX_DEVIATION {
        warnings.push(format!(
            "lattice sum deviates from the continuum by {} (limit {})",
            fmt_f64(deviation),
            fmt_f64(ORACLE_MAX_DEVIATION)
        ));
    }

    let report = OracleReport {
        tool: ToolInfo::current(),
        command: "oracle".into(),
        inputs: OracleInputs {
            spectrum_arg: args.model.spectrum.clone(),
            dispersion_arg: args.model.dispersion.clone(),
            spectrum,
            dispersion,
            r_c,
            lattice: args.lattice,
            ratio: args.ratio,
            a,
            atom_mass: args.atom_mass,
            m1: args.m1,
            m2: args.m2,
            spring: args.spring,
        },
        constants: ConstantsUsed::from(&PhysicalConstants::default()),
        thresholds: OracleThresholds {
            rel_tol: quadrature.rel_tol,
            max_subdivisions: quadrature.max_subdivisions,
            w_max: quadrature.w_max,
            max_deviation: ORACLE_MAX_DEVIATION,
            max_residual: MULTI_ATOM_TOLERANCE,
        },
        lattice: LatticeComparison {
            discrete_lambda_eff: bz.lambda_eff,
            continuum_lambda_eff: continuum.value,
            continuum_error: continuum.error_estimate,
            deviation,
            zone_edge_weight: bz.zone_edge_weight,
            terms: bz.terms,
        },
        multi_atom,
        passed,
        units: units(&[
            ("r_c", "m"),
            ("a", "m"),
            ("atom_mass", "kg"),
            ("discrete_lambda_eff", "1/s"),
            ("continuum_lambda_eff", "1/s"),
            ("deviation", "1"),
            ("m1", "mass units"),
            ("m2", "mass units"),
            ("cell_mass", "mass units"),
        ]),
        warnings,
    };
    match cli.output {
        OutputFormat::Json => report.write_json(out),
        OutputFormat::Csv => report.write_csv(out),
    }
    .map_err(io)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK })
}
