use csl_heating::{Dispersion, Method, NoiseSpectrum};
use csl_heating_cli::envelope::{Inputs, Results, Tolerances};
use csl_heating_cli::{run, OracleReport, ResultEnvelope, EXIT_CHECK, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("csl-heat").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn envelope(args: &[&str]) -> ResultEnvelope {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

const WHITE: [&str; 6] = [
    "--spectrum",
    "white:1",
    "--dispersion",
    "linear:5000",
    "--rc",
    "1e-7",
];

#[test]
fn json_round_trip_is_bit_exact() {
    for args in [
        vec![
            "lambda-eff",
            "--spectrum",
            "lorentzian:0.3,7.7e10",
            "--dispersion",
            "sine:1.3e11,3.1e7",
            "--rc",
            "1.3e-7",
        ],
        vec![
            "rate",
            "--spectrum",
            "expcutoff:1,5e10",
            "--dispersion",
            "debye:5000,1e11",
            "--rc",
            "1e-7",
            "--mass",
            "0.1",
        ],
        vec![
            "--seed",
            "3",
            "rate",
            "--method",
            "mc",
            "--samples",
            "5000",
            "--spectrum",
            "hardcutoff:2,1e10",
            "--dispersion",
            "linear:3000",
            "--rc",
            "3e-8",
        ],
    ] {
        let (_, printed, _) = invoke(&args);
        let parsed: ResultEnvelope = serde_json::from_str(&printed).unwrap();
        let mut again = Vec::new();
        parsed.write_json(&mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), printed);
    }

    let (_, printed, _) = invoke(&[
        "oracle",
        "--spectrum",
        "white:1",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
        "--lattice",
        "8",
    ]);
    let parsed: OracleReport = serde_json::from_str(&printed).unwrap();
    let mut again = Vec::new();
    parsed.write_json(&mut again).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), printed);
}

#[test]
fn awkward_floats_survive_json() {
    let mut state = 0x9e37_79b9_7f4a_7c15_u64;
    let mut next = || {
        // xorshift over the full bit pattern, keeping finite values
        loop {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let x = f64::from_bits(state);
            if x.is_finite() {
                return x.abs();
            }
        }
    };
    for _ in 0..500 {
        let e = ResultEnvelope {
            tool: csl_heating_cli::envelope::ToolInfo::current(),
            command: "lambda-eff".into(),
            inputs: Inputs {
                spectrum_arg: "x".into(),
                dispersion_arg: "y".into(),
                spectrum: NoiseSpectrum::HardCutoff {
                    lambda0: next(),
                    omega_c: next(),
                },
                dispersion: Dispersion::Linear { c_s: next() },
                r_c: next(),
                mass: Some(next()),
            },
            constants: (&csl_heating::PhysicalConstants::default()).into(),
            tolerances: Tolerances {
                method: Method::RadialQuadrature,
                rel_tol: next(),
                abs_tol: 0.0,
                max_subdivisions: 200,
                w_max: 8.0,
                samples: None,
                seed: None,
            },
            results: Results {
                lambda_eff: next(),
                lambda_eff_error: next(),
                evaluations: 1,
                converged: true,
                suppression: Some(next()),
                rate: Some(next()),
                rate_per_mass: Some(next()),
            },
            units: Default::default(),
            warnings: vec![],
        };
        let text = serde_json::to_string(&e).unwrap();
        let back: ResultEnvelope = serde_json::from_str(&text).unwrap();
        assert_eq!(
            back.results.lambda_eff.to_bits(),
            e.results.lambda_eff.to_bits()
        );
        assert_eq!(back.inputs.r_c.to_bits(), e.inputs.r_c.to_bits());
        assert_eq!(back, e);
    }
}

#[test]
fn white_noise_examples() {
    let e = envelope(&[&["lambda-eff"][..], &WHITE].concat());
    assert!((e.results.lambda_eff - 1.0).abs() < 1e-12);

    let beyond = envelope(&[
        "lambda-eff",
        "--spectrum",
        "hardcutoff:1.0,5e11",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
    ]);
    assert!((beyond.results.lambda_eff - 1.0).abs() < 1e-9);

    let r = envelope(&[&["rate"][..], &WHITE].concat());
    assert!(r.results.rate.is_none());
    assert!((r.results.rate_per_mass.unwrap() - 0.2981).abs() < 1e-4);
}

#[test]
fn rate_is_linear_in_mass() {
    let one = envelope(&[&["rate"][..], &WHITE, &["--mass", "1.0"]].concat());
    let two = envelope(&[&["rate"][..], &WHITE, &["--mass", "2.0"]].concat());
    assert_eq!(two.results.rate.unwrap(), 2.0 * one.results.rate.unwrap());
}

#[test]
fn cutoff_rate_factorizes() {
    let white = envelope(&[&["rate"][..], &WHITE].concat());
    let cut = envelope(&[
        "rate",
        "--spectrum",
        "hardcutoff:1,5e10",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
    ]);
    let s = cut.results.suppression.unwrap();
    let expected = white.results.rate_per_mass.unwrap() * s;
    assert!((cut.results.rate_per_mass.unwrap() - expected).abs() <= 1e-14 * expected);
}

#[test]
fn outputs_record_constants_and_tolerances() {
    let e = envelope(&[
        "--rel-tol",
        "1e-7",
        "--hbar",
        "1e-34",
        "--m-n",
        "amu",
        "rate",
        "--spectrum",
        "white:1",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
    ]);
    assert_eq!(e.tolerances.rel_tol, 1e-7);
    assert_eq!(e.constants.hbar, 1e-34);
    assert_eq!(e.constants.m_n_reference, "atomic_mass_unit");
    assert_eq!(e.units["rate_per_mass"], "W/kg");
}

fn scan_rows(out: &str) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(out.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "param",
            "value",
            "lambda_eff",
            "error",
            "rate_per_mass_W_per_kg",
            "suppression"
        ]
    );
    reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn scan_contract() {
    let base = [
        "scan",
        "--spectrum",
        "hardcutoff:1,5e10",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
        "--param",
        "omega_c",
    ];
    let (code, out, _) = invoke(
        &[
            &base[..],
            &["--from", "1e12", "--to", "5e12", "--points", "2"],
        ]
        .concat(),
    );
    assert_eq!(code, EXIT_OK);
    for row in scan_rows(&out) {
        assert!((row[5].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    }

    let (_, out, _) = invoke(
        &[
            &base[..],
            &["--from", "1e9", "--to", "1e12", "--points", "13", "--log"],
        ]
        .concat(),
    );
    let rows = scan_rows(&out);
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let ratio = values[1] / values[0];
    for w in values.windows(2) {
        assert!((w[1] / w[0] / ratio - 1.0).abs() < 1e-12);
    }
    let suppression: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(suppression.windows(2).all(|w| w[0] <= w[1]));

    let (code, out, err) = invoke(&[
        "scan",
        "--spectrum",
        "white:1",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
        "--param",
        "r_c",
        "--from=-1e-7",
        "--to",
        "1e-7",
        "--points",
        "3",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.trim_end().ends_with("# warning: 2 of 3 rows failed"));
    assert_eq!(err.lines().count(), 2);
    assert_eq!(scan_rows(&out)[0][2], "nan");
}

#[test]
fn oracle_contract() {
    let (code, out, _) = invoke(&[
        "oracle",
        "--spectrum",
        "white:1",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
        "--lattice",
        "32",
        "--ratio",
        "6",
    ]);
    assert_eq!(code, EXIT_OK);
    let report: OracleReport = serde_json::from_str(&out).unwrap();
    assert!(report.lattice.deviation < 1e-3);
    assert!(report.passed);
    assert!((report.multi_atom.summed_amplitude_sq - 3.0).abs() < 1e-12);
    assert_eq!(report.multi_atom.cell_mass, 3.0);

    let (code, _, err) = invoke(&[
        "oracle",
        "--spectrum",
        "white:1",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
        "--lattice",
        "3",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());

    // a coarse zone keeps the Gaussian weight at the boundary: reported, and the sum misses the continuum
    let (code, out, _) = invoke(&[
        "oracle",
        "--spectrum",
        "white:1",
        "--dispersion",
        "linear:5000",
        "--rc",
        "1e-7",
        "--lattice",
        "8",
        "--ratio",
        "1",
    ]);
    assert_eq!(code, EXIT_CHECK);
    let report: OracleReport = serde_json::from_str(&out).unwrap();
    assert!(!report.passed);
    assert!(!report.warnings.is_empty());
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("lambda-eff"));
    let (code, _, _) = invoke(&["rate", "--help"]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = invoke(&[]);
    assert_eq!(code, EXIT_USAGE);
}
