//! Subcommand implementations. Each returns the process exit code or a
//! [`CliError`] carrying one.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bnspect_core::random::{
    empirical_normalized_precision, random_bn, sample_data, GeneratorConfig, Noise, Structure,
};
use bnspect_core::spectral::{symmetric_eigenvalues, symmetry_about};
use bnspect_core::{LinearBn, ModelError, DEFAULT_TOL};
use rayon::prelude::*;
use thiserror::Error;

use crate::cli::{Cli, Command, GenArgs, ModelKind, Theorem};
use crate::data::{read_csv, write_csv, DataError};
use crate::model::{parse_model, serialize_model, sha256_hex};
use crate::report::{analyze_estimate, analyze_model, fmt17};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

/// Selects the noise law for `sample`: `gaussian` (default) or `uniform`.
pub const NOISE_ENV: &str = "BNSPECT_NOISE";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Malformed { .. } => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn load_model(path: &Path) -> Result<LinearBn, CliError> {
    parse_model(&read_text(path)?).map_err(|e| CliError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(io_err(path)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn structure(args: GenArgs) -> Result<Structure, CliError> {
    match args.kind {
        ModelKind::Forest => Ok(Structure::Forest),
        ModelKind::Bounded => args
            .k
            .map(Structure::MaxIndegree)
            .ok_or_else(|| CliError::Usage("bounded models need --K".into())),
        ModelKind::Erdos => match args.p {
            Some(p) if (0.0..=1.0).contains(&p) => Ok(Structure::EdgeProbability(p)),
            Some(p) => Err(CliError::Usage(format!("--p must lie in [0, 1], got {p}"))),
            None => Err(CliError::Usage("erdos models need --p".into())),
        },
    }
}

fn generate(args: GenArgs, seed: u64) -> Result<LinearBn, CliError> {
    let config = GeneratorConfig::new(args.n, structure(args)?, seed);
    random_bn(&config).map_err(|e: ModelError| CliError::Usage(e.to_string()))
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let seed = cli.seed.unwrap_or(0);
    let out = cli.out.as_deref();
    match cli.command {
        Command::Gen { kind, n, k, p } => {
            let args = GenArgs {
                kind,
                n: n as usize,
                k,
                p,
            };
            emit(out, &serialize_model(&generate(args, seed)?))?;
            Ok(EXIT_OK)
        }
        Command::Analyze { model } => {
            let bn = load_model(&model)?;
            emit(out, &analyze_model(&bn, tol).to_json())?;
            Ok(EXIT_OK)
        }
        Command::Verify { model, theorem } => {
            let bn = load_model(&model)?;
            let (code, text) = verify(&bn, theorem, tol);
            emit(out, &text)?;
            Ok(code)
        }
        Command::Sample { model, rows } => {
            let bn = load_model(&model)?;
            let noise = match std::env::var(NOISE_ENV).as_deref() {
                Err(_) | Ok("gaussian") | Ok("") => Noise::Gaussian,
                Ok("uniform") => Noise::Uniform,
                Ok(other) => {
                    return Err(CliError::Usage(format!(
                        "{NOISE_ENV} must be gaussian or uniform, got {other:?}"
                    )))
                }
            };
            let data = sample_data(&bn, rows as usize, seed, noise);
            let mut buf = Vec::new();
            write_csv(&data, &mut buf).expect("writing to memory cannot fail");
            emit(out, std::str::from_utf8(&buf).expect("csv output is utf-8"))?;
            Ok(EXIT_OK)
        }
        Command::Estimate { data } => {
            let text = read_text(&data)?;
            let malformed = |message: String| CliError::Malformed {
                path: data.clone(),
                message,
            };
            let matrix =
                read_csv(text.as_bytes()).map_err(|e: DataError| malformed(e.to_string()))?;
            if matrix.rows() <= matrix.cols() {
                return Err(malformed(format!(
                    "{} observations for {} variables; need more observations than variables",
                    matrix.rows(),
                    matrix.cols()
                )));
            }
            let omega_hat =
                empirical_normalized_precision(&matrix).map_err(|e| malformed(e.to_string()))?;
            let report = analyze_estimate(
                &omega_hat,
                matrix.labels().to_vec(),
                sha256_hex(text.as_bytes()),
                tol,
            )
            .map_err(|e| malformed(e.to_string()))?;
            emit(out, &report.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Experiment {
            kind,
            trials,
            n,
            k,
            p,
        } => {
            let args = GenArgs {
                kind,
                n: n as usize,
                k,
                p,
            };
            structure(args)?;
            emit(out, &experiment(args, trials as usize, seed, tol)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn matrix_text(m: &nalgebra::DMatrix<f64>) -> String {
    let mut s = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
        let _ = writeln!(s, "  [{}]", cells.join(", "));
    }
    s
}

fn eigen_text(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| fmt17(*v)).collect();
    format!("[{}]", cells.join(", "))
}

/// Exit code plus a human-readable account of the check.
pub fn verify(bn: &LinearBn, theorem: Theorem, tol: f64) -> (i32, String) {
    let mut s = String::new();
    match theorem {
        Theorem::One => {
            let r = bn.verify_theorem1(tol);
            let _ = writeln!(
                s,
                "precision vs Kirchhoff residual {} (relative {}), normalized precision vs normalized Laplacian residual {}, tol {}",
                fmt17(r.precision_abs),
                fmt17(r.precision_rel),
                fmt17(r.normalized_abs),
                fmt17(tol)
            );
            if r.passed {
                s.push_str("confirmed\n");
                (EXIT_OK, s)
            } else {
                let h = bn.structural_hypergraph();
                let pair = bn.precision();
                let _ = write!(
                    s,
                    "COUNTEREXAMPLE\nprecision:\n{}kirchhoff laplacian:\n{}",
                    matrix_text(&pair.precision),
                    matrix_text(&h.kirchhoff_laplacian())
                );
                (EXIT_COUNTEREXAMPLE, s)
            }
        }
        Theorem::Two | Theorem::Three => {
            let forest = bn.dag().moralize().is_forest();
            let omega = bn.precision().normalized_precision;
            let spectrum = symmetric_eigenvalues(&omega).expect("Ω is symmetric");
            let lambda1 = spectrum.largest().unwrap_or(0.0);
            let sym = symmetry_about(&spectrum, 1.0, tol);
            let _ = writeln!(
                s,
                "moral graph is a forest: {forest}\neigenvalues: {}\nlambda1: {}\nsymmetry residual: {}",
                eigen_text(spectrum.eigenvalues()),
                fmt17(lambda1),
                fmt17(sym.max_residual)
            );
            if theorem == Theorem::Two {
                if !forest {
                    s.push_str("hypothesis not satisfied; implication vacuous\n");
                    (EXIT_OK, s)
                } else if lambda1 <= 2.0 + tol {
                    s.push_str("confirmed: lambda1 <= 2\n");
                    (EXIT_OK, s)
                } else {
                    let _ = write!(
                        s,
                        "COUNTEREXAMPLE: lambda1 > 2\nomega:\n{}",
                        matrix_text(&omega)
                    );
                    (EXIT_COUNTEREXAMPLE, s)
                }
            } else if forest {
                if sym.symmetric {
                    s.push_str("confirmed: spectrum symmetric about 1\n");
                    (EXIT_OK, s)
                } else {
                    let _ = write!(
                        s,
                        "COUNTEREXAMPLE: forest moral graph with asymmetric spectrum\nomega:\n{}",
                        matrix_text(&omega)
                    );
                    (EXIT_COUNTEREXAMPLE, s)
                }
            } else {
                let a1 = bn.check_assumption1(tol);
                let a2 = bn
                    .check_assumption2(bn.default_assumption2_power(), tol)
                    .expect("default power is odd");
                if !a1.is_empty() || !a2.is_empty() {
                    let _ = writeln!(
                        s,
                        "assumption violations (pairs {a1:?}, powers {a2:?}); hypothesis not satisfied; implication vacuous"
                    );
                    (EXIT_OK, s)
                } else if sym.symmetric {
                    let _ = write!(
                        s,
                        "COUNTEREXAMPLE: symmetric spectrum but moral graph is not a tree\nomega:\n{}",
                        matrix_text(&omega)
                    );
                    (EXIT_COUNTEREXAMPLE, s)
                } else {
                    s.push_str("confirmed: moral graph is not a tree and spectrum is not symmetric about 1\n");
                    (EXIT_OK, s)
                }
            }
        }
    }
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub max_indegree: usize,
    pub moral_forest: bool,
    pub lambda1: f64,
    pub symmetry_residual: f64,
    pub theorem1_residual: f64,
    pub theorem1_pass: bool,
    pub lambda_pass: bool,
    pub symmetry_pass: bool,
}

pub const EXPERIMENT_HEADER: [&str; 10] = [
    "trial",
    "seed",
    "max_indegree",
    "moral_forest",
    "lambda1",
    "symmetry_residual",
    "theorem1_residual",
    "theorem1_pass",
    "lambda_pass",
    "symmetry_pass",
];

/// Trial `t` uses seed `base ^ t`.
pub fn run_trial(
    args: GenArgs,
    trial: usize,
    base_seed: u64,
    tol: f64,
) -> Result<TrialRow, CliError> {
    let seed = base_seed ^ trial as u64;
    let bn = generate(args, seed)?;
    let omega = bn.precision().normalized_precision;
    let spectrum = symmetric_eigenvalues(&omega).expect("Ω is symmetric");
    let lambda1 = spectrum.largest().unwrap_or(0.0);
    let sym = symmetry_about(&spectrum, 1.0, tol);
    let t1 = bn.verify_theorem1(tol);
    Ok(TrialRow {
        trial,
        seed,
        max_indegree: bn.dag().max_indegree(),
        moral_forest: bn.dag().moralize().is_forest(),
        lambda1,
        symmetry_residual: sym.max_residual,
        theorem1_residual: t1.precision_rel.max(t1.normalized_abs),
        theorem1_pass: t1.passed,
        lambda_pass: lambda1 <= 2.0 + tol,
        symmetry_pass: sym.symmetric,
    })
}

pub fn experiment(
    args: GenArgs,
    trials: usize,
    base_seed: u64,
    tol: f64,
) -> Result<String, CliError> {
    let rows: Vec<TrialRow> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(args, t, base_seed, tol))
        .collect::<Result<_, _>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(EXPERIMENT_HEADER).map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.max_indegree.to_string(),
            r.moral_forest.to_string(),
            fmt17(r.lambda1),
            fmt17(r.symmetry_residual),
            fmt17(r.theorem1_residual),
            r.theorem1_pass.to_string(),
            r.lambda_pass.to_string(),
            r.symmetry_pass.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let rate = |f: fn(&TrialRow) -> bool| {
        fmt17(rows.iter().filter(|r| f(r)).count() as f64 / rows.len() as f64)
    };
    let max_of = |f: fn(&TrialRow) -> f64| fmt17(rows.iter().map(f).fold(0.0, f64::max));
    w.write_record([
        "summary".to_string(),
        String::new(),
        rows.iter()
            .map(|r| r.max_indegree)
            .max()
            .unwrap_or(0)
            .to_string(),
        rate(|r| r.moral_forest),
        max_of(|r| r.lambda1),
        max_of(|r| r.symmetry_residual),
        max_of(|r| r.theorem1_residual),
        rate(|r| r.theorem1_pass),
        rate(|r| r.lambda_pass),
        rate(|r| r.symmetry_pass),
    ])
    .map_err(csv_err)?;
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
