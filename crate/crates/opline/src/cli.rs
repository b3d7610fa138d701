//! Command dispatch and plain-text reports.
//!
//! Report columns:
//!
//! | command     | lines                                                        |
//! |-------------|--------------------------------------------------------------|
//! | `check`     | `lagrangian: <bool>`, `compatible: <bool>`, `rank: r`, `isotropy_defect: e` |
//! | `transform` | the image basis as a matrix file                             |
//! | `extract`   | `# T_hat` matrix, `# T_check` matrix, `# dims n0 n1 n_inf` then the dims |
//! | `decompose` | `dims M00 M01 M10 M11 M0 M1`, the six dims, `generic_angles`, the angles |
//! | `eig`       | `# lambda multiplicity`, then one line per eigenvalue (`inf` last) |
//! | `probe`     | `# lambda t_star sigma_est status`, one line per grid value  |
//! | `orbit`     | `orbit: planar` or `orbit: generic`, then the spanning vectors as a matrix |
//!
//! Reals in reports use 12 fixed decimals; matrices use the matrix file
//! format. Exit codes: 0 success, 1 domain error (or a negative `check`
//! verdict), 2 I/O, parse or usage error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use opline_core::mobius::{act_point, orbit_classify, OrbitClass};
use opline_core::projective::{decompose, extract_operator, graph_of_operator};
use opline_core::spectral::{eigen_sweep, infinity_eigen_test, resolvent_probe};
use opline_core::subspace::principal_angles;
use opline_core::symplectic::{build_polarization, is_lagrangian, isotropy_defect, swap_halves};
use opline_core::{
    DenseMatrix, EigenReport, Eigenvalue, GroupElement, LagrangianPoint, Polarization,
    TolerancePolicy,
};
use thiserror::Error;

use crate::format::{parse_group, parse_real_list, read_matrix_file, write_matrix, ReadError};

// An alias keeps clap from treating the list flags as repeated arguments.
type RealList = Vec<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Transform,
    Extract,
    Decompose,
    Eig,
    Probe,
    Orbit,
    #[value(name = "example-r4")]
    ExampleR4,
}

#[derive(Debug, Parser)]
#[command(
    name = "opline",
    version,
    about = "Lagrangian points, Möbius actions and spectral probes"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// U matrix (n x n, orthogonal); defaults to the identity
    #[arg(long)]
    pub polarization: Option<PathBuf>,
    /// Basis of a Lagrangian subspace (2n x r)
    #[arg(long)]
    pub point: Option<PathBuf>,
    /// Symmetric operator T (n x n); its graph is used as the point
    #[arg(long)]
    pub operator: Option<PathBuf>,
    /// Group element: a,b,c,d or K:t | N:t | NP:t | A:t | NL:lambda,t | AL:lambda,t
    #[arg(long = "g", allow_hyphen_values = true, value_parser = parse_group)]
    pub group: Option<GroupElement>,
    /// Comma-separated λ values; `inf` is accepted
    #[arg(long, allow_hyphen_values = true, value_parser = parse_real_list)]
    pub grid: Option<RealList>,
    /// Comma-separated vector in (y, x) order for `orbit`
    #[arg(long, allow_hyphen_values = true, value_parser = parse_real_list)]
    pub vector: Option<RealList>,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 20.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub bisect_tol: f64,
    /// Angle tolerance (intersections, containment, isotropy)
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Relative rank tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub rank_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub polarization_path: Option<PathBuf>,
    pub point_path: Option<PathBuf>,
    pub operator_path: Option<PathBuf>,
    pub group: Option<GroupElement>,
    pub grid: Option<Vec<f64>>,
    pub vector: Option<Vec<f64>>,
    pub epsilon: f64,
    pub t_max: f64,
    pub bisect_tol: f64,
    pub rank_tol: f64,
    pub angle_tol: f64,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let pol = TolerancePolicy::default();
        RunConfig {
            command,
            polarization_path: None,
            point_path: None,
            operator_path: None,
            group: None,
            grid: None,
            vector: None,
            epsilon: 0.5,
            t_max: 20.0,
            bisect_tol: 1e-10,
            rank_tol: pol.rank_tol,
            angle_tol: pol.angle_tol,
            output_path: None,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        RunConfig {
            command: c.command,
            polarization_path: c.polarization,
            point_path: c.point,
            operator_path: c.operator,
            group: c.group,
            grid: c.grid,
            vector: c.vector,
            epsilon: c.eps,
            t_max: c.tmax,
            bisect_tol: c.bisect_tol,
            rank_tol: c.rank_tol,
            angle_tol: c.tol,
            output_path: c.out,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Domain(#[from] opline_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

/// A finished report and the exit code that goes with it.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub code: i32,
}

fn fixed(v: f64) -> String {
    format!("{v:.12}")
}

fn policy(cfg: &RunConfig) -> Result<TolerancePolicy, CliError> {
    TolerancePolicy::new(cfg.rank_tol, cfg.angle_tol).map_err(|e| CliError::Usage(e.to_string()))
}

fn require<'a, T>(v: &'a Option<T>, flag: &str, cmd: Command) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| {
        let name = cmd
            .to_possible_value()
            .map(|p| p.get_name().to_string())
            .unwrap_or_default();
        CliError::Usage(format!("`{name}` requires --{flag}"))
    })
}

/// Polarization from `--polarization`, or the identity of size `n`.
fn load_polarization(cfg: &RunConfig, n: usize) -> Result<Polarization, CliError> {
    let pol = policy(cfg)?;
    let u = match &cfg.polarization_path {
        Some(path) => read_matrix_file(path)?,
        None => DenseMatrix::identity(n),
    };
    if u.shape() != (n, n) {
        return Err(CliError::Domain(opline_core::Error::DimensionMismatch {
            expected: n,
            found: u.rows(),
        }));
    }
    Ok(build_polarization(u, pol)?)
}

/// The point from `--point` or the graph of `--operator`.
fn load_point(cfg: &RunConfig) -> Result<(Polarization, LagrangianPoint), CliError> {
    match (&cfg.point_path, &cfg.operator_path) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give only one of --point and --operator".into(),
        )),
        (Some(path), None) => {
            let b = read_matrix_file(path)?;
            if b.rows() % 2 != 0 || b.rows() == 0 {
                return Err(CliError::Usage(format!(
                    "point basis must have an even, positive number of rows, got {}",
                    b.rows()
                )));
            }
            let p = load_polarization(cfg, b.rows() / 2)?;
            let pt = LagrangianPoint::from_vectors(&p, &b)?;
            Ok((p, pt))
        }
        (None, Some(path)) => {
            let t = read_matrix_file(path)?;
            let p = load_polarization(cfg, t.rows())?;
            let pt = graph_of_operator(&p, &t)?;
            Ok((p, pt))
        }
        (None, None) => Err(CliError::Usage(
            "this command requires --point or --operator".into(),
        )),
    }
}

fn eig_lines(reports: &[EigenReport]) -> String {
    let mut s = String::from("# lambda multiplicity\n");
    for r in reports {
        let l = match r.lambda {
            Eigenvalue::Finite(v) => fixed(v),
            Eigenvalue::Infinity => "inf".into(),
        };
        let _ = writeln!(s, "{l} {}", r.multiplicity);
    }
    s
}

fn cmd_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let path = require(&cfg.point_path, "point", cfg.command)?;
    let b = read_matrix_file(path)?;
    if b.rows() % 2 != 0 || b.rows() == 0 {
        return Err(CliError::Usage(format!(
            "point basis must have an even, positive number of rows, got {}",
            b.rows()
        )));
    }
    let p = load_polarization(cfg, b.rows() / 2)?;
    let s = opline_core::subspace::orthonormalize(&b, p.policy())?;
    let lagrangian = is_lagrangian(&p, &s)?;
    let compatible = opline_core::projective::check_compatible(&p, &s)?;
    let report = format!(
        "lagrangian: {lagrangian}\ncompatible: {compatible}\nrank: {}\nisotropy_defect: {:e}\n",
        s.rank(),
        isotropy_defect(&p, &s)?
    );
    Ok(Outcome {
        report,
        code: if lagrangian && compatible { 0 } else { 1 },
    })
}

fn cmd_transform(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let g = require(&cfg.group, "g", cfg.command)?;
    let (p, pt) = load_point(cfg)?;
    let moved = act_point(&p, g, &pt)?;
    Ok(Outcome {
        report: write_matrix(moved.space().basis()),
        code: 0,
    })
}

fn cmd_extract(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (p, pt) = load_point(cfg)?;
    let pair = extract_operator(&p, &pt)?;
    let report = format!(
        "# T_hat\n{}# T_check\n{}# dims n0 n1 n_inf\n{} {} {}\n",
        write_matrix(&pair.t_hat),
        write_matrix(&pair.t_check),
        pt.n0().rank(),
        pt.n1().rank(),
        pt.n_inf().rank()
    );
    Ok(Outcome { report, code: 0 })
}

fn cmd_decompose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (p, pt) = load_point(cfg)?;
    let d = decompose(&p, &pt)?;
    let dims: Vec<String> = d.dims().iter().map(|v| v.to_string()).collect();
    let angles: Vec<String> = d.generic_angles.iter().map(|&a| fixed(a)).collect();
    let report = format!(
        "dims M00 M01 M10 M11 M0 M1\n{}\ngeneric_angles\n{}\n",
        dims.join(" "),
        angles.join(" ")
    );
    Ok(Outcome { report, code: 0 })
}

fn cmd_eig(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = require(&cfg.grid, "grid", cfg.command)?;
    let (p, pt) = load_point(cfg)?;
    let reports = eigen_sweep(&p, &pt, grid)?;
    Ok(Outcome {
        report: eig_lines(&reports),
        code: 0,
    })
}

fn cmd_probe(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = require(&cfg.grid, "grid", cfg.command)?;
    let (p, pt) = load_point(cfg)?;
    let mut values: Vec<f64> = grid.iter().copied().filter(|v| v.is_finite()).collect();
    if values.len() != grid.len() {
        return Err(CliError::Usage("probe grid values must be finite".into()));
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut s = String::from("# lambda t_star sigma_est status\n");
    for lambda in values {
        let r = resolvent_probe(&p, &pt, lambda, cfg.epsilon, cfg.t_max, cfg.bisect_tol)?;
        let _ = writeln!(
            s,
            "{} {} {:e} {}",
            fixed(r.lambda),
            fixed(r.t_star),
            r.sigma_est,
            r.status()
        );
    }
    Ok(Outcome { report: s, code: 0 })
}

fn cmd_orbit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let z = require(&cfg.vector, "vector", cfg.command)?;
    if z.len() % 2 != 0 || z.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!(
            "--vector needs an even number of finite entries, got {}",
            z.len()
        )));
    }
    let p = load_polarization(cfg, z.len() / 2)?;
    let report = match orbit_classify(&p, z)? {
        OrbitClass::Planar { plane } => format!("orbit: planar\n{}", write_matrix(plane.basis())),
        OrbitClass::Generic { spanning } => {
            let cols: Vec<&[f64]> = spanning.iter().map(|c| c.as_slice()).collect();
            let m = DenseMatrix::from_columns(z.len(), &cols)?;
            format!("orbit: generic\n{}", write_matrix(&m))
        }
    };
    Ok(Outcome { report, code: 0 })
}

/// The worked R^4 example: `U = I_2`, `N = span(e1 + e3, e2 + 2 e4)` with
/// the `M` block listed first.
fn cmd_example_r4(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = build_polarization(DenseMatrix::identity(2), policy(cfg)?)?;
    let v1 = swap_halves(&[1.0, 0.0, 1.0, 0.0]);
    let v2 = swap_halves(&[0.0, 1.0, 0.0, 2.0]);
    let pt = LagrangianPoint::from_vectors(&p, &DenseMatrix::from_columns(4, &[&v1, &v2])?)?;
    let mut s = String::from("example-r4: U = I_2, N = span(e1+e3, e2+2e4)\n");
    let mut ok = true;
    let mut verdict = |s: &mut String, name: &str, pass: bool, detail: String| {
        ok &= pass;
        let _ = writeln!(
            s,
            "{name}: {detail} [{}]",
            if pass { "match" } else { "MISMATCH" }
        );
    };

    let pair = extract_operator(&p, &pt)?;
    let dev = pair.t_hat.max_abs_diff(&DenseMatrix::diag(&[1.0, 2.0]));
    verdict(
        &mut s,
        "T_hat vs diag(1,2)",
        dev <= 1e-12,
        format!("max deviation {dev:.1e}"),
    );

    let mut cos: Vec<f64> = principal_angles(&p.m(), pt.space())?
        .iter()
        .map(|a| a.cos())
        .collect();
    cos.sort_by(f64::total_cmp);
    let want = [1.0 / 5f64.sqrt(), 1.0 / 2f64.sqrt()];
    let cdev = cos
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    verdict(
        &mut s,
        "cosines vs {1/sqrt5, 1/sqrt2}",
        cdev <= 1e-12,
        cos.iter().map(|&c| fixed(c)).collect::<Vec<_>>().join(" "),
    );

    let grid = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, f64::INFINITY];
    let reports = eigen_sweep(&p, &pt, &grid)?;
    let got: Vec<(Eigenvalue, usize)> =
        reports.iter().map(|r| (r.lambda, r.multiplicity)).collect();
    let expected = [(Eigenvalue::Finite(1.0), 1), (Eigenvalue::Finite(2.0), 1)];
    let inf_absent = infinity_eigen_test(&p, &pt)?.is_none();
    verdict(
        &mut s,
        "eigenvalues over {0,0.5,1,1.5,2,2.5,inf}",
        got == expected && inf_absent,
        "1 and 2, multiplicity 1".into(),
    );
    s.push_str(&eig_lines(&reports));
    let _ = writeln!(
        s,
        "infinity: {}",
        if inf_absent { "absent" } else { "present" }
    );
    Ok(Outcome {
        report: s,
        code: if ok { 0 } else { 1 },
    })
}

/// Runs one command and returns its report; does not touch `--out`.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if !(cfg.epsilon.is_finite() && cfg.t_max.is_finite() && cfg.bisect_tol.is_finite()) {
        return Err(CliError::Usage(
            "--eps, --tmax and --bisect-tol must be finite".into(),
        ));
    }
    match cfg.command {
        Command::Check => cmd_check(cfg),
        Command::Transform => cmd_transform(cfg),
        Command::Extract => cmd_extract(cfg),
        Command::Decompose => cmd_decompose(cfg),
        Command::Eig => cmd_eig(cfg),
        Command::Probe => cmd_probe(cfg),
        Command::Orbit => cmd_orbit(cfg),
        Command::ExampleR4 => cmd_example_r4(cfg),
    }
}

/// Runs a command, writes the report to `--out` or `stdout`, errors to
/// `stderr`, and returns the exit status.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = execute(cfg).and_then(|outcome| {
        match &cfg.output_path {
            Some(path) => {
                std::fs::write(path, &outcome.report).map_err(|source| CliError::Write {
                    path: path.display().to_string(),
                    source,
                })?
            }
            None => {
                let _ = stdout.write_all(outcome.report.as_bytes());
            }
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
