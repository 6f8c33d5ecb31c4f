//! `sphcub` command-line front-end.
//!
//! Every subcommand writes JSON to stdout; `--verbose` adds a short summary
//! on stderr. Exit codes: 0 success, 1 negative certificate (verification,
//! audit or LP test failed on a valid run), 2 usage or input error, 3
//! numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{lp_bound, theta_bounds};
use crate::designs;
use crate::error::Error;
use crate::kernels::{KernelSpec, Space};
use crate::measures::{reduce_support, to_isometric_embedding, DiscreteMeasure};
use crate::optimize::{minimize_theta, OptimizerConfig};
use crate::poly::Polynomial;
use crate::verify::{audit_weights, verify_strength, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sphcub",
    version,
    about = "Cubature formulas on the unit sphere S^{n-1} in R^n",
    long_about = "Cubature formulas on the unit sphere S^{n-1} in R^n.\n\n\
        Dimensions follow the ambient convention: --n 3 is the ordinary 2-sphere, \
        so the strength-2 optimum is (n+1)^{1-theta} and the simplex has n+1 vertices."
)]
struct Cli {
    /// Human-readable summary on stderr
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InputArg {
    /// Measure JSON file; stdin when omitted
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a known cubature measure
    #[command(subcommand)]
    Construct(Family),
    /// Check moment residuals up to strength t
    Verify {
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        input: InputArg,
    },
    /// Compare each weight with the reproducing-kernel bound
    Audit {
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        input: InputArg,
    },
    /// Lower, upper and exact values of Theta(t, theta, n)
    ThetaBounds {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
    },
    /// Test a polynomial F(s) as a linear-programming certificate
    LpBound {
        /// Strength the certificate is tested against
        #[arg(long)]
        t: u32,
        /// Ambient dimension of the sphere S^{n-1}
        #[arg(long)]
        n: usize,
        /// Coefficients of F in ascending powers of s, e.g. "1,6,9"
        #[arg(long, conflicts_with = "kernel_square", required_unless_present = "kernel_square")]
        coeffs: Option<String>,
        /// Use F = K^2 for the reproducing kernel K of this space
        #[arg(long, value_enum)]
        kernel_square: Option<SpaceKind>,
        /// Degree of the kernel space; defaults to t/2
        #[arg(long, requires = "kernel_square")]
        degree: Option<u32>,
    },
    /// Caratheodory reduction preserving moments up to degree t
    Reduce {
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        input: InputArg,
    },
    /// Numerically minimize sum of weights^theta over strength-t measures
    Optimize {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        /// Initial support size [default: max of the two cardinality bounds]
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Isometric embedding l2^n -> l_{2t}^N from a strength-2t measure
    Embed {
        /// Half-strength: the measure must have strength 2t
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// {u, -u}: strength 1
    AntipodalPair {
        #[arg(long)]
        n: usize,
        /// Direction, comma separated; first basis vector by default
        #[arg(long)]
        u: Option<String>,
    },
    /// Regular simplex with n+1 vertices: strength 2
    Simplex {
        #[arg(long)]
        n: usize,
    },
    /// {±e_i}: strength 3
    CrossPolytope {
        #[arg(long)]
        n: usize,
        /// Apply a random rotation drawn from this seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Regular polygon on S^1 with `count` vertices: strength count-1
    Circle {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
    },
    /// Gauss-Gegenbauer product rule of strength t
    Product {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SpaceKind {
    /// Harmonics of exactly the given degree
    Harmonic,
    /// All polynomials of degree at most the given degree
    Full,
    /// Homogeneous polynomials of the given degree
    Homog,
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            _ if e.is_numerical() => EXIT_NUMERICAL,
            Error::Precondition(_) => EXIT_NEGATIVE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn read_measure(input: &InputArg) -> Result<DiscreteMeasure, Failure> {
    let text = match &input.input {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(DiscreteMeasure::from_json_str(&text)?)
}

fn write_stdout(text: &str) -> Result<(), Failure> {
    match writeln!(io::stdout().lock(), "{text}") {
        // A closed downstream pipe is not our failure.
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(usage(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: EXIT_NUMERICAL, message: e.to_string() })?;
    write_stdout(&text)
}

fn emit_line<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(|e| Failure { code: EXIT_NUMERICAL, message: e.to_string() })?;
    write_stdout(&text)
}

#[derive(Serialize)]
struct OptimizeResult<'a> {
    best_restart: usize,
    value: f64,
    residual: f64,
    support: usize,
    measure: &'a DiscreteMeasure,
}

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| usage(format!("bad number {v:?}: {e}"))))
        .collect()
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let verbose = cli.verbose;
    match execute(cli.command, verbose) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("sphcub: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, verbose: bool) -> Result<i32, Failure> {
    match command {
        Command::Construct(family) => {
            let m = construct(family)?;
            if verbose {
                eprintln!("{} points in R^{}", m.len(), m.dimension());
            }
            emit(&m)?;
            Ok(EXIT_OK)
        }
        Command::Verify { t, tol, input } => {
            let m = read_measure(&input)?;
            let report = verify_strength(&m, t, tol);
            if verbose {
                for (d, (r, ok)) in report.residuals.iter().zip(&report.degree_pass).enumerate() {
                    eprintln!("degree {}: residual {r:e} {}", d + 1, if *ok { "ok" } else { "FAIL" });
                }
            }
            emit(&report)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Audit { t, input } => {
            let m = read_measure(&input)?;
            let audit = audit_weights(&m, t)?;
            if verbose {
                eprintln!(
                    "bound {:.6e}, min margin {:.3e}, {} violations, {} antipodal failures",
                    audit.bound,
                    audit.min_margin(),
                    audit.violations,
                    audit.equality_failures()
                );
            }
            emit(&audit)?;
            Ok(if audit.violations == 0 && audit.equality_failures() == 0 { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::ThetaBounds { t, theta, n } => {
            let b = theta_bounds(t, theta, n)?;
            if verbose {
                eprintln!("Theta({t}, {theta}, {n}) in [{}, {}]", b.lower, b.upper);
            }
            emit(&b)?;
            Ok(EXIT_OK)
        }
        Command::LpBound { t, n, coeffs, kernel_square, degree } => {
            let f = match (coeffs, kernel_square) {
                (Some(c), _) => Polynomial::parse(&c)?,
                (None, Some(kind)) => {
                    let d = degree.unwrap_or(t / 2);
                    let space = match kind {
                        SpaceKind::Harmonic => Space::Harmonic(d),
                        SpaceKind::Full => Space::FullPoly(d),
                        SpaceKind::Homog => Space::HomogPoly(d),
                    };
                    KernelSpec::new(n, space)?.polynomial().square()
                }
                (None, None) => return Err(usage("one of --coeffs or --kernel-square is required")),
            };
            let cert = lp_bound(&f, t, n)?;
            if verbose {
                match cert.cardinality_bound {
                    Some(b) => eprintln!("valid certificate: support >= {b}"),
                    None => eprintln!(
                        "rejected: nonnegative={} sign_condition={} positive_normalization={}",
                        cert.nonnegative, cert.sign_condition, cert.positive_normalization
                    ),
                }
            }
            emit(&cert)?;
            Ok(if cert.is_valid() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Reduce { t, tol, input } => {
            let m = read_measure(&input)?;
            let reduced = reduce_support(&m, t, tol)?;
            if verbose {
                eprintln!("{} -> {} points", m.len(), reduced.len());
            }
            emit(&reduced)?;
            Ok(EXIT_OK)
        }
        Command::Optimize { t, theta, n, seed, restarts, budget, threads, tol } => {
            let mut cfg = OptimizerConfig::new(t, theta, n)?;
            cfg.seed = seed;
            cfg.restarts = restarts;
            cfg.threads = threads;
            cfg.tol = tol;
            if let Some(b) = budget {
                cfg.budget = b;
            }
            let out = minimize_theta(&cfg)?;
            for d in &out.restarts {
                emit_line(d)?;
            }
            if verbose {
                eprintln!(
                    "best restart {}: value {} on {} points, residual {:e}",
                    out.best_restart,
                    out.value,
                    out.measure.len(),
                    out.residual
                );
            }
            emit_line(&OptimizeResult {
                best_restart: out.best_restart,
                value: out.value,
                residual: out.residual,
                support: out.measure.len(),
                measure: &out.measure,
            })?;
            Ok(EXIT_OK)
        }
        Command::Embed { t, input } => {
            let m = read_measure(&input)?;
            let e = to_isometric_embedding(&m, t)?;
            if verbose {
                eprintln!("{} rows into l_{}", e.rows.len(), e.exponent);
            }
            emit(&e)?;
            Ok(EXIT_OK)
        }
    }
}

fn construct(family: Family) -> Result<DiscreteMeasure, Failure> {
    Ok(match family {
        Family::AntipodalPair { n, u } => {
            let u = u.as_deref().map(parse_list).transpose()?;
            designs::antipodal_pair(n, u.as_deref())?
        }
        Family::Simplex { n } => designs::simplex(n)?,
        Family::CrossPolytope { n, seed } => match seed {
            Some(s) => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
                let q = designs::random_orthogonal(n, &mut rng);
                designs::cross_polytope(n, Some(&q))?
            }
            None => designs::cross_polytope(n, None)?,
        },
        Family::Circle { count, phase } => designs::circle_points(count, phase)?,
        Family::Product { n, t } => designs::product_cubature(n, t)?,
    })
}
