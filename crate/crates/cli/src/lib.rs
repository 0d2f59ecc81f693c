//! Command-line front end for `palinfrac`.
//!
//! Every subcommand prints JSON on stdout. Domain errors exit with 1 and a
//! `{"error": code, "detail": text}` object on stderr; malformed invocations
//! and unreadable inputs exit with 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use palinfrac::jacobi::{self, JacobiError, DEFAULT_TOL};
use palinfrac::jfraction::{self, JFracError};
use palinfrac::numeric_cf::{self, CfError, Form};
use palinfrac::pfraction::{self, PFracError};
use palinfrac::polynomial::{self, format_rational, PolyError};
use palinfrac::pst::{self, PstError};
use palinfrac::{JacobiMatrix, Polynomial, Spectrum};
use serde::Deserialize;
use serde_json::{json, Value};

/// Environment variable that replaces the default tolerance `1e-12`.
pub const TOL_ENV: &str = "PALINFRAC_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "palinfrac",
    version,
    about = "Palindromic continued fractions, Jacobi chains and perfect state transfer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Numeric continued fractions of q/p
    #[command(subcommand)]
    Cf(CfCmd),
    /// Polynomial helpers
    #[command(subcommand)]
    Poly(PolyCmd),
    /// J-fractions of Q/P
    #[command(subcommand)]
    Jfrac(JfracCmd),
    /// Jacobi matrices
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    /// Perfect state transfer
    #[command(subcommand)]
    Pst(PstCmd),
    /// Polynomial continued fractions of Q/P
    #[command(subcommand)]
    Pfrac(PfracCmd),
}

#[derive(Subcommand, Debug)]
enum CfCmd {
    /// Euclidean expansion with its convergents
    Expand {
        q: BigUint,
        p: BigUint,
        /// Split the last term a into (a - 1, 1)
        #[arg(long)]
        padded: bool,
        /// Divide q and p by their gcd first
        #[arg(long)]
        reduce: bool,
    },
    /// Decide whether q/p has a palindromic expansion
    Serret {
        q: BigUint,
        p: BigUint,
        #[arg(long)]
        reduce: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChebKind {
    T,
    U,
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    /// Chebyshev polynomials of degree 0..=N
    Cheb { kind: ChebKind, n: usize },
}

#[derive(Subcommand, Debug)]
enum JfracCmd {
    /// Expand Q/P read from two coefficient files
    Expand { qfile: PathBuf, pfile: PathBuf },
    /// Palindrome test for the J-fraction of Q/P
    Palindrome { qfile: PathBuf, pfile: PathBuf },
    /// Closed-form J-fraction of T_N / ((x^2 - 1) U_{N-1})
    Cheb { n: usize },
}

#[derive(Subcommand, Debug)]
enum JacobiCmd {
    /// Eigenvalues by Sturm bisection
    Eig {
        hfile: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum PstCmd {
    /// Certify perfect state transfer and report (T, phi)
    Verify {
        hfile: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Mirror-symmetric chain with a prescribed spectrum
    Design { specfile: PathBuf },
    /// Amplitudes of e^{itH} e_0 on an evenly spaced grid, as CSV
    Simulate {
        hfile: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        /// Number of intervals; steps + 1 rows are written
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum PfracCmd {
    Expand { qfile: PathBuf, pfile: PathBuf },
    Palindrome { qfile: PathBuf, pfile: PathBuf },
}

/// An error that ends the run, with its exit code.
#[derive(Debug)]
struct Failure {
    exit: i32,
    code: &'static str,
    detail: String,
}

impl Failure {
    fn usage(detail: impl Into<String>) -> Self {
        Failure {
            exit: 2,
            code: "InvalidInput",
            detail: detail.into(),
        }
    }

    fn domain(code: &'static str, detail: impl ToString) -> Self {
        Failure {
            exit: 1,
            code,
            detail: detail.to_string(),
        }
    }
}

impl From<CfError> for Failure {
    fn from(e: CfError) -> Self {
        let code = match e {
            CfError::NotCoprime { .. } => "NotCoprime",
            CfError::OutOfRange { .. } => "OutOfRange",
            CfError::InvalidTerms => "InvalidTerms",
        };
        Failure::domain(code, e)
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        let code = match e {
            PolyError::DivisionByZeroPolynomial => "DivisionByZeroPolynomial",
            PolyError::BadRational(_) => "BadRational",
        };
        Failure::domain(code, e)
    }
}

impl From<JFracError> for Failure {
    fn from(e: JFracError) -> Self {
        let code = match &e {
            JFracError::RemainderDegreeDrop => "RemainderDegreeDrop",
            JFracError::ZeroRemainder => "ZeroRemainder",
            JFracError::NotInterlacing { .. } => "NotInterlacing",
            JFracError::DegreeMismatch { .. } => "DegreeMismatch",
            JFracError::NotMonic(_) => "NotMonic",
            JFracError::Malformed => "Malformed",
            JFracError::CriterionMismatch => "CriterionMismatch",
            JFracError::Poly(p) => return p.clone().into(),
        };
        Failure::domain(code, e)
    }
}

impl From<JacobiError> for Failure {
    fn from(e: JacobiError) -> Self {
        let code = match e {
            JacobiError::ShapeMismatch { .. } => "ShapeMismatch",
            JacobiError::NonPositiveOffDiagonal { .. } => "NonPositiveOffDiagonal",
            JacobiError::NonFinite => "NonFinite",
            JacobiError::SizeTooSmall(_) => "SizeTooSmall",
            JacobiError::ToleranceTooLoose { .. } => "ToleranceTooLoose",
            JacobiError::InvalidTolerance(_) => "InvalidTolerance",
            JacobiError::NotAnEigenvalue { .. } => "NotAnEigenvalue",
            JacobiError::DegenerateSpectrum => "DegenerateSpectrum",
        };
        Failure::domain(code, e)
    }
}

impl From<PstError> for Failure {
    fn from(e: PstError) -> Self {
        let code = match &e {
            PstError::NotPersymmetric => "NotPersymmetric",
            PstError::IncommensurableSpectrum { .. } => "IncommensurableSpectrum",
            PstError::NoOddScaling => "NoOddScaling",
            PstError::DesignCheckFailed(_) => "DesignCheckFailed",
            PstError::Jacobi(j) => return j.clone().into(),
        };
        Failure::domain(code, e)
    }
}

impl From<PFracError> for Failure {
    fn from(e: PFracError) -> Self {
        let code = match &e {
            PFracError::NotCoprime(_) => "NotCoprime",
            PFracError::DegreeError => "DegreeError",
            PFracError::NotMonic(_) => "NotMonic",
            PFracError::Malformed => "Malformed",
            PFracError::Poly(p) => return p.clone().into(),
        };
        Failure::domain(code, e)
    }
}

/// Output of one subcommand.
enum Output {
    Json(Value),
    Text(String),
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code. Output goes to the two writers.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                2
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
            return exit;
        }
    };
    match dispatch(cli.command) {
        Ok(Output::Json(v)) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&v).unwrap());
            0
        }
        Ok(Output::Text(s)) => {
            let _ = write!(stdout, "{s}");
            0
        }
        Err(f) => {
            let _ = writeln!(stderr, "{}", json!({ "error": f.code, "detail": f.detail }));
            f.exit
        }
    }
}

/// [`run_with`] on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        argv,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn dispatch(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Cf(c) => cf(c),
        Command::Poly(PolyCmd::Cheb { kind, n }) => {
            let f = match kind {
                ChebKind::T => polynomial::chebyshev_t,
                ChebKind::U => polynomial::chebyshev_u,
            };
            Ok(Output::Json(Value::Array(
                (0..=n).map(|k| poly_json(&f(k))).collect(),
            )))
        }
        Command::Jfrac(c) => jfrac(c),
        Command::Jacobi(JacobiCmd::Eig { hfile, tol }) => {
            let h = read_matrix(&hfile)?;
            let spectrum = jacobi::eigenvalues(&h, tolerance(tol)?)?;
            Ok(Output::Json(serde_json::to_value(spectrum).unwrap()))
        }
        Command::Pst(c) => pst_cmd(c),
        Command::Pfrac(c) => pfrac(c),
    }
}

fn reduce_pair(q: BigUint, p: BigUint, reduce: bool) -> (BigUint, BigUint) {
    let g = q.gcd(&p);
    if reduce && !g.is_zero() && !g.is_one() {
        (q / &g, p / g)
    } else {
        (q, p)
    }
}

fn big(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

fn cf(cmd: CfCmd) -> Result<Output, Failure> {
    match cmd {
        CfCmd::Expand {
            q,
            p,
            padded,
            reduce,
        } => {
            let (q, p) = reduce_pair(q, p, reduce);
            let form = if padded {
                Form::Padded
            } else {
                Form::Canonical
            };
            let cf = numeric_cf::expand_euclid(&q, &p, form)?;
            let convergents: Vec<Value> = numeric_cf::convergents(&cf)
                .iter()
                .map(|c| json!({ "p": big(&c.p), "q": big(&c.q) }))
                .collect();
            Ok(Output::Json(json!({
                "q": big(&q),
                "p": big(&p),
                "form": form,
                "terms": cf.terms().iter().map(big).collect::<Vec<_>>(),
                "palindrome": cf.is_palindrome(),
                "convergents": convergents,
            })))
        }
        CfCmd::Serret { q, p, reduce } => {
            let (q, p) = reduce_pair(q, p, reduce);
            let d = numeric_cf::is_palindromic_serret(&q, &p)?;
            let witness = d.sign.map(|s| if s > 0 { "q^2+1" } else { "q^2-1" });
            let mut out = json!({ "palindromic": d.palindromic, "witness": witness });
            if let (Some(form), Some(cf)) = (d.form, d.expansion) {
                out["form"] = json!(form);
                out["terms"] = Value::Array(cf.terms().iter().map(big).collect());
            }
            Ok(Output::Json(out))
        }
    }
}

fn poly_json(p: &Polynomial) -> Value {
    serde_json::to_value(p).unwrap()
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<Polynomial, Failure> {
    let p: Polynomial = read_json(path)?;
    if p.is_zero() {
        return Err(Failure::usage(format!(
            "{}: zero polynomial",
            path.display()
        )));
    }
    Ok(p)
}

fn read_monic_pair(qfile: &Path, pfile: &Path) -> Result<(Polynomial, Polynomial), Failure> {
    Ok((read_poly(qfile)?.monic(), read_poly(pfile)?.monic()))
}

fn read_matrix(path: &Path) -> Result<JacobiMatrix, Failure> {
    read_json(path)
}

/// `--tol` if given, else `PALINFRAC_TOL`, else `1e-12`.
fn tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|e| Failure::usage(format!("{TOL_ENV}={s}: {e}"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn jfrac(cmd: JfracCmd) -> Result<Output, Failure> {
    match cmd {
        JfracCmd::Expand { qfile, pfile } => {
            let (q, p) = read_monic_pair(&qfile, &pfile)?;
            let jf = jfraction::expand_jfraction(&q, &p)?;
            Ok(Output::Json(serde_json::to_value(jf).unwrap()))
        }
        JfracCmd::Palindrome { qfile, pfile } => {
            let (q, p) = read_monic_pair(&qfile, &pfile)?;
            let d = jfraction::is_palindromic_jfraction(&q, &p)?;
            Ok(Output::Json(json!({
                "palindromic": d.palindromic,
                "beta": format_rational(&d.beta),
                "cofactor": d.cofactor.as_ref().map(poly_json),
                "expansion": d.expansion,
            })))
        }
        JfracCmd::Cheb { n } => {
            if n == 0 {
                return Err(Failure::usage("the Chebyshev J-fraction needs N >= 1"));
            }
            Ok(Output::Json(
                serde_json::to_value(jfraction::chebyshev_jfraction(n)).unwrap(),
            ))
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpectrumFile {
    Bare(Vec<f64>),
    Object {
        eigenvalues: Vec<f64>,
        tolerance: Option<f64>,
    },
}

fn pst_cmd(cmd: PstCmd) -> Result<Output, Failure> {
    match cmd {
        PstCmd::Verify { hfile, tol } => {
            let h = read_matrix(&hfile)?;
            let cert = pst::verify_pst(&h, tolerance(tol)?)?;
            Ok(Output::Json(serde_json::to_value(cert).unwrap()))
        }
        PstCmd::Design { specfile } => {
            let (values, tol) = match read_json::<SpectrumFile>(&specfile)? {
                SpectrumFile::Bare(v) => (v, None),
                SpectrumFile::Object {
                    eigenvalues,
                    tolerance,
                } => (eigenvalues, tolerance),
            };
            let spectrum = Spectrum::new(values, tolerance(tol)?)?;
            let h = pst::design_persymmetric(&spectrum)?;
            Ok(Output::Json(serde_json::to_value(h).unwrap()))
        }
        PstCmd::Simulate {
            hfile,
            t0,
            t1,
            steps,
            out,
        } => {
            if steps == 0 || !t0.is_finite() || !t1.is_finite() {
                return Err(Failure::usage("need finite --t0, --t1 and --steps >= 1"));
            }
            let h = read_matrix(&hfile)?;
            let times: Vec<f64> = (0..=steps)
                .map(|i| t0 + (t1 - t0) * i as f64 / steps as f64)
                .collect();
            let trace = pst::evolve(&h, &times)?;
            let csv = trace.to_csv();
            match out {
                None => Ok(Output::Text(csv)),
                Some(path) => {
                    std::fs::write(&path, csv)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    let (best, at) = (0..times.len())
                        .map(|i| (trace.fidelity_at(i), times[i]))
                        .fold(
                            (f64::NEG_INFINITY, t0),
                            |a, b| if b.0 > a.0 { b } else { a },
                        );
                    Ok(Output::Json(json!({
                        "out": path.display().to_string(),
                        "rows": times.len(),
                        "max_fidelity": best,
                        "t_max_fidelity": at,
                    })))
                }
            }
        }
    }
}

fn pfrac(cmd: PfracCmd) -> Result<Output, Failure> {
    match cmd {
        PfracCmd::Expand { qfile, pfile } => {
            let (q, p) = (read_poly(&qfile)?, read_poly(&pfile)?);
            let pf = pfraction::expand_pfraction(&q, &p)?;
            Ok(Output::Json(serde_json::to_value(pf).unwrap()))
        }
        PfracCmd::Palindrome { qfile, pfile } => {
            let (q, p) = read_monic_pair(&qfile, &pfile)?;
            let d = pfraction::is_palindromic_pfraction(&q, &p)?;
            let scaled = pfraction::scaled_serret_divisible(&q, &p, &d.scale)?;
            Ok(Output::Json(json!({
                "divisible": d.divisible,
                "cofactor": d.cofactor.as_ref().map(poly_json),
                "palindromic": d.termwise,
                "scale": format_rational(&d.scale),
                "scaled_divisible": scaled,
                "expansion": d.expansion,
            })))
        }
    }
}
