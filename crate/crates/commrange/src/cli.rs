//! The `commrange` command line.
//!
//! Exit codes: 0 pass, 1 property violated, 2 usage or parse error,
//! 3 internal falsification.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commrange_core::maps::{Dagger, ExceptionalSet, MapSpec, Mode, PreservationReport, ShiftRule, SignRule};
use commrange_core::matcore::{random_unitary, ComplexMatrix, Stream, MAX_DIM};
use commrange_core::nrange::range_boundary;
use commrange_core::pauli2::{to_pauli, Form};
use commrange_core::structure::{
    asymmetry_witness, classify_d, lemma22_check, AsymmetryWitness, DClassification, Lemma22Verdict, DEFAULT_GAP_TOL,
};
use commrange_core::Error;
use serde::Serialize;

use crate::io::{self, IoError};
use crate::{parallel, suite};

pub const DEFAULT_SEED: u64 = 20240601;

/// Scale of the hash shift preset.
const HASH_SHIFT_SCALE: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(name = "commrange", version, about = "Numerical ranges of commutators and their preservers")]
pub struct Cli {
    /// RNG seed; every report is a function of the seed and flags.
    #[arg(long, global = true, env = "COMMRANGE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Matrix dimension.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Number of sampled trials.
    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: u64,
    /// Tolerance override `name=value`; also spelled `--tol.name value`.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for trial loops; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample pairs and check that a candidate map preserves commutators.
    Verify(VerifyArgs),
    /// Two-point-spectrum membership with its witness.
    Classify { file: PathBuf },
    /// Support points of the numerical range.
    Boundary {
        file: PathBuf,
        #[arg(long, default_value_t = 360)]
        angles: usize,
    },
    /// Rank-one projection test for `B = ±A + βI`.
    Lemma22 {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 200)]
        projections: usize,
    },
    /// Pauli coordinates of a 2x2 Hermitian matrix.
    Pauli { file: PathBuf },
    /// The full acceptance battery.
    Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Thm21,
    Thm31,
    #[value(name = "thm41-1")]
    Thm41Plain,
    #[value(name = "thm41-2")]
    Thm41Transpose,
    #[value(name = "thm41-3")]
    Thm41Psi,
    #[value(name = "thm41-4")]
    Thm41PsiTranspose,
}

impl FormArg {
    fn name(self) -> &'static str {
        match self {
            FormArg::Thm21 => "thm21",
            FormArg::Thm31 => "thm31",
            FormArg::Thm41Plain => "thm41-1",
            FormArg::Thm41Transpose => "thm41-2",
            FormArg::Thm41Psi => "thm41-3",
            FormArg::Thm41PsiTranspose => "thm41-4",
        }
    }

    fn two_by_two(self) -> Option<Form> {
        match self {
            FormArg::Thm21 | FormArg::Thm31 => None,
            FormArg::Thm41Plain => Some(Form::Plain),
            FormArg::Thm41Transpose => Some(Form::Transpose),
            FormArg::Thm41Psi => Some(Form::Psi),
            FormArg::Thm41PsiTranspose => Some(Form::PsiTranspose),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DaggerArg {
    Id,
    Transpose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Hash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShiftArg {
    Zero,
    Traceless,
    Hash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SsetArg {
    Empty,
    Alld,
    Random,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub form: FormArg,
    #[arg(long, value_enum)]
    pub dagger: Option<DaggerArg>,
    #[arg(long)]
    pub psi: bool,
    #[arg(long, value_enum)]
    pub sign: Option<SignArg>,
    #[arg(long, value_enum)]
    pub shift: Option<ShiftArg>,
    #[arg(long, value_enum)]
    pub sset: Option<SsetArg>,
    /// Global sign of the range form, `1` or `-1`.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<i8>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = value.parse().map_err(|_| format!("`{value}` is not a number"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("tolerance `{name}` must be positive and finite"));
    }
    Ok((name.to_owned(), v))
}

/// Rewrites `--tol.name=v` and `--tol.name v` into `--tol name=v`.
pub fn normalize_args<I: IntoIterator<Item = OsString>>(args: I) -> Vec<OsString> {
    let mut out = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(rest) = arg.to_str().and_then(|s| s.strip_prefix("--tol.")) else {
            out.push(arg);
            continue;
        };
        out.push("--tol".into());
        match rest.split_once('=') {
            Some(_) => out.push(rest.into()),
            None => {
                let value = it.next().map(|v| v.to_string_lossy().into_owned()).unwrap_or_default();
                out.push(format!("{rest}={value}").into());
            }
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("falsification: {0}")]
    Falsified(Error),
    #[error("{0}")]
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::WitnessExhausted | Error::Lemma22Inconsistent { .. } => CliError::Falsified(e),
            Error::DimensionMismatch { .. }
            | Error::UnsupportedDimension { .. }
            | Error::InvalidArgument(_)
            | Error::NotHermitian { .. }
            | Error::NonFinite => CliError::Usage(e.to_string()),
            _ => CliError::Core(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Falsified(_) | CliError::Core(_) => 3,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Rendered output and whether the checked property held.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

const TOL_NAMES: [&str; 2] = ["violation", "gap"];

fn tolerance(cli: &Cli, name: &str, default: f64) -> f64 {
    cli.tol.iter().rev().find(|(n, _)| n == name).map_or(default, |(_, v)| *v)
}

/// Parses `args` (program name first), runs the command and writes its
/// output; returns the process exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli).and_then(|o| io::write_output(cli.out.as_deref(), &o.text).map(|_| o).map_err(Into::into)) {
        Ok(o) => i32::from(!o.passed),
        Err(e) => {
            eprintln!("commrange: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    if cli.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if let Some(d) = cli.dim {
        if !(2..=MAX_DIM).contains(&d) {
            return Err(usage(format!("--dim must lie in 2..={MAX_DIM}")));
        }
    }
    if let Some((name, _)) = cli.tol.iter().find(|(n, _)| !TOL_NAMES.contains(&n.as_str())) {
        return Err(usage(format!("unknown tolerance `{name}`; known: {}", TOL_NAMES.join(", "))));
    }
    let csv_command = matches!(cli.command, Command::Boundary { .. });
    if cli.format == Some(Format::Csv) && !csv_command {
        return Err(usage("--format csv applies to `boundary` only"));
    }
    match &cli.command {
        Command::Verify(args) => verify(cli, args),
        Command::Classify { file } => classify(cli, file),
        Command::Boundary { file, angles } => boundary(cli, file, *angles),
        Command::Lemma22 { a, b, projections } => lemma22(cli, a, b, *projections),
        Command::Pauli { file } => pauli(file),
        Command::Suite => {
            let report = suite::run_suite(cli.seed, cli.workers)?;
            Ok(Output { passed: report.passed, text: io::to_json(&report) })
        }
    }
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    form: &'a str,
    mode: Mode,
    tolerance: f64,
    map: &'a MapSpec,
    report: PreservationReport,
}

/// The map a `verify` invocation checks, with its mode and tolerance.
pub fn build_map(cli: &Cli, args: &VerifyArgs) -> Result<(MapSpec, Mode, f64), CliError> {
    let form = args.form;
    let two = form.two_by_two();
    let dim = match (two, cli.dim) {
        (Some(_), None | Some(2)) => 2,
        (Some(_), Some(d)) => return Err(usage(format!("{} is a 2x2 form; got --dim {d}", form.name()))),
        (None, None) => 3,
        (None, Some(d)) if d >= 3 => d,
        (None, Some(d)) => return Err(usage(format!("{} needs --dim >= 3; got {d}", form.name()))),
    };
    let unitary = random_unitary(dim, &mut Stream::substream(cli.seed, u64::MAX))?;
    let mut m = MapSpec::with_unitary(unitary);

    match two {
        Some(f) => {
            let dagger_ok = args.dagger.is_none_or(|d| (d == DaggerArg::Transpose) == f.uses_transpose());
            if !dagger_ok || (args.psi && !f.uses_psi()) {
                return Err(usage(format!("--dagger/--psi contradict form {}", form.name())));
            }
            m = m.with_form(f);
        }
        None => {
            if args.psi {
                return Err(usage("--psi is defined for 2x2 forms only"));
            }
            m.dagger = match args.dagger {
                Some(DaggerArg::Transpose) => Dagger::Transpose,
                _ => Dagger::Identity,
            };
        }
    }

    let range = form == FormArg::Thm31;
    if range && args.sign.is_some() {
        return Err(usage("thm31 fixes the sign through --epsilon and --sset; --sign does not apply"));
    }
    if !range && (args.sset.is_some() || args.epsilon.is_some()) {
        return Err(usage("--sset and --epsilon apply to thm31 only"));
    }
    m.sign_rule = match args.sign {
        Some(SignArg::Hash) => SignRule::Hash { seed: cli.seed ^ 0x5167 },
        _ => SignRule::Plus,
    };
    m.shift_rule = match args.shift {
        None | Some(ShiftArg::Zero) => ShiftRule::Zero,
        Some(ShiftArg::Traceless) => ShiftRule::Traceless,
        Some(ShiftArg::Hash) => ShiftRule::Hash { seed: cli.seed ^ 0x5f1f, scale: HASH_SHIFT_SCALE },
    };
    m.exceptional_set = match args.sset {
        None | Some(SsetArg::Empty) => ExceptionalSet::Empty,
        Some(SsetArg::Alld) => ExceptionalSet::AllD,
        Some(SsetArg::Random) => ExceptionalSet::RandomD { seed: cli.seed ^ 0x5e7 },
    };
    m.epsilon = args.epsilon.unwrap_or(1);
    if m.epsilon != 1 && m.epsilon != -1 {
        return Err(usage("--epsilon must be 1 or -1"));
    }

    let (mode, default_tol) = match (range, two) {
        (true, _) => (Mode::Range, 1e-9),
        (false, None) => (Mode::Radius, 1e-9),
        (false, Some(_)) => (Mode::Spectrum, 1e-10),
    };
    Ok((m, mode, tolerance(cli, "violation", default_tol)))
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<Output, CliError> {
    let (m, mode, tol) = build_map(cli, args)?;
    let report =
        parallel::with_workers(cli.workers, || parallel::check_preservation(&m, mode, cli.trials, cli.seed, tol))?;
    let passed = report.passed();
    let text = io::to_json(&VerifyReport { form: args.form.name(), mode, tolerance: tol, map: &m, report });
    Ok(Output { text, passed })
}

#[derive(Serialize)]
struct ClassifyReport {
    classification: DClassification,
    asymmetry_witness: Option<AsymmetryWitness>,
    symmetry_witness: Option<ComplexMatrix>,
}

fn classify(cli: &Cli, file: &std::path::Path) -> Result<Output, CliError> {
    let a = io::read_hermitian(file)?;
    let classification = classify_d(&a, tolerance(cli, "gap", DEFAULT_GAP_TOL))?;
    let (asym, sym) = if classification.in_d {
        let p = classification.projection.clone().expect("members of D carry their projection");
        (None, Some(p.scale(2.0).shift(-1.0).into_matrix()))
    } else {
        (asymmetry_witness(&a)?, None)
    };
    let text = io::to_json(&ClassifyReport { classification, asymmetry_witness: asym, symmetry_witness: sym });
    Ok(Output { text, passed: true })
}

#[derive(Serialize)]
struct BoundaryPoint {
    theta: f64,
    re: f64,
    im: f64,
}

fn boundary(cli: &Cli, file: &std::path::Path, angles: usize) -> Result<Output, CliError> {
    if angles < 8 {
        return Err(usage("--angles must be at least 8"));
    }
    let a = io::read_matrix(file)?;
    let b = range_boundary(&a, angles)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => io::boundary_csv(&b)?,
        Format::Json => {
            let pts: Vec<BoundaryPoint> =
                b.angles.iter().zip(&b.points).map(|(&theta, z)| BoundaryPoint { theta, re: z.re, im: z.im }).collect();
            io::to_json(&pts)
        }
    };
    Ok(Output { text, passed: true })
}

#[derive(Serialize)]
struct Lemma22Report {
    seed: u64,
    verdict: Lemma22Verdict,
}

fn lemma22(cli: &Cli, a: &std::path::Path, b: &std::path::Path, projections: usize) -> Result<Output, CliError> {
    let (a, b) = (io::read_hermitian(a)?, io::read_hermitian(b)?);
    let verdict = lemma22_check(&a, &b, projections, &mut Stream::new(cli.seed))?;
    Ok(Output { text: io::to_json(&Lemma22Report { seed: cli.seed, verdict }), passed: true })
}

fn pauli(file: &std::path::Path) -> Result<Output, CliError> {
    let a = io::read_hermitian(file)?;
    Ok(Output { text: io::to_json(&to_pauli(&a)?), passed: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        let mut v: Vec<OsString> = vec!["commrange".into()];
        v.extend(args.iter().map(OsString::from));
        Cli::try_parse_from(normalize_args(v)).unwrap()
    }

    #[test]
    fn tol_spellings() {
        for form in [
            &["--tol.violation", "1e-6", "suite"][..],
            &["--tol.violation=1e-6", "suite"],
            &["--tol", "violation=1e-6", "suite"],
        ] {
            assert_eq!(tolerance(&parse(form), "violation", 1.0), 1e-6);
        }
    }

    #[test]
    fn form_dimension_rules() {
        let verify = |cli: &Cli| match &cli.command {
            Command::Verify(a) => build_map(cli, a).map(|(m, mode, _)| (m.dim, mode)),
            _ => unreachable!(),
        };
        assert_eq!(verify(&parse(&["verify", "thm41-3"])).unwrap(), (2, Mode::Spectrum));
        assert_eq!(verify(&parse(&["verify", "thm21", "--dim", "4"])).unwrap(), (4, Mode::Radius));
        assert!(verify(&parse(&["verify", "thm41-1", "--dim", "3"])).is_err());
        assert!(verify(&parse(&["verify", "thm31", "--dim", "2"])).is_err());
        assert!(verify(&parse(&["verify", "thm21", "--psi"])).is_err());
        assert!(verify(&parse(&["verify", "thm41-1", "--dagger", "transpose"])).is_err());
        assert!(verify(&parse(&["verify", "thm31", "--sign", "hash"])).is_err());
        assert!(verify(&parse(&["verify", "thm31", "--epsilon", "2"])).is_err());
        let (m, mode) = verify(&parse(&["verify", "thm31", "--epsilon", "-1"])).unwrap();
        assert_eq!((m, mode), (3, Mode::Range));
    }

    #[test]
    fn form_names() {
        assert_eq!(FormArg::Thm41PsiTranspose.name(), "thm41-4");
        assert_eq!(FormArg::Thm21.name(), "thm21");
    }
}
