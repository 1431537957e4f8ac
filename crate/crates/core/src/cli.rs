//! Command-line driver behind the `qeuclid` binary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::basis::{TruncationWindow, DEFAULT_CAPACITY};
use crate::error::{Error, Result};
use crate::lattice::{apply, apply_in_window, io as state_io, materialize, spectrum_diagonal, OpName};
use crate::params::DeformationParams;
use crate::smooth::{limit_convergence, standard_test_function, ClassicalOp, SampleGrid};
use crate::verify::{run_suite, SuiteReport, VerifyConfig, SUITE_NAMES};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_OPERATOR: i32 = 4;
pub const EXIT_DOMAIN: i32 = 5;

/// Accepted slope band for the asserted classical-limit pairs.
pub const SLOPE_BAND: (f64, f64) = (0.8, 1.2);

/// The `ϑ`-phase choice on the command line: `-1`, `+1` or `angle=<rad>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaPhase {
    MinusOne,
    PlusOne,
    Angle(f64),
}

impl ThetaPhase {
    pub fn phase(self) -> Complex64 {
        match self {
            ThetaPhase::MinusOne => Complex64::new(-1.0, 0.0),
            ThetaPhase::PlusOne => Complex64::new(1.0, 0.0),
            ThetaPhase::Angle(t) => Complex64::from_polar(1.0, t),
        }
    }
}

impl FromStr for ThetaPhase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "-1" | "minus_one" | "minus-one" => Ok(ThetaPhase::MinusOne),
            "+1" | "1" | "plus_one" | "plus-one" => Ok(ThetaPhase::PlusOne),
            other => other
                .strip_prefix("angle=")
                .and_then(|a| a.parse::<f64>().ok())
                .filter(|a| a.is_finite())
                .map(ThetaPhase::Angle)
                .ok_or_else(|| format!("expected -1, +1 or angle=<radians>, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, default_value_t = 1.5)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    /// Truncation window `Mmin:Mmax,mtmin,kmax`.
    #[arg(long, default_value = "0:0,-8,8", allow_hyphen_values = true)]
    pub window: String,
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    pub theta_phase: ThetaPhase,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    /// Write result files here instead of standard output.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn params(&self) -> Result<DeformationParams> {
        DeformationParams::with_phase(self.q, self.r0, self.theta_phase.phase())
    }

    pub fn window(&self) -> Result<TruncationWindow> {
        self.window.parse()
    }

    pub fn verify_config(&self) -> Result<VerifyConfig> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParams(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(VerifyConfig::new(self.window()?, self.params()?, self.tolerance))
    }
}

#[derive(Debug, Parser)]
#[command(name = "qeuclid", version, about = "Operators on the q-deformed Euclidean space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suites and write one report per suite.
    Verify {
        /// Run only these suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Tabulate the eigenvalues of a diagonal operator over the window.
    Spectrum {
        operator: String,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Convergence of a deformed operator to its classical limit as h -> 0.
    Limit {
        deformed: String,
        classical: String,
        /// Comma-separated, positive, strictly decreasing.
        #[arg(long, default_value = "0.1,0.05,0.025,0.0125")]
        h: String,
        /// Fourier modes |m| <= max-mode in the test function.
        #[arg(long, default_value_t = 3)]
        max_mode: i64,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Apply an operator to a state file.
    Apply {
        operator: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Truncate the image to the window and report the leaked norm.
        #[arg(long)]
        truncate: bool,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Dump an operator materialized on the window as coordinate triples.
    Matrix {
        operator: String,
        #[command(flatten)]
        config: RunConfig,
    },
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::UnknownOperator(_) | Error::NotDiagonal(_) | Error::NotOnLattice(_) => EXIT_OPERATOR,
        Error::Domain { .. } => EXIT_DOMAIN,
        Error::InvalidParams(_)
        | Error::InvalidIndex(_)
        | Error::InvalidWindow(_)
        | Error::Parse { .. }
        | Error::Io(_)
        | Error::Json(_) => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    configure_threads();
    let stdout = io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QEUCLID_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // A pool built earlier in the process stays in place.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn lattice_op(name: &str) -> Result<OpName> {
    let op: OpName = name.parse()?;
    if !op.on_lattice() {
        return Err(Error::NotOnLattice(op.to_string()));
    }
    Ok(op)
}

/// Opens `<dir>/<file>` when an output directory is configured.
fn sink<'a>(dir: Option<&Path>, file: &str, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match dir {
        Some(d) => {
            std::fs::create_dir_all(d)?;
            Box::new(BufWriter::new(File::create(d.join(file))?))
        }
        None => Box::new(stdout),
    })
}

fn file_stem(op: OpName) -> String {
    op.to_string().replace('+', "plus").replace('-', "minus")
}

pub fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify { suites, config } => cmd_verify(&suites, &config, out),
        Command::Spectrum { operator, config } => cmd_spectrum(&operator, &config, out),
        Command::Limit { deformed, classical, h, max_mode, config } => {
            cmd_limit(&deformed, &classical, &h, max_mode, &config, out)
        }
        Command::Apply { operator, input, output, truncate, config } => {
            cmd_apply(&operator, &input, output.as_deref(), truncate, &config, out)
        }
        Command::Matrix { operator, config } => cmd_matrix(&operator, &config, out),
    }
}

fn suite_csv(r: &SuiteReport, mut w: impl Write) -> Result<()> {
    writeln!(w, "id,residual,tolerance,pass,outcome,interior,excluded_rows,leakage")?;
    for c in &r.checks {
        writeln!(
            w,
            "\"{}\",{},{},{},{},{},{},{}",
            c.id.replace('"', "'"),
            c.residual,
            c.tolerance,
            c.pass,
            c.outcome(),
            c.interior,
            c.excluded_rows,
            c.leakage
        )?;
    }
    Ok(())
}

pub fn cmd_verify(suites: &[String], config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let cfg = config.verify_config()?;
    cfg.window.check_capacity(cfg.capacity)?;
    let names: Vec<&str> = if suites.is_empty() {
        SUITE_NAMES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from("qeuclid-reports"));
    let format = config.format.unwrap_or(Format::Json);
    let mut all_pass = true;
    for name in names {
        let report = run_suite(name, &cfg)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite `{name}`")))??;
        match format {
            Format::Json => {
                report.write_to_dir(&dir)?;
            }
            Format::Csv => {
                std::fs::create_dir_all(&dir)?;
                suite_csv(&report, BufWriter::new(File::create(dir.join(format!("{name}.csv")))?))?;
            }
        }
        writeln!(out, "{:<14} {}", report.suite, if report.pass { "pass" } else { "FAIL" })?;
        for c in report.checks.iter().filter(|c| !c.satisfied() || !c.asserted) {
            writeln!(out, "    {:<26} {:.3e}  {}", c.outcome(), c.residual, c.id)?;
            if let Some(n) = &c.note {
                writeln!(out, "    {:<26} {n}", "")?;
            }
        }
        all_pass &= report.pass;
    }
    Ok(if all_pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

pub fn cmd_spectrum(operator: &str, config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let op = lattice_op(operator)?;
    let p = config.params()?;
    let w = config.window()?;
    let table = spectrum_diagonal(op, &w, &p, DEFAULT_CAPACITY)?;
    let format = config.format.unwrap_or(Format::Csv);
    let ext = if format == Format::Json { "json" } else { "csv" };
    let mut sink = sink(config.output_dir.as_deref(), &format!("spectrum_{}.{ext}", file_stem(op)), out)?;
    match format {
        Format::Csv => {
            writeln!(sink, "M,sigma,mt,m,eigenvalue")?;
            for (i, v) in &table {
                writeln!(sink, "{},{},{},{},{}", i.radial, i.sigma, i.mt, i.m, v.re)?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = table
                .iter()
                .map(|(i, v)| serde_json::json!({"M": i.radial, "sigma": i.sigma.value(), "mt": i.mt, "m": i.m, "eigenvalue": v.re}))
                .collect();
            writeln!(sink, "{}", serde_json::to_string_pretty(&rows)?)?;
        }
    }
    sink.flush()?;
    Ok(EXIT_PASS)
}

fn parse_h_list(s: &str) -> Result<Vec<f64>> {
    let bad = |msg: String| Error::InvalidParams(format!("--h: {msg}"));
    let hs = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad(format!("bad number `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    if hs.is_empty() || hs.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
        return Err(bad("values must be positive".into()));
    }
    if hs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(bad("values must be strictly decreasing".into()));
    }
    Ok(hs)
}

/// Deformed/classical pairs whose convergence rate is part of the contract.
fn asserted_pair(d: OpName, c: ClassicalOp) -> bool {
    matches!(
        (d, c),
        (OpName::Torb3, ClassicalOp::L3) | (OpName::TorbPlus, ClassicalOp::LPlus) | (OpName::TorbMinus, ClassicalOp::LMinus)
    )
}

pub fn cmd_limit(
    deformed: &str,
    classical: &str,
    h: &str,
    max_mode: i64,
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32> {
    let d: OpName = deformed.parse()?;
    let c: ClassicalOp = classical.parse()?;
    let hs = parse_h_list(h)?;
    if max_mode < 0 {
        return Err(Error::InvalidParams(format!("--max-mode must be nonnegative, got {max_mode}")));
    }
    let base = config.params()?;
    let f = standard_test_function(max_mode);
    let report = limit_convergence(d, c, &f, &hs, &SampleGrid::default(), &base)?;

    let format = config.format.unwrap_or(Format::Csv);
    let ext = if format == Format::Json { "json" } else { "csv" };
    let name = format!("limit_{}_{}.{ext}", file_stem(d), c.as_str().replace('+', "plus").replace('-', "minus"));
    let mut sink = sink(config.output_dir.as_deref(), &name, out)?;
    match format {
        Format::Csv => report.write_csv(&mut sink)?,
        Format::Json => writeln!(sink, "{}", serde_json::to_string_pretty(&report)?)?,
    }
    sink.flush()?;
    drop(sink);

    let verdict = if report.all_exact() {
        eprintln!("errors exactly zero");
        EXIT_PASS
    } else if report.diverges() {
        eprintln!("diverging: error grows as h decreases");
        EXIT_CHECK_FAILED
    } else {
        let slope = report.slope.unwrap_or(f64::NAN);
        eprintln!("slope {slope:.4}{}", if report.monotone { "" } else { " (non-monotone)" });
        let within = slope >= SLOPE_BAND.0 && slope <= SLOPE_BAND.1 && report.monotone;
        if asserted_pair(d, c) && !within {
            EXIT_CHECK_FAILED
        } else {
            EXIT_PASS
        }
    };
    Ok(verdict)
}

pub fn cmd_apply(
    operator: &str,
    input: &Path,
    output: Option<&Path>,
    truncate: bool,
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32> {
    let op = lattice_op(operator)?;
    let p = config.params()?;
    let state = state_io::read_state(BufReader::new(File::open(input)?))?;
    let image = if truncate {
        let w = config.window()?;
        let (img, leaked) = apply_in_window(op, &state, &w, &p)?;
        eprintln!("leaked norm {}", leaked.sqrt());
        img
    } else {
        apply(op, &state, &p)?
    };
    match output {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            state_io::write_state(&image, &mut f)?;
            f.flush()?;
        }
        None => state_io::write_state(&image, out)?,
    }
    Ok(EXIT_PASS)
}

pub fn cmd_matrix(operator: &str, config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let op = lattice_op(operator)?;
    let p = config.params()?;
    let w = config.window()?;
    let a = materialize(op, &w, &p, DEFAULT_CAPACITY)?;
    let mut sink = sink(config.output_dir.as_deref(), &format!("matrix_{}.txt", file_stem(op)), out)?;
    state_io::write_matrix(&a, &mut sink)?;
    sink.flush()?;
    Ok(EXIT_PASS)
}
