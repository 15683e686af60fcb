//! `liequant`: run the toolkit's analyses on group definition files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use liequant::fixtures;
use liequant::report::{self, parse_rational, ReportError, SCHEMA_VERSION};
use liequant::representation::{self, HwPicture, RepError};
use liequant::specfile::{parse_spec, SpecFile};
use liequant::virasoro::{self, VirasoroError, VirasoroRequest};

/// Environment variable naming a directory that receives a JSON copy of every report.
const REPORT_DIR_ENV: &str = "LIEQUANT_REPORT_DIR";

#[derive(Parser)]
#[command(name = "liequant", version, about = "Exact quantization toolkit for Lie groups")]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify group axioms, the cocycle identity, or the Jacobi identity.
    Check {
        /// Definition file, or the name of a bundled fixture.
        file: String,
    },
    /// Invariant fields, structure constants, quantization form, characteristic subalgebra,
    /// gauge generators and Noether invariants.
    Analyze { file: String },
    /// Polarization search and anomaly verdicts.
    Polarize { file: String },
    /// Representations of the bundled su2, schrodinger and hw groups.
    Represent {
        file: String,
        /// Weight of the SU(2) representation (nonnegative integer).
        #[arg(long)]
        lambda: Option<String>,
        /// Higher-order polarization of the Schrödinger group (only `v`).
        #[arg(long)]
        ho: Option<String>,
        /// Heisenberg–Weyl picture: configuration, momentum or complex.
        #[arg(long)]
        picture: Option<String>,
        /// Polynomial degree cutoff for truncated matrices.
        #[arg(long, default_value_t = 12)]
        cutoff: u32,
        /// Report the position, momentum and energy operators of the Galilei limit instead.
        #[arg(long)]
        limit: bool,
    },
    /// Truncated Virasoro algebra, Kac formula and Sugawara checks.
    Virasoro {
        /// Optional key/value file supplying defaults.
        file: Option<String>,
        #[arg(long)]
        c: Option<String>,
        /// Defaults to `c r^2` when `--r` is given, else `c`.
        #[arg(long)]
        cprime: Option<String>,
        #[arg(long)]
        r: Option<i64>,
        /// Mode cutoff of the truncated algebra.
        #[arg(long)]
        cutoff: Option<i64>,
        /// Number of boson families for the Sugawara checks.
        #[arg(long)]
        dimension: Option<usize>,
        /// Fock level cutoff for the Sugawara checks.
        #[arg(long)]
        level: Option<u32>,
        /// Largest `k`, `s` in the Kac table.
        #[arg(long, default_value_t = 5)]
        kac_max: i64,
        /// Skip the Fock-space checks.
        #[arg(long)]
        no_fock: bool,
    },
    /// List the bundled fixtures, or print one.
    Fixtures { name: Option<String> },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Failure(String),
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Input(m) => CliError::Input(m),
            ReportError::Computation(m) => CliError::Failure(m),
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::Input(m) => CliError::Input(m),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<VirasoroError> for CliError {
    fn from(e: VirasoroError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a str,
    subject: &'a str,
    passed: bool,
    report: Value,
}

struct Outcome {
    command: &'static str,
    subject: String,
    passed: bool,
    report: Value,
}

fn outcome(command: &'static str, subject: &str, passed: bool, report: &impl Serialize) -> Result<Outcome, CliError> {
    let report = serde_json::to_value(report).map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(Outcome { command, subject: subject.to_string(), passed, report })
}

/// A path to a definition file, or a bundled fixture name such as `su2` or `fixtures/su2.spec`.
fn load(arg: &str) -> Result<SpecFile, CliError> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    } else {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
        fixtures::fixture_text(stem)
            .ok_or_else(|| CliError::Input(format!("{arg}: no such file or bundled fixture")))?
            .to_string()
    };
    parse_spec(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

fn rational(flag: &str, s: &str) -> Result<liequant::symbolic::Scalar, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Input(format!("--{flag} {s}: expected an integer or p/q")))
}

fn represent(
    file: &str,
    lambda: Option<String>,
    ho: Option<String>,
    picture: Option<String>,
    cutoff: u32,
    limit: bool,
) -> Result<Outcome, CliError> {
    let spec = load(file)?;
    let name = spec.name().to_string();
    match name.as_str() {
        "su2" => {
            let lambda = lambda.ok_or_else(|| CliError::Input("su2 needs --lambda".into()))?;
            let r = representation::su2_representation(&rational("lambda", &lambda)?)?;
            outcome("represent", &name, r.passed(), &r)
        }
        "schrodinger" if limit => {
            let r = representation::limit_operators(cutoff)?;
            outcome("represent", &name, r.passed(), &r)
        }
        "schrodinger" => match ho.as_deref() {
            Some("v") => {
                let r = representation::metaplectic_representation(cutoff)?;
                outcome("represent", &name, r.passed(), &r)
            }
            Some(other) => Err(CliError::Input(format!("--ho {other}: only `v` is available"))),
            None => Err(CliError::Input("schrodinger needs --ho v or --limit".into())),
        },
        "hw" => {
            let p = picture.as_deref().unwrap_or("configuration");
            let which = HwPicture::parse(p).ok_or_else(|| CliError::Input(format!("--picture {p}: unknown picture")))?;
            let r = representation::hw_representation(which)?;
            outcome("represent", &name, r.passed(), &r)
        }
        _ => Err(CliError::Input(format!("no representation construction for `{name}`"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_virasoro(
    file: Option<String>,
    c: Option<String>,
    cprime: Option<String>,
    r: Option<i64>,
    cutoff: Option<i64>,
    dimension: Option<usize>,
    level: Option<u32>,
    kac_max: i64,
    no_fock: bool,
) -> Result<Outcome, CliError> {
    let defaults = match &file {
        Some(f) => match load(f)? {
            SpecFile::Virasoro { values, .. } => values,
            _ => return Err(CliError::Input(format!("{f}: not a Virasoro data file"))),
        },
        None => Default::default(),
    };
    let get = |k: &str| defaults.get(k).cloned();
    let int = |k: &str| -> Result<Option<i64>, CliError> {
        get(k).map(|s| s.parse::<i64>().map_err(|e| CliError::Input(format!("{k} = {s}: {e}")))).transpose()
    };
    let c_text = c.or_else(|| get("c")).unwrap_or_else(|| "1".into());
    let c_prime = match cprime.or_else(|| get("cprime")) {
        Some(s) => Some(rational("cprime", &s)?),
        None => None,
    };
    let r = match r {
        Some(r) => Some(r),
        None => int("r")?,
    };
    let cutoff = match cutoff {
        Some(n) => n,
        None => int("cutoff")?.unwrap_or(6),
    };
    let dimension = match dimension {
        Some(d) => d,
        None => int("dimension")?.unwrap_or(1) as usize,
    };
    let level = match level {
        Some(l) => l,
        None => int("level")?.unwrap_or(3) as u32,
    };
    let req = VirasoroRequest {
        cutoff,
        c: rational("c", &c_text)?,
        c_prime,
        r,
        kac_max,
        fock: (!no_fock).then_some((dimension, level)),
    };
    let report = virasoro::virasoro_report(&req)?;
    outcome("virasoro", "virasoro", report.passed(), &report)
}

fn fixtures_listing(name: Option<String>) -> Result<Outcome, CliError> {
    match name {
        Some(n) => {
            let text = fixtures::fixture_text(&n).ok_or_else(|| CliError::Input(format!("unknown fixture `{n}`")))?;
            outcome("fixtures", &n, true, &text)
        }
        None => {
            let names: Vec<&str> = fixtures::FIXTURES.iter().map(|(n, _)| *n).collect();
            outcome("fixtures", "all", true, &names)
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check { file } => {
            let spec = load(&file)?;
            let r = report::check(&spec)?;
            outcome("check", spec.name(), r.passed(), &r)
        }
        Command::Analyze { file } => {
            let spec = load(&file)?;
            let r = report::analyze(&spec)?;
            let passed = r.maurer_cartan_residuals.is_empty()
                && r.left_right_residuals.is_empty()
                && r.theta_checks.as_ref().is_none_or(|t| t.residuals.is_empty())
                && r.characteristic_closed;
            outcome("analyze", spec.name(), passed, &r)
        }
        Command::Polarize { file } => {
            let spec = load(&file)?;
            let r = report::polarize(&spec)?;
            outcome("polarize", spec.name(), r.passed(), &r)
        }
        Command::Represent { file, lambda, ho, picture, cutoff, limit } => {
            represent(&file, lambda, ho, picture, cutoff, limit)
        }
        Command::Virasoro { file, c, cprime, r, cutoff, dimension, level, kac_max, no_fock } => {
            run_virasoro(file, c, cprime, r, cutoff, dimension, level, kac_max, no_fock)
        }
        Command::Fixtures { name } => fixtures_listing(name),
    }
}

fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar_text(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(value))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) if a.is_empty() => "[]".into(),
        Value::Array(a) => a.iter().map(scalar_text).collect::<Vec<_>>().join(", "),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

fn write_report_dir(dir: &Path, o: &Outcome, json: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{}-{}.json", o.command, o.subject));
    std::fs::write(&path, json).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(CliError::Failure(m)) => {
            eprintln!("verification failed: {m}");
            return ExitCode::from(1);
        }
    };
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command: outcome.command,
        subject: &outcome.subject,
        passed: outcome.passed,
        report: outcome.report.clone(),
    };
    let json = serde_json::to_string_pretty(&envelope).expect("reports serialize") + "\n";
    if let Some(dir) = std::env::var_os(REPORT_DIR_ENV) {
        if let Err(CliError::Input(m) | CliError::Failure(m)) = write_report_dir(Path::new(&dir), &outcome, &json) {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    }
    if cli.json {
        print!("{json}");
    } else {
        let mut text = format!(
            "{} {}: {}\n",
            outcome.command,
            outcome.subject,
            if outcome.passed { "PASS" } else { "FAIL" }
        );
        render_text(&outcome.report, 1, &mut text);
        print!("{text}");
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
