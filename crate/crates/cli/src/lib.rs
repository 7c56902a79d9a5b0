//! Command-line front end for `laplace-kit`.
//!
//! Subcommands evaluate forward transforms, invert transforms along a
//! Bromwich line, run hypothesis checks and solve the hypersingular equation.
//! Results are written as CSV or JSON to stdout or to `--output`.
//!
//! Exit codes: 0 success or pass, 1 check failed, 2 usage or domain error,
//! 3 numerical non-convergence, 4 inconclusive.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use laplace_kit::catalog::{self, CatalogEntry};
use laplace_kit::checks::{run_check, CheckKind};
use laplace_kit::hypersingular::{self, HypersingularProblem};
use laplace_kit::parse::{parse_complex_list, parse_grid_signal, parse_time_range};
use laplace_kit::transform::{Signal, DEFAULT_LINE_OFFSET};
use laplace_kit::{
    bromwich_invert, forward_transform, CheckReport, ComplexValue, InversionConfig,
    InversionResult, QuadratureConfig, Verdict,
};

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "LAPLACE_KIT_CONFIG";

/// Default first truncation height; later heights double it.
pub const DEFAULT_BASE_HEIGHT: f64 = 50.0;
pub const DEFAULT_HEIGHT_COUNT: usize = 15;

/// Dense grid used by `solve-hypersingular --verify`.
pub const VERIFY_HORIZON: f64 = 12.0;
pub const VERIFY_STEP: f64 = 0.01;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] laplace_kit::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                laplace_kit::Error::Convergence { .. } | laplace_kit::Error::NonFinite { .. },
            ) => 3,
            _ => 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CheckFailed,
    NotConverged,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::CheckFailed => 1,
            Outcome::NotConverged => 3,
            Outcome::Inconclusive => 4,
        }
    }

    fn from_verdict(verdict: Verdict) -> Self {
        match verdict {
            Verdict::Pass => Outcome::Success,
            Verdict::Fail => Outcome::CheckFailed,
            Verdict::Inconclusive => Outcome::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "laplace-kit",
    version,
    about = "Laplace transform analysis toolkit"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML config file; overridden key by key by the flags below.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file [default: stdout].
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Absolute quadrature tolerance [default: 1e-10].
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance [default: 1e-8].
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Bisections allowed per integral [default: 16384].
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Gauss-Legendre points per panel [default: 16].
    #[arg(long, global = true)]
    pub panel_order: Option<usize>,
    /// Change between successive truncation heights accepted as converged [default: 1e-7].
    #[arg(long, global = true)]
    pub convergence_tolerance: Option<f64>,
    /// First truncation height [default: 50].
    #[arg(long, global = true)]
    pub base_height: Option<f64>,
    /// Number of truncation heights, each double the previous [default: 15].
    #[arg(long, global = true)]
    pub height_count: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the forward transform of a catalog function or a signal file.
    Transform {
        /// Catalog name or path to a `t,f_re[,f_im]` CSV signal.
        #[arg(long)]
        function: String,
        /// Comma-separated complex points such as `1,2+3i,0.5-1i`.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Invert a catalog transform along a Bromwich line.
    Invert {
        #[arg(long)]
        transform: String,
        /// Line abscissa [default: abscissa + 0.1].
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        /// Time range `t0:t1:steps`.
        #[arg(long, allow_hyphen_values = true)]
        times: String,
    },
    /// Run a hypothesis check on a catalog transform.
    Check {
        #[arg(value_parser = parse_check_kind)]
        check: CheckKind,
        #[arg(long)]
        transform: String,
        /// Decay exponent for lemma1.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// Exponent for hausdorff-young and witness [default: 2].
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<f64>,
    },
    /// Solve the hypersingular equation for a catalog forcing term.
    SolveHypersingular {
        #[arg(long)]
        g: String,
        /// Time range `t0:t1:steps`.
        #[arg(long, allow_hyphen_values = true)]
        times: String,
        /// Also check the solution in the transform domain.
        #[arg(long)]
        verify: bool,
    },
}

fn parse_check_kind(text: &str) -> Result<CheckKind, String> {
    text.parse::<CheckKind>().map_err(|e| e.to_string())
}

/// Keys accepted in a config file. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub panel_order: Option<usize>,
    pub convergence_tolerance: Option<f64>,
    pub base_height: Option<f64>,
    pub height_count: Option<usize>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

/// Effective settings after merging defaults, config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    pub convergence_tolerance: f64,
    pub heights: Vec<f64>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let base = InversionConfig::new(0.0);
        Self {
            quadrature: QuadratureConfig::default(),
            convergence_tolerance: base.convergence_tolerance,
            heights: doubling_heights(DEFAULT_BASE_HEIGHT, DEFAULT_HEIGHT_COUNT),
            format: OutputFormat::Csv,
            output: None,
        }
    }
}

fn doubling_heights(base: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| base * 2f64.powi(k as i32)).collect()
}

impl RunConfig {
    /// Defaults, then the config file, then flags.
    pub fn resolve(global: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &global.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                parse_config(&text)?
            }
            None => ConfigFile::default(),
        };
        let mut cfg = RunConfig::default();
        let q = &mut cfg.quadrature;
        if let Some(v) = global.abs_tol.or(file.abs_tol) {
            q.abs_tol = v;
        }
        if let Some(v) = global.rel_tol.or(file.rel_tol) {
            q.rel_tol = v;
        }
        if let Some(v) = global.max_subdivisions.or(file.max_subdivisions) {
            q.max_subdivisions = v;
        }
        if let Some(v) = global.panel_order.or(file.panel_order) {
            q.panel_order = v;
        }
        q.validate()?;
        if let Some(v) = global.convergence_tolerance.or(file.convergence_tolerance) {
            cfg.convergence_tolerance = v;
        }
        let base = global
            .base_height
            .or(file.base_height)
            .unwrap_or(DEFAULT_BASE_HEIGHT);
        let count = global
            .height_count
            .or(file.height_count)
            .unwrap_or(DEFAULT_HEIGHT_COUNT);
        if !(base > 0.0 && base.is_finite()) {
            return Err(CliError::Config(format!(
                "base_height must be positive, got {base}"
            )));
        }
        if count < 2 {
            return Err(CliError::Config(format!(
                "height_count must be at least 2, got {count}"
            )));
        }
        cfg.heights = doubling_heights(base, count);
        if let Some(f) = global.format.or(file.format) {
            cfg.format = f;
        }
        cfg.output = global.output.clone().or(file.output);
        cfg.inversion(0.0).validate()?;
        Ok(cfg)
    }

    pub fn inversion(&self, sigma: f64) -> InversionConfig {
        let mut cfg = InversionConfig::new(sigma)
            .with_heights(self.heights.clone())
            .with_tolerance(self.convergence_tolerance);
        cfg.quadrature = self.quadrature;
        cfg
    }
}

/// Parses arguments, runs the command and returns the process exit code.
/// Errors are reported on stderr.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("laplace-kit: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    match &cli.command {
        Command::Transform { function, points } => cmd_transform(&cfg, function, points),
        Command::Invert {
            transform,
            sigma,
            times,
        } => cmd_invert(&cfg, transform, *sigma, times),
        Command::Check {
            check,
            transform,
            b,
            ell,
        } => cmd_check(&cfg, *check, transform, *b, *ell),
        Command::SolveHypersingular { g, times, verify } => {
            cmd_solve_hypersingular(&cfg, g, times, *verify)
        }
    }
}

fn lookup(name: &str) -> Result<&'static CatalogEntry, CliError> {
    catalog::lookup(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown catalog name '{name}'; known names: {}",
            catalog::names().join(", ")
        ))
    })
}

#[derive(Debug, Serialize)]
struct TransformRow {
    p_re: f64,
    p_im: f64,
    #[serde(rename = "F_re")]
    f_re: f64,
    #[serde(rename = "F_im")]
    f_im: f64,
}

pub fn cmd_transform(cfg: &RunConfig, function: &str, points: &str) -> Result<Outcome, CliError> {
    let points = parse_complex_list(points)?;
    let mut rows = Vec::with_capacity(points.len());
    let mut push = |p: ComplexValue, v: ComplexValue| {
        rows.push(TransformRow {
            p_re: p.re,
            p_im: p.im,
            f_re: v.re,
            f_im: v.im,
        })
    };
    if let Some(entry) = catalog::lookup(function) {
        for p in &points {
            let value = match &entry.time_function {
                Some(f) => forward_transform(Signal::Function(f), *p, &cfg.quadrature)?,
                None => entry.transform.eval(*p)?,
            };
            push(*p, value);
        }
    } else if Path::new(function).is_file() {
        let signal = parse_grid_signal(&fs::read_to_string(function)?)?;
        for p in &points {
            push(
                *p,
                forward_transform(Signal::Grid(&signal), *p, &cfg.quadrature)?,
            );
        }
    } else {
        return Err(lookup(function).unwrap_err());
    }
    let text = match cfg.format {
        OutputFormat::Csv => csv_table(&rows)?,
        OutputFormat::Json => json_text(&rows)?,
    };
    emit(cfg, &text)?;
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize)]
struct TimeRow {
    t: f64,
    f_re: f64,
    f_im: f64,
    converged: bool,
}

fn time_rows(result: &InversionResult) -> Vec<TimeRow> {
    result
        .times
        .iter()
        .zip(&result.values)
        .zip(&result.convergence)
        .map(|((t, v), c)| TimeRow {
            t: *t,
            f_re: v.re,
            f_im: v.im,
            converged: c.converged(),
        })
        .collect()
}

fn inversion_outcome(result: &InversionResult) -> Outcome {
    if result.all_converged() {
        Outcome::Success
    } else {
        Outcome::NotConverged
    }
}

pub fn cmd_invert(
    cfg: &RunConfig,
    transform: &str,
    sigma: Option<f64>,
    times: &str,
) -> Result<Outcome, CliError> {
    let entry = lookup(transform)?;
    let map = &entry.transform;
    let times = parse_time_range(times)?;
    let sigma = sigma.unwrap_or(map.abscissa() + DEFAULT_LINE_OFFSET);
    if !(sigma >= map.abscissa()) {
        return Err(CliError::Usage(format!(
            "sigma {sigma} lies left of the abscissa {} of {transform}",
            map.abscissa()
        )));
    }
    let result = bromwich_invert(map, &times, &cfg.inversion(sigma))?;
    let rows = time_rows(&result);
    let text = match cfg.format {
        OutputFormat::Csv => csv_table(&rows)?,
        OutputFormat::Json => json_text(&rows)?,
    };
    emit(cfg, &text)?;
    Ok(inversion_outcome(&result))
}

pub fn cmd_check(
    cfg: &RunConfig,
    kind: CheckKind,
    transform: &str,
    b: Option<f64>,
    ell: Option<f64>,
) -> Result<Outcome, CliError> {
    let entry = lookup(transform)?;
    let parameter = match kind {
        CheckKind::Lemma1 => {
            if ell.is_some() {
                return Err(CliError::Usage("lemma1 takes --b, not --ell".into()));
            }
            Some(b.ok_or_else(|| CliError::Usage("lemma1 requires --b".into()))?)
        }
        CheckKind::HausdorffYoung | CheckKind::Witness => {
            if b.is_some() {
                return Err(CliError::Usage(format!("{kind} takes --ell, not --b")));
            }
            ell
        }
        CheckKind::Theorem1 | CheckKind::PaleyWiener => {
            if b.is_some() || ell.is_some() {
                return Err(CliError::Usage(format!("{kind} takes no exponent")));
            }
            None
        }
    };
    let map = &entry.transform;
    let inversion = cfg.inversion(map.abscissa() + DEFAULT_LINE_OFFSET);
    let report = run_check(kind, map, parameter, &cfg.quadrature, &inversion)?;
    let text = match cfg.format {
        OutputFormat::Csv => csv_table(&report_rows(&report))?,
        OutputFormat::Json => json_text(&report)?,
    };
    emit(cfg, &text)?;
    Ok(Outcome::from_verdict(report.verdict))
}

#[derive(Debug, Serialize)]
struct ReportRow<'a> {
    check: &'a str,
    verdict: Verdict,
    probe: String,
    value: Option<f64>,
}

/// Evidence rows, then thresholds as `threshold:<name>` probes.
fn report_rows(report: &CheckReport) -> Vec<ReportRow<'_>> {
    let evidence = report.evidence.iter().map(|e| ReportRow {
        check: &report.check_name,
        verdict: report.verdict,
        probe: e.probe.clone(),
        value: e.value,
    });
    let thresholds = report.thresholds_used.iter().map(|(name, v)| ReportRow {
        check: &report.check_name,
        verdict: report.verdict,
        probe: format!("threshold:{name}"),
        value: Some(*v),
    });
    evidence.chain(thresholds).collect()
}

#[derive(Debug, Serialize)]
struct SolveOutput<'a> {
    solution: Vec<TimeRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<&'a CheckReport>,
}

pub fn cmd_solve_hypersingular(
    cfg: &RunConfig,
    g: &str,
    times: &str,
    verify: bool,
) -> Result<Outcome, CliError> {
    let entry = lookup(g)?;
    if entry.time_function.is_none() {
        return Err(CliError::Usage(format!(
            "'{g}' has no time-domain representative and is not a valid forcing term"
        )));
    }
    let times = parse_time_range(times)?;
    let problem = HypersingularProblem::from_transform(entry.transform.clone())?;
    let inversion = cfg.inversion(hypersingular::DEFAULT_SIGMA);
    let result = hypersingular::solve(&problem, &times, &inversion)?;
    let mut outcome = inversion_outcome(&result);

    let verification = if verify {
        let steps = (VERIFY_HORIZON / VERIFY_STEP).round() as usize;
        let dense: Vec<f64> = (0..=steps).map(|k| k as f64 * VERIFY_STEP).collect();
        let dense_result = hypersingular::solve(&problem, &dense, &inversion)?;
        let report = hypersingular::verify_in_laplace_domain(
            &problem,
            &dense_result,
            &verification_probes(),
            &cfg.quadrature,
        )?;
        if outcome == Outcome::Success {
            outcome = Outcome::from_verdict(report.verdict);
        }
        Some(report)
    } else {
        None
    };

    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut text = csv_table(&time_rows(&result))?;
            if let Some(report) = &verification {
                text.push('\n');
                text.push_str(&csv_table(&report_rows(report))?);
            }
            text
        }
        OutputFormat::Json => json_text(&SolveOutput {
            solution: time_rows(&result),
            verification: verification.as_ref(),
        })?,
    };
    emit(cfg, &text)?;
    Ok(outcome)
}

/// Transform-domain points used by `--verify`.
pub fn verification_probes() -> Vec<ComplexValue> {
    vec![
        ComplexValue::new(1.0, 0.0),
        ComplexValue::new(2.0, 0.0),
        ComplexValue::new(5.0, 0.0),
        ComplexValue::new(1.0, 1.0),
        ComplexValue::new(2.0, 3.0),
    ]
}

fn csv_table<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn json_text<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(matches!(
            parse_config("abs_tool = 1e-9\n"),
            Err(CliError::Config(_))
        ));
        let cfg = parse_config("abs_tol = 1e-9\nformat = \"json\"\n").unwrap();
        assert_eq!(cfg.abs_tol, Some(1e-9));
        assert_eq!(cfg.format, Some(OutputFormat::Json));
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "abs_tol = 1e-6\nrel_tol = 1e-5\nheight_count = 4\n").unwrap();
        let global = GlobalArgs {
            config: Some(path),
            abs_tol: Some(1e-9),
            ..GlobalArgs::default()
        };
        let cfg = RunConfig::resolve(&global).unwrap();
        assert_eq!(cfg.quadrature.abs_tol, 1e-9);
        assert_eq!(cfg.quadrature.rel_tol, 1e-5);
        assert_eq!(cfg.heights, vec![50.0, 100.0, 200.0, 400.0]);
    }

    #[test]
    fn defaults_match_core_defaults() {
        let cfg = RunConfig::resolve(&GlobalArgs::default()).unwrap();
        let core = InversionConfig::new(0.0);
        assert_eq!(cfg.heights, core.heights);
        assert_eq!(cfg.convergence_tolerance, core.convergence_tolerance);
        assert_eq!(cfg.quadrature, QuadratureConfig::default());
        assert_eq!(cfg.format, OutputFormat::Csv);
    }

    #[test]
    fn invalid_settings_are_config_errors() {
        let global = GlobalArgs {
            height_count: Some(1),
            ..GlobalArgs::default()
        };
        assert_eq!(RunConfig::resolve(&global).unwrap_err().exit_code(), 2);
        let global = GlobalArgs {
            abs_tol: Some(-1.0),
            ..GlobalArgs::default()
        };
        assert_eq!(RunConfig::resolve(&global).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn csv_headers_are_fixed() {
        let rows = [TransformRow {
            p_re: 1.0,
            p_im: 0.0,
            f_re: 0.5,
            f_im: 0.0,
        }];
        assert_eq!(
            csv_table(&rows).unwrap(),
            "p_re,p_im,F_re,F_im\n1.0,0.0,0.5,0.0\n"
        );
        let rows = [TimeRow {
            t: 1.0,
            f_re: 0.25,
            f_im: 0.0,
            converged: true,
        }];
        assert_eq!(
            csv_table(&rows).unwrap(),
            "t,f_re,f_im,converged\n1.0,0.25,0.0,true\n"
        );
    }

    #[test]
    fn report_rows_leave_missing_values_empty() {
        let mut report = CheckReport::new("demo");
        report.push("finite", 2.0);
        report.push("divergent", f64::INFINITY);
        report.threshold("limit", 0.5);
        let text = csv_table(&report_rows(&report)).unwrap();
        assert_eq!(
            text,
            "check,verdict,probe,value\ndemo,inconclusive,finite,2.0\ndemo,inconclusive,divergent,\n\
             demo,inconclusive,threshold:limit,0.5\n"
        );
    }

    #[test]
    fn core_errors_map_to_exit_codes() {
        let domain: CliError = laplace_kit::Error::Domain("x".into()).into();
        assert_eq!(domain.exit_code(), 2);
        let stalled: CliError = laplace_kit::Error::Convergence {
            estimate: ComplexValue::new(0.0, 0.0),
            error: 1.0,
        }
        .into();
        assert_eq!(stalled.exit_code(), 3);
    }
}
