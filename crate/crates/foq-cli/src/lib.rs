//! Engine behind the `foq` binary.
//!
//! The binary parses flags into a [`config::RunConfig`] and hands it to
//! [`run`]; everything observable (report text, diagnostics, exit code)
//! comes back as a [`RunOutcome`] so tests can drive the full pipeline
//! in-process as well as through the executable.
//!
//! Exit codes: 0 success, 1 validation failure (a certified invariant or
//! a numeric routine failed), 2 usage error, 3 I/O error.

pub mod config;
pub mod output;
pub mod samples;

use std::fmt;

use foq_core::certify::{certify_case, certify_full, ToleranceProfile};
use foq_core::numerics::{fit_loglog_slope, oscillatory_integral};
use foq_core::quadrature::builtins;
use foq_core::{
    apply, error_norm_report, integrate_samples, norm_squared_closed, optimal_coefficients,
    oracle, CoefficientSet, Complex64, FourierWeight, UniformGrid,
};

use config::{CommandKind, Generator, OutputFormat, RunConfig};
use output::{
    to_json, CoefficientDocument, ConvergenceDocument, ConvergenceRow, IntegrateDocument,
    NormDocument, ReIm,
};

/// Environment variable selecting the certification tolerance set.
pub const PROFILE_ENV: &str = "FOQ_TOLERANCE_PROFILE";

#[derive(Debug, Clone)]
pub enum CliError {
    /// Bad flags or malformed input data; exit 2.
    Usage(String),
    /// Filesystem failure; exit 3.
    Io(String),
    /// A computation failed; exit 1.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
            CliError::Numeric(msg) => write!(f, "computation failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Argument-shaped library errors become usage errors; the rest mean a
/// numeric routine gave up.
fn lift(err: foq_core::Error) -> CliError {
    match err {
        foq_core::Error::InvalidArgument(_)
        | foq_core::Error::GridMismatch(_)
        | foq_core::Error::NonFiniteData(_) => CliError::Usage(err.to_string()),
        _ => CliError::Numeric(err.to_string()),
    }
}

/// Everything a run produces: the report for stdout, diagnostics for
/// stderr, and the process exit code.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: String,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
}

impl RunOutcome {
    fn ok(report: String) -> Self {
        RunOutcome { report, diagnostics: Vec::new(), exit_code: 0 }
    }
}

/// Read the tolerance profile from the environment (strict or default;
/// unset means default; anything else is a usage error).
pub fn tolerance_profile_from_env() -> Result<ToleranceProfile, CliError> {
    match std::env::var(PROFILE_ENV) {
        Ok(value) => match value.as_str() {
            "strict" => Ok(ToleranceProfile::strict()),
            "default" => Ok(ToleranceProfile::default_profile()),
            other => Err(CliError::Usage(format!(
                "{PROFILE_ENV} must be `strict` or `default`, got `{other}`"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(ToleranceProfile::default_profile()),
        Err(e) => Err(CliError::Usage(format!("{PROFILE_ENV}: {e}"))),
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    match config.command {
        CommandKind::Coeffs => run_coeffs(config),
        CommandKind::Norm => run_norm(config),
        CommandKind::Integrate => run_integrate(config),
        CommandKind::Validate => run_validate(config),
        CommandKind::Convergence => run_convergence(config),
    }
}

fn required_weight(config: &RunConfig) -> Result<FourierWeight, CliError> {
    let omega = config
        .omega
        .ok_or_else(|| CliError::Usage("--omega is required".into()))?;
    FourierWeight::new(omega).map_err(lift)
}

fn required_grid(config: &RunConfig) -> Result<UniformGrid, CliError> {
    let nodes = config
        .nodes
        .ok_or_else(|| CliError::Usage("--nodes is required".into()))?;
    UniformGrid::new(config.interval.0, config.interval.1, nodes).map_err(lift)
}

/// Coefficients from the requested generator: the closed forms, or the
/// independently assembled linear system (transported off the unit
/// interval the same way the closed forms are).
fn generate_coefficients(
    omega: FourierWeight,
    grid: UniformGrid,
    generator: Generator,
) -> Result<CoefficientSet, CliError> {
    match generator {
        Generator::ClosedForm => optimal_coefficients(omega, grid).map_err(lift),
        Generator::Oracle => {
            let length = grid.length();
            let unit_omega = FourierWeight::new(omega.value() * length).map_err(lift)?;
            let solved = oracle::solve_optimality(unit_omega, grid.n_intervals()).map_err(lift)?;
            let angle = std::f64::consts::TAU * omega.value() * grid.a();
            let factor = length * Complex64::new(angle.cos(), angle.sin());
            CoefficientSet::from_parts(
                solved.coefficients.values().iter().map(|v| factor * v).collect(),
                omega,
                grid,
            )
            .map_err(lift)
        }
    }
}

fn run_coeffs(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let omega = required_weight(config)?;
    let grid = required_grid(config)?;
    let set = generate_coefficients(omega, grid, config.generator)?;
    let doc = CoefficientDocument::from_set(&set, config.generator);
    Ok(RunOutcome::ok(match config.format {
        OutputFormat::Json => to_json(&doc),
        OutputFormat::Csv => doc.to_csv(),
    }))
}

fn run_norm(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let omega = required_weight(config)?;
    let grid = required_grid(config)?;
    let report = error_norm_report(omega, grid, config.brute_force).map_err(lift)?;
    let doc = NormDocument {
        omega: omega.value(),
        a: grid.a(),
        b: grid.b(),
        n_intervals: grid.n_intervals(),
        norm_squared: report.norm_squared,
        asymptotic_estimate: report.asymptotic_estimate,
        brute_force: report.brute_force_value,
    };
    Ok(RunOutcome::ok(match config.format {
        OutputFormat::Json => to_json(&doc),
        OutputFormat::Csv => doc.to_csv(),
    }))
}

fn run_integrate(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let omega = required_weight(config)?;
    let (samples, source) = if let Some(name) = &config.function {
        let builtin = builtins::by_name(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown builtin `{name}`; available: {}",
                builtins::ALL.map(|f| f.name).join(", ")
            ))
        })?;
        let grid = required_grid(config)?;
        (builtin.sample(grid).map_err(lift)?, format!("builtin:{name}"))
    } else {
        let path = config.samples_path.as_deref().expect("validated");
        (samples::load_samples(path)?, format!("file:{}", path.display()))
    };

    let grid = samples.grid();
    let result = integrate_samples(&samples, omega, config.with_bound).map_err(lift)?;
    let doc = IntegrateDocument {
        omega: omega.value(),
        a: grid.a(),
        b: grid.b(),
        n_intervals: grid.n_intervals(),
        source,
        value: ReIm::from(result.value),
        seminorm: result.norm_used,
        error_bound: result.error_bound,
    };
    Ok(RunOutcome::ok(match config.format {
        OutputFormat::Json => to_json(&doc),
        OutputFormat::Csv => doc.to_csv(),
    }))
}

fn run_validate(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let profile = tolerance_profile_from_env()?;
    let report = match (config.omega, config.nodes) {
        (Some(omega), Some(nodes)) => {
            let weight = FourierWeight::new(omega).map_err(lift)?;
            certify_case(weight, nodes, &profile).map_err(lift)?
        }
        (None, None) => certify_full(&profile).map_err(lift)?,
        _ => unreachable!("checked by RunConfig::validate"),
    };
    let passed = report.passed;
    Ok(RunOutcome {
        report: to_json(&report),
        diagnostics: report.failure_lines(),
        exit_code: if passed { 0 } else { 1 },
    })
}

fn run_convergence(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let omega = required_weight(config)?;
    let sweep = config.sweep.expect("validated");
    let ladder = sweep.ladder();

    // One reference integral per builtin, shared across the ladder.
    let references: Vec<(&str, Complex64)> = builtins::ALL
        .iter()
        .map(|builtin| {
            oscillatory_integral(|x| builtin.value(x), omega.value(), 0.0, 1.0, 1e-13)
                .map(|truth| (builtin.name, truth))
                .map_err(lift)
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(ladder.len());
    let mut hs = Vec::with_capacity(ladder.len());
    let mut norms = Vec::with_capacity(ladder.len());
    for &n in &ladder {
        let grid = UniformGrid::unit(n).map_err(lift)?;
        let coeffs = optimal_coefficients(omega, grid).map_err(lift)?;
        let norm = norm_squared_closed(omega, n).map_err(lift)?.sqrt();
        let mut errors = std::collections::BTreeMap::new();
        for (builtin, (name, truth)) in builtins::ALL.iter().zip(&references) {
            let samples = builtin.sample(grid).map_err(lift)?;
            let value = apply(&coeffs, &samples).map_err(lift)?.value;
            errors.insert(name.to_string(), (value - truth).norm());
        }
        hs.push(grid.spacing());
        norms.push(norm);
        rows.push(ConvergenceRow { n_intervals: n, h: grid.spacing(), norm, errors });
    }

    let fitted_slope = fit_loglog_slope(&hs, &norms).map_err(lift)?;
    let doc = ConvergenceDocument { omega: omega.value(), factor: sweep.factor, rows, fitted_slope };
    Ok(RunOutcome::ok(match config.format {
        OutputFormat::Json => to_json(&doc),
        OutputFormat::Csv => doc.to_csv(),
    }))
}
