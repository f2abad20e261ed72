//! Validated run configuration shared by the binary and the tests.

use std::path::PathBuf;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Coeffs,
    Norm,
    Integrate,
    Validate,
    Convergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Which side of the cross-validation produces the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    ClosedForm,
    Oracle,
}

impl Generator {
    pub fn label(self) -> &'static str {
        match self {
            Generator::ClosedForm => "closed-form",
            Generator::Oracle => "oracle",
        }
    }
}

/// Node ladder for a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub factor: usize,
}

impl Sweep {
    /// Node counts `min, min*factor, ...` up to and including `max`.
    pub fn ladder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut n = self.min_nodes;
        while n <= self.max_nodes {
            out.push(n);
            match n.checked_mul(self.factor) {
                Some(next) => n = next,
                None => break,
            }
        }
        out
    }
}

/// One fully-specified invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub omega: Option<f64>,
    pub nodes: Option<usize>,
    pub interval: (f64, f64),
    pub format: OutputFormat,
    pub function: Option<String>,
    pub samples_path: Option<PathBuf>,
    pub sweep: Option<Sweep>,
    pub generator: Generator,
    pub with_bound: bool,
    pub brute_force: bool,
}

impl RunConfig {
    /// A baseline configuration; commands fill in what they need.
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            omega: None,
            nodes: None,
            interval: (0.0, 1.0),
            format: OutputFormat::Json,
            function: None,
            samples_path: None,
            sweep: None,
            generator: Generator::ClosedForm,
            with_bound: false,
            brute_force: false,
        }
    }

    /// Cross-field invariants that the flag parser cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        let (a, b) = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(CliError::Usage(format!(
                "interval must satisfy a < b with finite endpoints, got ({a}, {b})"
            )));
        }
        match self.command {
            CommandKind::Integrate => {
                match (&self.function, &self.samples_path) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Usage(
                            "pass exactly one of --function and --samples, not both".into(),
                        ))
                    }
                    (None, None) => {
                        return Err(CliError::Usage(
                            "integrate needs exactly one of --function and --samples".into(),
                        ))
                    }
                    _ => {}
                }
                if self.function.is_some() && self.nodes.is_none() {
                    return Err(CliError::Usage("--function requires --nodes".into()));
                }
                if self.samples_path.is_some() && self.nodes.is_some() {
                    return Err(CliError::Usage(
                        "--nodes conflicts with --samples; the grid comes from the file".into(),
                    ));
                }
            }
            CommandKind::Validate => {
                if self.omega.is_some() != self.nodes.is_some() {
                    return Err(CliError::Usage(
                        "validate takes --omega and --nodes together (single case) or neither \
                         (full certification grid)"
                            .into(),
                    ));
                }
            }
            CommandKind::Convergence => {
                let sweep = self.sweep.ok_or_else(|| {
                    CliError::Usage("convergence needs --min-nodes and --max-nodes".into())
                })?;
                if sweep.min_nodes == 0 || sweep.min_nodes >= sweep.max_nodes {
                    return Err(CliError::Usage(format!(
                        "need 0 < min-nodes < max-nodes, got {} and {}",
                        sweep.min_nodes, sweep.max_nodes
                    )));
                }
                if sweep.factor < 2 {
                    return Err(CliError::Usage(format!(
                        "--factor must be at least 2, got {}",
                        sweep.factor
                    )));
                }
                if sweep.ladder().len() < 2 {
                    return Err(CliError::Usage(format!(
                        "ladder from {} by x{} stays below {} after one step; nothing to fit",
                        sweep.min_nodes, sweep.factor, sweep.max_nodes
                    )));
                }
            }
            CommandKind::Coeffs | CommandKind::Norm => {}
        }
        Ok(())
    }
}
