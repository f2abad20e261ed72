//! `foq`: optimal quadrature for Fourier integrals on uniform grids.
//!
//! Flag parsing only; all behavior lives in the `foq_cli` library so the
//! full pipeline is testable in-process.  Exit codes: 0 success, 1
//! validation/computation failure, 2 usage error, 3 I/O error.

use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};
use foq_cli::config::{CommandKind, Generator, OutputFormat, RunConfig, Sweep};
use foq_cli::CliError;

#[derive(Parser)]
#[command(
    name = "foq",
    version,
    about = "Optimal quadrature for Fourier integrals int_a^b e^{2 pi i omega x} phi(x) dx \
             on equally spaced nodes, with worst-case error norms and certification sweeps",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeneratorArg {
    ClosedForm,
    Oracle,
}

impl From<GeneratorArg> for Generator {
    fn from(g: GeneratorArg) -> Self {
        match g {
            GeneratorArg::ClosedForm => Generator::ClosedForm,
            GeneratorArg::Oracle => Generator::Oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit the optimal coefficients for one (omega, N, [a, b]) case
    Coeffs {
        /// Frequency omega of the weight e^{2 pi i omega x}
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        /// Number of grid intervals N (the rule uses N + 1 nodes)
        #[arg(long)]
        nodes: usize,
        /// Integration interval endpoints
        #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0.0, 1.0],
              allow_negative_numbers = true)]
        interval: Vec<f64>,
        /// Report encoding
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Coefficient source: closed forms, or the independently
        /// assembled optimality system solved numerically
        #[arg(long, value_enum, default_value_t = GeneratorArg::ClosedForm)]
        generator: GeneratorArg,
    },
    /// Report the worst-case error norm of the rule (squared), with its
    /// small-step expansion
    Norm {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long)]
        nodes: usize,
        #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0.0, 1.0],
              allow_negative_numbers = true)]
        interval: Vec<f64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Also evaluate the defining quadratic form by numerical
        /// integration (independent of the closed form; slower)
        #[arg(long)]
        brute_force: bool,
    },
    /// Integrate a builtin function or a CSV sample file
    Integrate {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        /// Grid intervals (builtin functions only; sample files carry
        /// their own grid)
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        nodes: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with = "samples",
              allow_negative_numbers = true)]
        interval: Option<Vec<f64>>,
        /// Builtin integrand (exp-neg, exp, one, x, x-squared, sin-pi-x, runge)
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        function: Option<String>,
        /// CSV sample file with header x,re,im and uniform positions
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Attach the worst-case error bound (finite-difference semi-norm
        /// for sample files, exact derivatives for builtins)
        #[arg(long)]
        with_bound: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Certify the closed forms against the linear-system oracle; exits 1
    /// on any violation.  Honors FOQ_TOLERANCE_PROFILE (strict|default).
    Validate {
        /// Certify a single case (requires --nodes); omit both for the
        /// full certification grid
        #[arg(long, allow_negative_numbers = true, requires = "nodes")]
        omega: Option<f64>,
        #[arg(long, requires = "omega")]
        nodes: Option<usize>,
    },
    /// Tabulate the error norm and per-builtin observed errors over a
    /// node ladder, with the fitted log-log slope
    Convergence {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long)]
        min_nodes: usize,
        #[arg(long)]
        max_nodes: usize,
        /// Node-count multiplier between ladder steps
        #[arg(long, default_value_t = 2)]
        factor: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
}

fn pair(interval: Vec<f64>) -> (f64, f64) {
    (interval[0], interval[1])
}

impl Command {
    fn into_config(self) -> RunConfig {
        match self {
            Command::Coeffs { omega, nodes, interval, format, generator } => {
                let mut config = RunConfig::new(CommandKind::Coeffs);
                config.omega = Some(omega);
                config.nodes = Some(nodes);
                config.interval = pair(interval);
                config.format = format.into();
                config.generator = generator.into();
                config
            }
            Command::Norm { omega, nodes, interval, format, brute_force } => {
                let mut config = RunConfig::new(CommandKind::Norm);
                config.omega = Some(omega);
                config.nodes = Some(nodes);
                config.interval = pair(interval);
                config.format = format.into();
                config.brute_force = brute_force;
                config
            }
            Command::Integrate { omega, nodes, interval, function, samples, with_bound, format } => {
                let mut config = RunConfig::new(CommandKind::Integrate);
                config.omega = Some(omega);
                config.nodes = nodes;
                config.interval = interval.map(pair).unwrap_or((0.0, 1.0));
                config.function = function;
                config.samples_path = samples;
                config.with_bound = with_bound;
                config.format = format.into();
                config
            }
            Command::Validate { omega, nodes } => {
                let mut config = RunConfig::new(CommandKind::Validate);
                config.omega = omega;
                config.nodes = nodes;
                config
            }
            Command::Convergence { omega, min_nodes, max_nodes, factor, format } => {
                let mut config = RunConfig::new(CommandKind::Convergence);
                config.omega = Some(omega);
                config.sweep = Some(Sweep { min_nodes, max_nodes, factor });
                config.format = format.into();
                config
            }
        }
    }
}

fn fail(error: CliError) -> ! {
    eprintln!("{error}");
    exit(error.exit_code());
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout with success; everything else
            // is a usage error.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            exit(code);
        }
    };
    match foq_cli::run(&cli.command.into_config()) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            for line in &outcome.diagnostics {
                eprintln!("{line}");
            }
            exit(outcome.exit_code);
        }
        Err(e) => fail(e),
    }
}
