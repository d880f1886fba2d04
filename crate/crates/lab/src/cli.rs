//! `dicke-lab` command line.
//!
//! Exit status: 0 on success, 1 for usage, configuration or parameter
//! errors, 2 when a computation or write fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dicke_core::{ModelParams, DEFAULT_TOL};
use serde_json::{Map, Value};

use crate::config::{parse_config, SweepSpec};
use crate::output::{write_output, Format};
use crate::quantity::Quantity;
use crate::report::{fixed_point_table, trajectory_table};
use crate::sweep::{run_sweep, run_sweep_with};
use crate::validate::validate_quantum;
use crate::LabError;

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "DICKE_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "dicke-lab",
    version,
    about = "Extended Dicke model: phase diagram, fixed points, Berry phase and exact diagonalization"
)]
struct Cli {
    /// Output format (defaults to the config's [output] format, then csv).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Output file (defaults to the config's [output] path, then stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, 0 = one per core.
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    omega_f: f64,
    #[arg(long = "omega-0", default_value_t = 1.0, allow_hyphen_values = true)]
    omega_0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    k1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    k2: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    j: f64,
}

impl ParamArgs {
    fn params(&self) -> ModelParams {
        ModelParams::new(
            self.omega_f,
            self.omega_0,
            self.gamma,
            self.k1,
            self.k2,
            self.j,
        )
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the critical coupling, Γ and phase.
    Critical(ParamArgs),
    /// List the classical fixed points with Hessian stability.
    FixedPoints(ParamArgs),
    /// Evaluate the config's quantities over its grid.
    Sweep { config: PathBuf },
    /// Berry-phase sweep (closed form, plus the numeric loop with [quantum]).
    Berry { config: PathBuf },
    /// Compare exact diagonalization with the thermodynamic limit.
    QuantumValidate { config: PathBuf },
    /// Integrate the classical flow from the [trajectory] start point.
    Trajectory { config: PathBuf },
}

struct Sink {
    format: Format,
    path: Option<PathBuf>,
}

impl Sink {
    fn resolve(cli: &Cli, spec: Option<&SweepSpec>) -> Self {
        let format = match cli.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            None => spec.and_then(|s| s.output.format).unwrap_or(Format::Csv),
        };
        let path = cli
            .out
            .clone()
            .or_else(|| spec.and_then(|s| s.output.path.clone()));
        Self { format, path }
    }
}

fn load(path: &Path) -> Result<SweepSpec, LabError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LabError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| LabError::Usage(format!("{}: {e}", path.display())))
}

/// `out.csv` → `out.trend.csv`.
fn sibling(path: &Path, tag: &str, format: Format) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{tag}.{}", format.extension()))
}

fn critical(p: &ModelParams, sink: &Sink) -> Result<(), LabError> {
    let gc = p.critical_coupling()?;
    let phase = p.classify_phase(DEFAULT_TOL)?;
    let ratio = p.coupling_ratio().ok();
    let text = match sink.format {
        Format::Json => {
            let mut m = Map::new();
            m.insert("gamma_c".into(), Value::from(gc));
            m.insert("Gamma".into(), ratio.map_or(Value::Null, Value::from));
            m.insert("phase".into(), Value::from(phase.as_str()));
            let mut s = serde_json::to_string_pretty(&Value::Object(m))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let r = ratio.map_or_else(|| "undefined".to_owned(), |r| format!("{r}"));
            format!("gamma_c = {gc}\nGamma = {r}\nphase = {phase}\n")
        }
    };
    match &sink.path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn berry_quantities(spec: &SweepSpec) -> Vec<Quantity> {
    if !spec.quantities.is_empty() {
        return spec.quantities.clone();
    }
    let mut q = vec![
        Quantity::Ratio,
        Quantity::BerryPhase,
        Quantity::BerryDerivative,
        Quantity::BerryPhaseUnscaled,
        Quantity::BerryDerivativeUnscaled,
    ];
    if spec.quantum.is_some() {
        q.extend([
            Quantity::EdNMean,
            Quantity::BerryNumeric,
            Quantity::BerryIdentityError,
        ]);
    }
    q
}

fn dispatch(cli: &Cli) -> Result<(), LabError> {
    let threads = cli.threads.unwrap_or(0);
    match &cli.command {
        Command::Critical(a) => critical(&a.params(), &Sink::resolve(cli, None)),
        Command::FixedPoints(a) => {
            let sink = Sink::resolve(cli, None);
            write_output(
                &fixed_point_table(&a.params())?,
                sink.format,
                sink.path.as_deref(),
            )
        }
        Command::Sweep { config } => {
            let spec = load(config)?;
            let sink = Sink::resolve(cli, Some(&spec));
            write_output(
                &run_sweep(&spec, threads)?,
                sink.format,
                sink.path.as_deref(),
            )
        }
        Command::Berry { config } => {
            let spec = load(config)?;
            let sink = Sink::resolve(cli, Some(&spec));
            let table = run_sweep_with(&spec, &berry_quantities(&spec), "berry", threads)?;
            write_output(&table, sink.format, sink.path.as_deref())
        }
        Command::QuantumValidate { config } => {
            let spec = load(config)?;
            let sink = Sink::resolve(cli, Some(&spec));
            let report = validate_quantum(&spec, threads)?;
            write_output(&report.points, sink.format, sink.path.as_deref())?;
            match &sink.path {
                Some(p) => write_output(
                    &report.trend,
                    sink.format,
                    Some(&sibling(p, "trend", sink.format)),
                ),
                None => {
                    let mut err = std::io::stderr().lock();
                    writeln!(err, "finite-size trend:")?;
                    crate::output::write_csv(&report.trend, &mut err)
                }
            }
        }
        Command::Trajectory { config } => {
            let spec = load(config)?;
            let sink = Sink::resolve(cli, Some(&spec));
            write_output(&trajectory_table(&spec)?, sink.format, sink.path.as_deref())
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dicke-lab: {e}");
            e.exit_code()
        }
    }
}
