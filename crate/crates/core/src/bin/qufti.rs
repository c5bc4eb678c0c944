use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qufti::sweep::{open_output, write_json};
use qufti::{
    run_sensitivity, run_sweep, run_verify, ModelSelection, OutputFormat, PhiGrid, ProbabilityMethod, QuftiError,
    RunConfig, VerifyOptions, WeightSpec,
};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "qufti", version, about = "Phase estimation in quantum Fourier transform interferometers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detection probabilities over a phase grid.
    Sweep(RunArgs),
    /// Numerical and analytic phase sensitivity for both photon models.
    Sensitivity(RunArgs),
    /// Run the randomized self-checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: Option<usize>,
    /// constant, linear, index0 or file:PATH
    #[arg(long, default_value = "linear")]
    weights: WeightSpec,
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    phi_start: f64,
    #[arg(long, default_value_t = 1e-2, allow_negative_numbers = true)]
    phi_end: f64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long)]
    log_grid: bool,
    /// I, D or both
    #[arg(long, default_value = "both")]
    model: ModelSelection,
    #[arg(long, value_delimiter = ',', default_value = "exact,closed_form")]
    methods: Vec<ProbabilityMethod>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    serial: bool,
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        RunConfig {
            n: a.n,
            weights: a.weights,
            grid: PhiGrid { start: a.phi_start, end: a.phi_end, steps: a.steps, log: a.log_grid },
            model: a.model,
            methods: a.methods,
            format: a.format,
            output: a.out,
            seed: a.seed,
            parallel: !a.serial,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest number of modes checked (at most 8).
    #[arg(long, default_value_t = 7)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    cases: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    corrupt_unitary: bool,
}

fn fail(err: QuftiError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(if err.is_io() { EXIT_IO } else { EXIT_INVALID })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep(args) => run_sweep(&args.into()).map(|_| ExitCode::SUCCESS),
        Command::Sensitivity(args) => run_sensitivity(&args.into()).map(|_| ExitCode::SUCCESS),
        Command::Verify(args) => verify(args),
    };
    outcome.unwrap_or_else(fail)
}

fn verify(args: VerifyArgs) -> qufti::Result<ExitCode> {
    let opts = VerifyOptions { n_max: args.n, cases: args.cases, seed: args.seed, corrupt_unitary: args.corrupt_unitary };
    let report = run_verify(&opts)?;
    let dest = RunConfig { output: args.out, ..RunConfig::default() };
    let mut w = open_output(&dest)?;
    match args.format {
        OutputFormat::Csv => writeln!(w, "{report}")?,
        OutputFormat::Json => write_json(&report, &mut w)?,
    }
    w.flush()?;
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_CHECK_FAILED) })
}
