use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qwalk_cli::{parse_complex, parse_grid, CliError, Mode, RunConfig};

/// Coined quantum walk on a line: direct iteration, decoupled recurrence,
/// exact spectral solution, and the long-wavelength approximation.
#[derive(Parser)]
#[command(name = "qwalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Direct iteration of the coupled walk recurrences
    Walk(CommonArgs),
    /// Per-channel evolution with the decoupled three-term recurrence
    Decoupled(CommonArgs),
    /// Exact Green-function reconstruction of the amplitudes
    Spectral(CommonArgs),
    /// Long-wavelength Airy-packet approximation on a position grid
    Longwave(CommonArgs),
    /// Dispersion-relation branches and their residuals over the
    /// Brillouin zone
    Dispersion(CommonArgs),
    /// All solver routes side by side with hard agreement checks
    Compare(CommonArgs),
    /// Reflected-convention (Nayak-Vishwanath) iteration vs closed-form
    /// integrals
    Nv(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Coin parameter in [0, 1]; 0.5 is the Hadamard coin
    #[arg(long, default_value_t = 0.5)]
    rho: f64,

    /// Number of walk steps (walk, decoupled, spectral, compare, nv)
    #[arg(long)]
    steps: Option<usize>,

    /// Continuum time (longwave)
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,

    /// Initial R amplitude, `a+bi` syntax [default: 1/sqrt(2)]
    #[arg(long, allow_hyphen_values = true)]
    r0: Option<String>,

    /// Initial L amplitude, `a+bi` syntax [default: i/sqrt(2)]
    #[arg(long, allow_hyphen_values = true)]
    l0: Option<String>,

    /// Gaussian cutoff width for the long-wavelength fields
    #[arg(long, default_value_t = 0.4)]
    w: f64,

    /// Evaluation grid as start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,

    /// Brillouin-zone quadrature nodes
    #[arg(long, default_value_t = 4096)]
    nodes: usize,

    /// Rescale the longwave profile to unit mass on the grid
    #[arg(long)]
    normalize: bool,

    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

fn build_config(mode: Mode, args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::new(mode);
    config.rho = args.rho;
    config.steps = args.steps;
    config.tau = args.tau;
    if let Some(r0) = &args.r0 {
        config.r0 = parse_complex(r0)?;
    }
    if let Some(l0) = &args.l0 {
        config.l0 = parse_complex(l0)?;
    }
    config.w = args.w;
    config.grid = args.grid.as_deref().map(parse_grid).transpose()?;
    config.nodes = args.nodes;
    config.normalize = args.normalize;
    Ok(config)
}

/// `QWALK_THREADS` caps internal parallelism; 0 or unset means automatic.
fn configure_threads() -> Result<(), CliError> {
    match std::env::var("QWALK_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw.trim().parse().map_err(|_| {
                CliError::Config(format!("QWALK_THREADS must be a nonnegative integer, got {raw:?}"))
            })?;
            if n == 0 {
                return Ok(());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("thread pool setup failed: {e}")))
        }
    }
}

fn try_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    configure_threads()?;
    let (mode, args) = match &cli.command {
        Command::Walk(a) => (Mode::Walk, a),
        Command::Decoupled(a) => (Mode::Decoupled, a),
        Command::Spectral(a) => (Mode::Spectral, a),
        Command::Longwave(a) => (Mode::Longwave, a),
        Command::Dispersion(a) => (Mode::Dispersion, a),
        Command::Compare(a) => (Mode::Compare, a),
        Command::Nv(a) => (Mode::Nv, a),
    };
    let config = build_config(mode, args)?;
    qwalk_cli::execute(&config, &args.out)
}

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("qwalk: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
