mod commands;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Artifact, CliError, Status};

#[derive(Parser, Debug)]
#[command(name = "tlab", version, about = "Fourier-mode verification for thermoelastic laminated Timoshenko systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// System configuration file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub xi_min: f64,
    #[arg(long, global = true, default_value_t = 1e2)]
    pub xi_max: f64,
    #[arg(long, global = true, default_value_t = 200)]
    pub xi_per_decade: usize,
    /// Number of time samples.
    #[arg(long, global = true, default_value_t = 31)]
    pub times: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Derivative order of the measured norm.
    #[arg(long, global = true, default_value_t = 0)]
    pub j: u32,
    /// Extra derivatives spent on the high-frequency term.
    #[arg(long, global = true, default_value_t = 1)]
    pub ell: u32,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Propagate one Fourier mode and tabulate its energy and amplitudes.
    SimulateMode {
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
        /// Component excited at t = 0 (v, u, z, y, phi, theta, sigma, eta).
        #[arg(long, default_value = "eta")]
        component: String,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
    },
    /// Eigenvalues and spectral abscissa over the frequency grid.
    SpectrumScan,
    /// Residuals of the differential identities for this configuration.
    Identities,
    /// Search for a pointwise decay certificate.
    Certify,
    /// Decay rates for this configuration.
    Predict,
    /// Whole-line decay series against the predicted bound.
    Decay,
    /// Full suite for one configuration as a single JSON document.
    Report,
}

/// Everything that determines the outputs of one run.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: Command,
    pub opts: Opts,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("TLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("TLAB_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn emit(out: &Option<PathBuf>, artifacts: &[Artifact]) -> Result<(), CliError> {
    match out {
        None => {
            for a in artifacts {
                print!("{}", a.body);
            }
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
            for a in artifacts {
                let path = dir.join(&a.file);
                fs::write(&path, &a.body).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let manifest = RunManifest { command: cli.command, opts: cli.opts };
    let result = configure_threads().and_then(|_| commands::run(&manifest)).and_then(|(artifacts, status)| {
        emit(&manifest.opts.out, &artifacts)?;
        Ok(status)
    });
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail(criteria)) => {
            eprintln!("verification failed: {}", criteria.join(", "));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
