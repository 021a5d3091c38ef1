//! `catphase`: figure data, optimisation and Monte-Carlo campaigns for
//! cat-state phase detection.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure.

mod commands;
mod error;
mod output;
mod svg;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "catphase", version, about = "Schrödinger-cat phase detection toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct DeltaSweep {
    /// Cat amplitude; repeat for one column per amplitude.
    #[arg(long = "alpha", required = true)]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    delta_min: f64,
    #[arg(long, default_value_t = 3.0)]
    delta_max: f64,
    #[arg(long, default_value_t = 601)]
    steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    Asym,
    Antisym,
    General,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Overlap of the cat with its displaced copy versus delta.
    Overlap {
        #[command(flatten)]
        sweep: DeltaSweep,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Photon-number parity of the displaced cat versus delta.
    Parity {
        #[command(flatten)]
        sweep: DeltaSweep,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Miss and detection probabilities at the optimal delta versus alpha.
    Errors {
        #[arg(long, default_value_t = 1.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 4.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 61)]
        steps: usize,
        #[arg(long, default_value_t = catphase_core::optimizer::DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Locate the parity minimum for one amplitude.
    Optimize {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = catphase_core::optimizer::DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded photon-counting campaign with the odd-count decision rule.
    Simulate {
        #[arg(long)]
        alpha: f64,
        #[arg(long, required_unless_present = "auto_delta", conflicts_with = "auto_delta")]
        delta: Option<f64>,
        /// Use the parity-minimising delta.
        #[arg(long)]
        auto_delta: bool,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = catphase_core::optimizer::DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Displacement produced by an interferometer phase shift.
    Ifo {
        #[arg(long, value_enum)]
        topology: TopologyArg,
        #[arg(long)]
        reflectivity: Option<f64>,
        #[arg(long)]
        transmissivity: Option<f64>,
        #[arg(long)]
        carrier_amplitude: f64,
        /// Signal phase (arm 1 phase for the general topology).
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// Arm 2 phase, general topology only.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi2: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Detectable phase and reference sensitivities for a carrier of N photons.
    Phase {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n_carrier: f64,
        /// Logarithmic squeeze factor for the squeezed-light reference.
        #[arg(long, default_value_t = 0.0)]
        squeeze: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CATPHASE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("CATPHASE_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (result, output) = match cli.command {
        Command::Overlap { sweep, output } => (
            commands::overlap_curve(&sweep.alphas, sweep.delta_min, sweep.delta_max, sweep.steps),
            output,
        ),
        Command::Parity { sweep, output } => (
            commands::parity_curve(&sweep.alphas, sweep.delta_min, sweep.delta_max, sweep.steps),
            output,
        ),
        Command::Errors {
            alpha_min,
            alpha_max,
            steps,
            tolerance,
            output,
        } => (commands::error_curve(alpha_min, alpha_max, steps, tolerance), output),
        Command::Optimize {
            alpha,
            tolerance,
            output,
        } => (commands::optimize(alpha, tolerance), output),
        Command::Simulate {
            alpha,
            delta,
            auto_delta,
            shots,
            seed,
            tolerance,
            output,
        } => {
            let delta = if auto_delta { None } else { delta };
            (commands::simulate(alpha, delta, shots, seed, tolerance), output)
        }
        Command::Ifo {
            topology,
            reflectivity,
            transmissivity,
            carrier_amplitude,
            phi,
            phi2,
            output,
        } => {
            let topology = match topology {
                TopologyArg::Asym => catphase_core::Topology::Asymmetric,
                TopologyArg::Antisym => catphase_core::Topology::Antisymmetric,
                TopologyArg::General => catphase_core::Topology::General,
            };
            (
                commands::ifo(topology, reflectivity, transmissivity, carrier_amplitude, phi, phi2),
                output,
            )
        }
        Command::Phase {
            alpha,
            n_carrier,
            squeeze,
            output,
        } => (commands::phase(alpha, n_carrier, squeeze), output),
    };
    let text = output::render(&result?, output.format)?;
    output::emit(&text, output.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("catphase: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
