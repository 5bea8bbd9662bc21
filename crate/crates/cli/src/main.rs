use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stcm_cli::{
    cmd_ber_sweep, cmd_coupling_matrix, cmd_optimize, cmd_selection_compare, CliError,
    ExperimentConfig, Overrides, Result, SweepAxis,
};
use stcm_core::SelectionStyle;

/// STCM-MIMO experiments with mutual coupling between dipole elements.
#[derive(Debug, Parser)]
#[command(name = "stcm", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// TOML experiment file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte-Carlo trials per SNR point.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output directory [fallback: $STCM_OUT_DIR, then .].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Simulate with an uncoupled array.
    #[arg(long, global = true)]
    no_coupling: bool,

    /// Sub-array selection: contiguous or interleaved.
    #[arg(long, global = true)]
    style: Option<SelectionStyle>,

    /// Also emit a gnuplot script next to the CSVs.
    #[arg(long, global = true)]
    gnuplot: bool,
}

#[derive(Debug, Args)]
struct ArrayArgs {
    /// Number of elements M (even).
    #[arg(short = 'm', long)]
    elements: Option<usize>,

    /// Element spacing in wavelengths.
    #[arg(short = 'd', long)]
    spacing: Option<f64>,

    /// Array aperture in wavelengths.
    #[arg(long)]
    total_length: Option<f64>,

    /// SNR points in dB, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    snr: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the coupling matrix C and print the condition estimate.
    CouplingMatrix(#[command(flatten)] ArrayArgs),
    /// BER curves over a list of spacings, element counts or SNRs.
    BerSweep {
        #[command(flatten)]
        array: ArrayArgs,
        /// spacing, elements or snr [default: spacing].
        #[arg(long)]
        axis: Option<SweepAxis>,
        /// Sweep values, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Option<Vec<f64>>,
    },
    /// Search for the BER-optimal element count over a fixed aperture.
    Optimize {
        #[command(flatten)]
        array: ArrayArgs,
        /// Lower and upper element counts.
        #[arg(long, num_args = 2, value_names = ["LOWER", "UPPER"])]
        interval: Option<Vec<usize>>,
        #[arg(long)]
        step: Option<usize>,
    },
    /// BER of contiguous versus interleaved sub-arrays with shared draws.
    SelectionCompare(#[command(flatten)] ArrayArgs),
}

fn overrides(g: &Global, a: &ArrayArgs) -> Overrides {
    Overrides {
        seed: g.seed,
        trials: g.trials,
        workers: g.workers,
        out_dir: g.out_dir.clone(),
        no_coupling: g.no_coupling,
        style: g.style,
        element_count: a.elements,
        spacing: a.spacing,
        total_length: a.total_length,
        snr_db: a.snr.clone(),
        gnuplot: g.gnuplot,
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.global.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let workers = cli.global.workers;
    match cli.command {
        Command::CouplingMatrix(a) => {
            cfg.apply(&overrides(&cli.global, &a));
            let out = cmd_coupling_matrix(&cfg)?;
            println!("condition estimate: {:.6e}", out.coupling.condition());
            println!("wrote {}", out.path.display());
        }
        Command::BerSweep {
            array,
            axis,
            values,
        } => {
            cfg.apply(&overrides(&cli.global, &array));
            if values.is_some() {
                cfg.sweep.values = values;
            }
            let axis = match (axis, &cfg.sweep.axis) {
                (Some(a), _) => a,
                (None, Some(name)) => name
                    .parse()
                    .map_err(|e| CliError::config(format!("[sweep] axis: {e}")))?,
                (None, None) => SweepAxis::Spacing,
            };
            let out = cmd_ber_sweep(&cfg, axis, workers)?;
            for p in &out.points {
                println!("wrote {}", p.path.display());
            }
            println!("wrote {}", out.combined.display());
        }
        Command::Optimize {
            array,
            interval,
            step,
        } => {
            cfg.apply(&overrides(&cli.global, &array));
            if let Some(iv) = interval {
                cfg.search.interval = Some([iv[0], iv[1]]);
            }
            if step.is_some() {
                cfg.search.step = step;
            }
            let out = cmd_optimize(&cfg, workers)?;
            println!("n* = {}", out.trace.optimum);
            println!("wrote {}", out.path.display());
        }
        Command::SelectionCompare(a) => {
            cfg.apply(&overrides(&cli.global, &a));
            let out = cmd_selection_compare(&cfg, workers)?;
            println!("wrote {}", out.path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
