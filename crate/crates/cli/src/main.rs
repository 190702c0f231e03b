use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nilflat_cli::{cmd_certify, cmd_curvature, cmd_extend, cmd_peel, cmd_validate, CliError, OutputFormat, RunConfig, TGrid};

/// Nilmanifolds as iterated circle bundles: validate, peel, extend, and
/// certify almost-flat collapsing metrics.
#[derive(Debug, Parser)]
#[command(name = "nilflat", version)]
struct Cli {
    /// Worker threads for sampling (default: all cores). Outputs do not
    /// depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Sampling {
    /// Metric file (default: identity in the given basis).
    #[arg(long)]
    metric: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check Jacobi, nilpotency, adaptedness and lattice closure.
    Validate { file: PathBuf },
    /// Write the bundle tower of a lattice.
    Peel {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the central extension of a lattice by a cocycle.
    Extend {
        base: PathBuf,
        cocycle: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Scan sampled sectional curvature of the canonical variation.
    Curvature {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-6)]
        t_min: f64,
        #[arg(long, default_value_t = 7)]
        t_points: usize,
        /// csv: table to --out and summary to the same path with a .json
        /// extension; json: summary only.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Find fiber scales making sampled |K| at most eps.
    Certify {
        file: PathBuf,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { file } => {
            println!("{}", cmd_validate(&file)?);
            Ok(())
        }
        Command::Peel { file, common } => emit(common.out.as_deref(), &cmd_peel(&file)?),
        Command::Extend { base, cocycle, common } => emit(common.out.as_deref(), &cmd_extend(&base, &cocycle)?),
        Command::Curvature { file, sampling, t_max, t_min, t_points, format, common } => {
            let config = RunConfig {
                metric: sampling.metric,
                t_grid: TGrid { t_max, t_min, points: t_points },
                n_samples: sampling.samples,
                seed: sampling.seed,
                out: common.out.clone(),
                format,
                ..RunConfig::new("curvature", vec![file])
            };
            let result = cmd_curvature(&config)?;
            match (format, common.out.as_deref()) {
                (OutputFormat::Json, out) => emit(out, &result.summary),
                (OutputFormat::Csv, Some(p)) => {
                    emit(Some(p), &result.csv)?;
                    emit(Some(&p.with_extension("json")), &result.summary)
                }
                (OutputFormat::Csv, None) => emit(None, &result.csv),
            }
        }
        Command::Certify { file, eps, sampling, common } => {
            let config = RunConfig {
                metric: sampling.metric,
                eps: Some(eps),
                n_samples: sampling.samples,
                seed: sampling.seed,
                out: common.out.clone(),
                format: OutputFormat::Json,
                ..RunConfig::new("certify", vec![file])
            };
            emit(common.out.as_deref(), &cmd_certify(&config)?.json)
        }
    }
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
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
