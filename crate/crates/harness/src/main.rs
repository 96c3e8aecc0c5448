//! `dnls` — experiment CLI.
//!
//! ```text
//! dnls <experiment> --config <path.json> [--out <dir>] [--threads N] [--seed S]
//! ```
//!
//! Exit codes: 0 = all checks pass, 1 = some check failed, 2 = bad
//! configuration or i/o. Outputs `records.csv`, `summary.json` and
//! (with `emit_plot`) `plot.dat` under the output directory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dnls::{Experiment, ExperimentConfig, HarnessError};

#[derive(Parser)]
#[command(name = "dnls", about = "Discrete NLS laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: out/<experiment>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rayon worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Orthonormality, eigenvalue and completeness identities.
    SpectralCheck(RunArgs),
    /// Commutator identities on hZ^d and the weighted commutator on Ω.
    Commutator(RunArgs),
    /// Short-time dispersive decay of the propagator kernel.
    Dispersive(RunArgs),
    /// Strichartz uniformity sweep with the loss-exponent rule.
    Strichartz(RunArgs),
    /// Time-averaged L^inf growth of nonlinear solutions.
    Linfty(RunArgs),
    /// Weighted-norm growth of nonlinear solutions.
    WeightedGrowth(RunArgs),
    /// Continuum-limit convergence rate.
    Converge(RunArgs),
    /// Small-amplitude scaling bridge to the unit lattice.
    SmallAmplitude(RunArgs),
    /// Plain solver run with snapshot output.
    Solve(RunArgs),
}

impl Command {
    fn expected(&self) -> Experiment {
        match self {
            Command::SpectralCheck(_) => Experiment::SpectralCheck,
            Command::Commutator(_) => Experiment::Commutator,
            Command::Dispersive(_) => Experiment::Dispersive,
            Command::Strichartz(_) => Experiment::Strichartz,
            Command::Linfty(_) => Experiment::Linfty,
            Command::WeightedGrowth(_) => Experiment::WeightedGrowth,
            Command::Converge(_) => Experiment::Converge,
            Command::SmallAmplitude(_) => Experiment::SmallAmplitude,
            Command::Solve(_) => Experiment::Solve,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::SpectralCheck(a)
            | Command::Commutator(a)
            | Command::Dispersive(a)
            | Command::Strichartz(a)
            | Command::Linfty(a)
            | Command::WeightedGrowth(a)
            | Command::Converge(a)
            | Command::SmallAmplitude(a)
            | Command::Solve(a) => a,
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, HarnessError> {
    let args = cli.command.args();
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    let expected = cli.command.expected();
    if cfg.experiment != expected {
        return Err(HarnessError::Config(format!(
            "config declares experiment '{}' but the subcommand is '{}'",
            cfg.experiment.tag(),
            expected.tag()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = args.threads {
        // a repeated build_global in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let started = std::time::Instant::now();
    let mut report = dnls::run(&cfg)?;
    report.runtimes_ms.push((
        "total".into(),
        started.elapsed().as_secs_f64() * 1e3,
    ));

    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(cfg.experiment.tag()));
    report.write(&out_dir, cfg.emit_plot)?;
    report.print_checks();
    println!(
        "{}: {} ({} records) -> {}",
        cfg.experiment.tag(),
        if report.pass() { "PASS" } else { "FAIL" },
        report.records.rows().len(),
        out_dir.display()
    );
    Ok(report.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
