use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use idamp::bench::{bench_csv, bench_permanent};
use idamp::experiment::{parse_experiment, run_experiment_for};
use idamp::sampling::sample_outcomes;
use idamp::verify::{format_report_table, run_full_derivation_suite, DEFAULT_SEED, DEFAULT_TOLERANCE};
use idamp::ExchangeClass;

#[derive(Parser)]
#[command(name = "idamp", version, about = "Transition amplitudes for identical particles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an experiment file and print one row per final configuration and class.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        output: RunFormat,
        /// Comma-separated subset of boson, fermion, dist; defaults to the file's list.
        #[arg(long, value_delimiter = ',')]
        classes: Vec<ExchangeClass>,
    },
    /// Run the derivation checks; exits non-zero if any check fails.
    Verify {
        #[arg(long, env = "IDAMP_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value = "table")]
        output: VerifyFormat,
    },
    /// Draw final configurations according to the computed probabilities.
    Sample {
        file: PathBuf,
        #[arg(long)]
        draws: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        class: ExchangeClass,
    },
    /// Time the Ryser permanent for n = 1..=max-n.
    Bench {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

fn load(file: &PathBuf) -> anyhow::Result<idamp::experiment::ExperimentSpec> {
    let bytes = std::fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    parse_experiment(&bytes).with_context(|| format!("invalid experiment {}", file.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Run { file, output, classes } => {
            let spec = load(&file)?;
            let classes = if classes.is_empty() { spec.exchange_classes.clone() } else { classes };
            let table = run_experiment_for(&spec, &classes)?;
            match output {
                RunFormat::Csv => print!("{}", table.to_csv()),
                RunFormat::Json => println!("{}", table.to_json()),
            }
            Ok(true)
        }
        Command::Verify { seed, tol, output } => {
            if tol.is_nan() || tol < 0.0 {
                bail!("tolerance must be a non-negative number");
            }
            let reports = run_full_derivation_suite(seed, tol)?;
            match output {
                VerifyFormat::Table => print!("{}", format_report_table(&reports)),
                VerifyFormat::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
            }
            Ok(reports.iter().all(|r| r.pass))
        }
        Command::Sample { file, draws, seed, class } => {
            let spec = load(&file)?;
            let counts = sample_outcomes(&spec, class, draws, seed)?;
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["final", "count"])?;
            for (cfg, count) in counts {
                w.write_record([cfg.to_string(), count.to_string()])?;
            }
            w.flush()?;
            Ok(true)
        }
        Command::Bench { max_n, reps } => {
            print!("{}", bench_csv(&bench_permanent(max_n, reps)?));
            Ok(true)
        }
    }
}
