use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dualcast::harness::{forecast_tail, write_forecast_csv, write_outputs, ExperimentConfig, SavedModel};
use dualcast::selfcheck::run_selfcheck;
use dualcast::series::{read_series_csv, write_labeled_csv};
use dualcast::{run_experiment, BenchmarkModel, Error, Result, TimeSeries};

#[derive(Parser)]
#[command(name = "dualcast", version, about = "Dual neural-network forecaster with predictability pre-selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a labelled benchmark series as `index,value,label` CSV.
    Generate {
        /// Benchmark model: 1, 2 or 3.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        model: u8,
        #[arg(long, default_value_t = 1200)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a rolling-window experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Forecast the tail of a series with a saved dual model.
    Forecast {
        /// Directory holding `dual_model.json`.
        #[arg(long)]
        model_dir: PathBuf,
        /// Raw (untransformed) series CSV.
        #[arg(long)]
        input: PathBuf,
        /// Number of events: `tail - 1` known ones plus the next unseen one.
        #[arg(long, default_value_t = 10)]
        tail: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in sanity checks.
    Selfcheck,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Generate {
            model,
            length,
            seed,
            out,
        } => {
            let model = BenchmarkModel::from_number(model).expect("range checked by clap");
            let series: TimeSeries<f64> = model.generate(length, seed)?;
            with_output(out.as_deref(), |w| write_labeled_csv(&series, w))
        }
        Command::Run { config, out_dir } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(dir) = out_dir {
                config.output_dir = dir;
            }
            let result = run_experiment(&config)?;
            write_outputs(&result, &config.output_dir)?;
            print!("{}", dualcast::harness::report_text(&result));
            eprintln!("outputs written to {}", config.output_dir.display());
            Ok(())
        }
        Command::Forecast {
            model_dir,
            input,
            tail,
            out,
        } => {
            let saved = SavedModel::load(&model_dir)?;
            let raw: TimeSeries<f64> = read_series_csv(&input)?;
            let rows = forecast_tail(&saved, &raw, tail)?;
            with_output(out.as_deref(), |w| write_forecast_csv(&rows, w))
        }
        Command::Selfcheck => {
            let results = run_selfcheck();
            let failed = results.iter().filter(|r| !r.passed).count();
            for r in &results {
                println!("{} {}", if r.passed { "ok  " } else { "FAIL" }, r.name);
            }
            println!("{} checks, {} failed", results.len(), failed);
            if failed > 0 {
                return Err(Error::InvalidArgument(format!("{failed} self-checks failed")));
            }
            Ok(())
        }
    }
}

fn with_output<F>(path: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Error::io(p, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w).map_err(|e| Error::io("<stdout>", e))
        }
    }
}
