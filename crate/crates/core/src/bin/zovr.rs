use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zovr::experiment::{print_summary, run_experiment, ExperimentConfig, OUTPUT_DIR_ENV};
use zovr::optimizers::{select_params, Corollary};
use zovr::parallel::Execution;
use zovr::verification::{run_suite, Suite};

#[derive(Parser)]
#[command(name = "zovr", version, about = "Zeroth-order variance-reduced optimization benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long, env = OUTPUT_DIR_ENV)]
        output_dir: Option<PathBuf>,
    },
    /// Run a verification suite: estimators, lemmas, pl or prox.
    Verify {
        suite: String,
        /// Run Monte-Carlo shards on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Print the hyperparameters a selection rule gives.
    Params {
        /// cor1, cor2, cor3, cor4 or theorem2.
        corollary: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long = "K", alias = "k")]
        k: usize,
        #[arg(long = "L", alias = "l", default_value_t = 1.0)]
        l: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> zovr::Result<ExitCode> {
    match cli.command {
        Command::Run { config, output_dir } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            let out = run_experiment(&cfg)?;
            print_summary(&mut std::io::stdout().lock(), &out).map_err(|e| zovr::Error::Config(e.to_string()))?;
            println!("wrote {} traces to {}", out.traces.len(), out.output_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, sequential } => {
            let suite: Suite = suite.parse()?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let checks = run_suite(suite, exec)?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{}: {} checks, {failed} failed", suite.name(), checks.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Params { corollary, n, d, k, l } => {
            let rule: Corollary = corollary.parse()?;
            if n == 0 || d == 0 || k == 0 || l.is_nan() || l <= 0.0 {
                return Err(zovr::Error::InvalidHyperParams("n, d, K and L must be positive".into()));
            }
            println!("{}", select_params(rule, n, d, k, l));
            Ok(ExitCode::SUCCESS)
        }
    }
}
