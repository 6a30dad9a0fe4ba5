use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symhyp_cli::config::{parse_config, RunConfig, MODELS};
use symhyp_cli::exec::{base_dir_of, default_output_dir, execute, Mode, Options, EXIT_ERROR};

#[derive(Parser)]
#[command(name = "symhyp", version, about = "Checks and Lax-Friedrichs runs for symmetric hyperbolic systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all checks and the configured simulation.
    Run {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Worker threads for per-cell loops (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Seed for randomized sample checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the checks that need no time integration.
    Check {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the shipped models and their parameters.
    Models,
}

fn load(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| {
        e.0.iter()
            .map(|err| format!("{}: {err}", path.display()))
            .collect::<Vec<_>>()
            .join("\n")
    })
}

fn start(mode: Mode, config: PathBuf, output_dir: Option<PathBuf>, threads: Option<usize>, seed: u64) -> u8 {
    let cfg = match load(&config) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("{msg}");
            return EXIT_ERROR as u8;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot start thread pool: {e}");
            return EXIT_ERROR as u8;
        }
    };
    let opts = Options {
        mode,
        output_dir: output_dir.unwrap_or_else(|| default_output_dir(&cfg)),
        base_dir: base_dir_of(&config),
        seed,
        threads: pool.current_num_threads(),
    };
    match pool.install(|| execute(&cfg, &opts)) {
        Ok(outcome) => {
            for v in &outcome.verdicts {
                let fmt = |x: Option<f64>| x.map(symhyp::output::format_float).unwrap_or_else(|| "-".into());
                println!("{:<40} {:<8} {:>24} {:>24}", v.name, v.status.as_str(), fmt(v.value), fmt(v.tolerance));
            }
            if let Some(e) = &outcome.error {
                eprintln!("error: {e}");
            }
            println!("artifacts in {}", opts.output_dir.display());
            outcome.exit_code as u8
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR as u8
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            config,
            output_dir,
            threads,
            seed,
        } => start(Mode::Run, config, output_dir, threads, seed),
        Command::Check { config, output_dir, seed } => start(Mode::Check, config, output_dir, Some(1), seed),
        Command::Models => {
            for m in MODELS {
                let keys = if m.keys.is_empty() { "-".to_string() } else { m.keys.join(", ") };
                println!("{:<12} {:<32} {}", m.name, keys, m.summary);
            }
            0
        }
    };
    ExitCode::from(code)
}
