use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use parahiggs::scenario::{generate_fixture, run_scenario, Kind, Report, Scenario, Status};
use parahiggs::{Error, Result};

#[derive(Parser)]
#[command(name = "parahiggs", version, about = "Run and generate parabolic Higgs scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files and print one report per file.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Truncation bounds, overriding the scenario.
        #[arg(long, num_args = 2, value_names = ["D1", "D2"])]
        window: Option<Vec<i32>>,
        /// Seed for randomized content, overriding the scenario.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the output to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Scenarios run in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Write a seeded scenario file.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path, window: Option<[i32; 2]>, seed: Option<u64>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut s = Scenario::parse(&text)?;
    if window.is_some() {
        s.window = window;
    }
    if seed.is_some() {
        s.seed = seed;
    }
    s.validate()?;
    Ok(s)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(p) = out {
        std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn render(reports: &[Report], format: Format) -> String {
    match format {
        _ if reports.is_empty() => String::new(),
        Format::Text => reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n"),
        Format::Json if reports.len() == 1 => reports[0].to_json(),
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
    }
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Run { scenarios, window, seed, out, format, jobs } => {
            let window = window.map(|w| [w[0], w[1]]);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            let results: Vec<Result<Report>> = pool.install(|| {
                scenarios.par_iter().map(|p| load(p, window, seed).map(|s| run_scenario(&s))).collect()
            });
            let mut status = Status::Pass;
            let mut reports = Vec::new();
            for (path, r) in scenarios.iter().zip(results) {
                match r {
                    Ok(r) => {
                        status = status.max(r.status);
                        reports.push(r);
                    }
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        status = Status::InputError;
                    }
                }
            }
            emit(&render(&reports, format), out.as_deref())?;
            Ok(status)
        }
        Command::Generate { kind, seed, size, out } => {
            let kind: Kind = kind.parse()?;
            emit(&generate_fixture(kind, seed, size)?.to_json(), out.as_deref())?;
            Ok(Status::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError.exit_code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(s) => ExitCode::from(s.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::InputError.exit_code() as u8)
        }
    }
}
