use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sharpconst::runner::{run, OutputFormat, RunConfig};
use sharpconst::verify::{verify, Suite, DEFAULT_SEED};
use sharpconst::Error;

/// Sharp constants of Markov–Bernstein–Nikolskii type inequalities.
#[derive(Debug, Parser)]
#[command(name = "sharpconst", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a sweep, limit estimate, extraction or verification task described by a JSON config.
    Run {
        /// Path to the JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Output path; overrides the config. Without any path the table goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; overrides the config.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Seed; overrides the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a named property suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidInput(_) | Error::Json(_) | Error::DimensionMismatch { .. } => EXIT_CONFIG,
        _ => EXIT_INTERNAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, jobs, out, format, seed } => run_command(config, jobs, out, format, seed),
        Command::Verify { suite, seed } => verify_command(&suite, seed),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run_command(
    path: PathBuf,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
) -> Result<u8, Error> {
    let mut config = RunConfig::load(&path)?;
    if let Some(out) = out {
        config.output.path = Some(out);
    }
    if let Some(format) = format {
        config.output.format = format.into();
    }
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let report = run(&config, jobs)?;
    match &config.output.path {
        Some(path) => {
            eprintln!("wrote {} rows to {}", report.rows.len(), path.display());
        }
        None => {
            std::io::stdout().write_all(&report.render(config.output.format)?)?;
        }
    }
    for row in report.rows.iter().filter(|r| r.error.is_some() || r.unstable) {
        match &row.error {
            Some(e) => eprintln!("n = {}: failed: {e}", row.n),
            None => eprintln!("n = {}: unstable under grid doubling (delta {:?})", row.n, row.stability_delta),
        }
    }
    if let Some(limit) = &report.limit {
        eprintln!(
            "limit estimate {:.10} (oscillation {:.3e}, converged: {})",
            limit.estimate, limit.oscillation, limit.converged
        );
    }
    for suite in &report.suites {
        eprintln!("{}: {}", suite.suite, if suite.passed() { "pass" } else { "FAIL" });
    }
    Ok(if report.failed_suites().is_empty() { 0 } else { EXIT_VERIFICATION })
}

fn verify_command(name: &str, seed: u64) -> Result<u8, Error> {
    let suites = if name == "all" { Suite::ALL.to_vec() } else { vec![name.parse::<Suite>()?] };
    let mut failed = false;
    for suite in suites {
        let report = verify(suite, seed)?;
        println!(
            "{}: {} ({} checks, {} failures, worst ratio {:.4e})",
            suite,
            if report.passed() { "pass" } else { "FAIL" },
            report.trials,
            report.failures,
            report.worst
        );
        for note in &report.notes {
            println!("  {note}");
        }
        failed |= !report.passed();
    }
    Ok(if failed { EXIT_VERIFICATION } else { 0 })
}
