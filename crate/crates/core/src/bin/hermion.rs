use clap::{Parser, Subcommand};
use hermion::cli_io::{run_evolve, run_norm, run_report, run_verify, write_verify, RunConfig};
use hermion::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hermion", version = hermion::cli_io::VERSION, about = "Hermite-spectral NLS solver and modulation-space diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured datum and write trace, plot CSV and snapshots.
    Evolve { config: PathBuf },
    /// Print the M^{p,q} norm of the configured datum.
    Norm {
        config: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
    },
    /// Run the invariant suite and write a pass/fail report.
    Verify {
        config: PathBuf,
        #[arg(long)]
        only: Option<String>,
    },
    /// Summarize a trace directory written by `evolve`.
    Report { trace_dir: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Format(_) => 3,
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::ExponentRange(_)
        | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Evolve { config } => {
            let s = run_evolve(&RunConfig::load(&config)?)?;
            println!("{} snapshots in {} (final l2 {:.12})", s.snapshots, s.output_dir.display(), s.final_l2);
            Ok(true)
        }
        Command::Norm { config, p, q } => {
            println!("{:.12e}", run_norm(&RunConfig::load(&config)?, p, q)?);
            Ok(true)
        }
        Command::Verify { config, only } => {
            let cfg = RunConfig::load(&config)?;
            let run = run_verify(&cfg, only.as_deref())?;
            for c in &run.report.checks {
                let verdict = if c.passed { "PASS" } else if c.hard { "FAIL" } else { "fail (soft)" };
                println!("{verdict:<11} {:<20} {}", c.id, c.detail.as_deref().unwrap_or(""));
            }
            let (report, _) = write_verify(&run, &cfg.output_path())?;
            println!("report: {}", report.display());
            Ok(run.report.passed)
        }
        Command::Report { trace_dir } => {
            print!("{}", run_report(&trace_dir)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hermion: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
