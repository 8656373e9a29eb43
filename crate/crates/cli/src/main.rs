use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ringmodes::job::{run_job, JobConfig, JobError};

/// Ring-mode field solver driven by JSON job files.
#[derive(Parser)]
#[command(name = "ringmodes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job and write <name>.csv and <name>.meta.json.
    Run {
        job: PathBuf,
        /// Output directory; overrides the job's `output` field.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a job file without running it.
    Validate { job: PathBuf },
}

fn run(cli: Cli) -> Result<(), JobError> {
    match cli.command {
        Command::Validate { job } => {
            let cfg = JobConfig::load(&job)?;
            println!(
                "{}: ok ({:?} job \"{}\")",
                job.display(),
                cfg.task,
                cfg.name
            );
        }
        Command::Run { job, out, threads } => {
            let cfg = JobConfig::load(&job)?;
            let dir = out
                .or_else(|| cfg.output.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            let files = run_job(&cfg, &dir, threads)?;
            println!("{}", files.csv.display());
            println!("{}", files.meta.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ringmodes: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
