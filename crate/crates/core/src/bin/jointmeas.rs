use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jointmeas::cli::{self, RunOptions};

#[derive(Parser)]
#[command(name = "jointmeas", version, about = "Joint measurability of finite-dimensional POVMs")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its report.
    Run {
        scenario: PathBuf,
        /// Report path; the report goes to stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance override, e.g. `feas=1e-7`. Repeatable.
        #[arg(long = "tol-override", value_name = "KEY=VAL", value_parser = parse_override)]
        tol_override: Vec<(String, f64)>,
        /// Add wall-clock timing to the report (breaks byte-for-byte reproducibility).
        #[arg(long)]
        timing: bool,
    },
    /// Write the canonical scenario corpus and its expectation table.
    Examples { dir: PathBuf },
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    cli::parse_override(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            // --help and --version come through here too
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match args.command {
        Command::Run {
            scenario,
            output,
            seed,
            tol_override,
            timing,
        } => {
            let opts = RunOptions {
                seed,
                tol_overrides: tol_override,
                timing,
            };
            let out = cli::run_path(&scenario, &opts);
            for line in &out.diagnostics {
                eprintln!("{line}");
            }
            if let Some(report) = &out.report {
                let text = report.to_json();
                match &output {
                    Some(path) => {
                        if let Err(e) = std::fs::write(path, text) {
                            eprintln!("{}: {e}", path.display());
                            return ExitCode::from(3);
                        }
                    }
                    None => print!("{text}"),
                }
            }
            ExitCode::from(out.status.code() as u8)
        }
        Command::Examples { dir } => match cli::generate_examples(&dir) {
            Ok(files) => {
                eprintln!("wrote {} files to {}", files.len(), dir.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{}: {e}", dir.display());
                ExitCode::from(3)
            }
        },
    }
}
