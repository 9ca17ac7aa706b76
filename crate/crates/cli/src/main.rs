use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use srclog_cli::commands::{cmd_eval, cmd_extract, cmd_parse, cmd_report};
use srclog_cli::config::Overrides;

/// Log template extraction from source code, with streaming matching and
/// clustering of log lines.
#[derive(Parser)]
#[command(name = "srclog", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Extract templates from a Java project into a repository
    Extract {
        project: PathBuf,
        /// Repository file to write (JSON lines)
        #[arg(short, long)]
        out: PathBuf,
        /// Directory for per-file static analysis reports
        #[arg(long)]
        reports: Option<PathBuf>,
        /// Write the summary as JSON here
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Match a log stream against a repository
    Parse {
        repository: PathBuf,
        /// Log file, or `-` for standard input
        input: Option<PathBuf>,
        /// Per-line results (JSON lines)
        #[arg(short, long)]
        out: PathBuf,
        /// Append black-box templates not yet in the repository
        #[arg(long)]
        append_blackbox: bool,
        /// Write match counts as JSON here
        #[arg(long)]
        counts: Option<PathBuf>,
    },
    /// Score parsed templates against ground truth
    Eval {
        /// Repository or plain template list
        parsed: PathBuf,
        /// Ground-truth templates, one per line
        truth: PathBuf,
        /// Log lines for timing online parsing
        #[arg(long)]
        logs: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
        /// Structured report output
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print static analysis reports
    Report {
        project: PathBuf,
        /// Only this file, relative to the project
        #[arg(long)]
        file: Option<PathBuf>,
        /// Emit the structured form
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = cli.overrides.resolve()?;
    match cli.command {
        Command::Extract {
            project,
            out,
            reports,
            summary,
        } => {
            let s = cmd_extract(&project, &config, &out, reports.as_deref())?;
            s.print();
            if let Some(path) = summary {
                std::fs::write(path, serde_json::to_string_pretty(&s)? + "\n")?;
            }
            if s.files > 0 && s.parsed_files == 0 {
                eprintln!("error: no file could be parsed");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Parse {
            repository,
            input,
            out,
            append_blackbox,
            counts,
        } => {
            let header = cli.overrides.header_pattern(&config)?;
            let s = cmd_parse(&repository, input.as_deref(), &config, header, &out, append_blackbox)?;
            s.print();
            if let Some(path) = counts {
                std::fs::write(path, serde_json::to_string_pretty(&s.counts)? + "\n")?;
            }
            if s.lossy_lines > 0 {
                eprintln!("warning: {} lines were not valid UTF-8", s.lossy_lines);
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            parsed,
            truth,
            logs,
            repetitions,
            out,
        } => {
            let header = cli.overrides.header_pattern(&config)?;
            let report = cmd_eval(&parsed, &truth, logs.as_deref(), repetitions, &config, header)?;
            print!("{}", report.table());
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { project, file, json } => {
            let (reports, errors) = cmd_report(&project, &config, file.as_deref())?;
            for e in &errors {
                eprintln!("warning: skipped {e}");
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                let single = reports.len() == 1;
                for r in &reports {
                    if !single {
                        println!("==> {} <==", r.unit);
                    }
                    print!("{}", r.render());
                    if !single {
                        println!();
                    }
                }
            }
            Ok(if errors.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
