use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mfw::corpus::{to_program_text, FamilySpec};
use mfw::linsys::DEFAULT_CAP;
use mfw::run::{check_text, exit_code, render, run_text, Format, RunOptions};
use mfw::Field;

/// Exact graded matrix factorization engine.
#[derive(Parser)]
#[command(name = "mfw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every query in a program.
    Run {
        file: PathBuf,
        /// json, csv or text.
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        /// Override the program's field: Q or GF:p.
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
        /// Worker threads for table cells.
        #[arg(long)]
        jobs: Option<usize>,
        /// Maximum number of unknowns in a single linear system.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Parse and validate a program without running it.
    Check {
        file: PathBuf,
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
    },
    /// Print the A-series program for f = x^(n+1), F = x^(n+1) + w^c, deg w = a.
    Corpus {
        /// Family tag, e.g. A3.
        family: String,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        a: u32,
        #[arg(long, value_parser = parse_field, default_value = "Q")]
        field: Field,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: mfw::Error| e.to_string())
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).map_err(|e| e.to_string())
}

fn read(file: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(file).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", file.display());
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.command {
        Command::Run {
            file,
            format,
            field,
            jobs,
            cap,
        } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let options = RunOptions {
                format,
                field,
                jobs,
                cap,
            };
            let outcome = run_text(&text, &options);
            match &outcome {
                Ok(outs) => {
                    print!("{}", render(outs, format));
                    for (k, o) in outs.iter().enumerate().filter(|(_, o)| o.failed) {
                        eprintln!("FAIL: query {}: {}", k + 1, o.query);
                    }
                }
                Err(e) => eprintln!("error: {}: {e}", file.display()),
            }
            ExitCode::from(exit_code(&outcome) as u8)
        }
        Command::Check { file, field } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match check_text(&text, field) {
                Ok((_, queries)) => {
                    println!("ok: {} queries", queries.len());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", file.display());
                    ExitCode::from(if e.is_syntax() { 1 } else { 2 })
                }
            }
        }
        Command::Corpus {
            family,
            c,
            a,
            field,
        } => {
            let n = family
                .strip_prefix('A')
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| format!("unknown family `{family}`; expected A<n>"))
                .and_then(|n| FamilySpec::new(n, c, a).map_err(|e| e.to_string()));
            match n.and_then(|spec| to_program_text(spec, field).map_err(|e| e.to_string())) {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
