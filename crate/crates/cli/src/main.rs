use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use plocal::battery::run_battery;
use plocal::characters::FieldSpec;
use plocal::groupfile::{parse_group, GroupDocument};
use plocal::metacyclic::{construct, MetacyclicPresentation};
use plocal::report::{analyze, render_text};

#[derive(Parser)]
#[command(name = "plocal", version, about = "p-local invariants of finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a group file at a prime.
    Analyze {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, short)]
        prime: u64,
        /// `closed` or the size of a finite field.
        #[arg(long, default_value = "closed")]
        field: String,
        /// Write the JSON report here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print the text rendering instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Run a built-in suite.
    Battery {
        #[arg(long, default_value = "default")]
        suite: String,
        /// Print the full run as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Emit a metacyclic group as a group file.
    Metacyclic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        /// Defaults to `m` (split).
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

enum Outcome {
    Clean,
    Mismatch,
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => print_stdout(text),
    }
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{}", text.trim_end()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Analyze { group, prime, field, output, text } => {
            let doc = fs::read_to_string(&group).with_context(|| format!("reading {}", group.display()))?;
            let g = parse_group(&doc).with_context(|| format!("parsing {}", group.display()))?;
            let field = FieldSpec::parse(&field, prime)?;
            let report = analyze(&g, prime, field)?;
            let rendered = if text { render_text(&report) } else { report.to_json() };
            emit(&rendered, output.as_ref())?;
            if report.mismatch {
                eprintln!("MISMATCH: {}", report.mismatches.join("; "));
                return Ok(Outcome::Mismatch);
            }
            Ok(Outcome::Clean)
        }
        Command::Battery { suite, json } => {
            let run = run_battery(&suite)?;
            if json {
                print_stdout(&serde_json::to_string_pretty(&run)?)?;
            } else {
                print_stdout(&run.matrix())?;
            }
            if run.any_error() {
                anyhow::bail!("some battery items failed to run");
            }
            Ok(if run.all_passed() { Outcome::Clean } else { Outcome::Mismatch })
        }
        Command::Metacyclic { p, m, n, l, q, output } => {
            let pres = MetacyclicPresentation::new(p, m, n, l, q.unwrap_or(m))?;
            let mg = construct(&pres)?;
            let name = format!("metacyclic({p},{m},{n},{l},{})", pres.q);
            let doc = GroupDocument::from_group(&mg.group.with_name(name));
            emit(&doc.to_json(), output.as_ref())?;
            Ok(Outcome::Clean)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
