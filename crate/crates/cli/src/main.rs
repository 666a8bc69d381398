//! `klo`: exit code 0 on success, 1 when a verification fails, 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use klo_cli::commands::{self, CommandError, Output};
use klo_cli::{Format, RunConfig, Suite};

#[derive(Parser)]
#[command(name = "klo", version, about = "Kazhdan-Laumon category O combinatorics and periodic Hecke module checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cartan type, e.g. A2, B2, G2.
    #[arg(long = "type", global = true, default_value = "A2")]
    type_label: String,
    /// Truncation floor N (at least 4).
    #[arg(long, global = true, default_value_t = 12, allow_negative_numbers = true)]
    floor: i32,
    /// Window radius R in hyperplanes (at least l(w0) + 1).
    #[arg(long, global = true)]
    radius: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Specialization p/q used to re-confirm ranks.
    #[arg(long = "v-value", global = true)]
    v_value: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Number of simple objects, with the per-w breakdown.
    Count,
    /// Restriction table of the simple objects (type A2).
    Table,
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// SVG picture of the simple objects as alcoves (rank 2).
    Figure,
}

fn run(cli: &Cli) -> Result<Output, CommandError> {
    let cfg = RunConfig::new(&cli.type_label, cli.floor, cli.radius, cli.format, cli.out.clone(), cli.seed, cli.v_value.as_deref())?;
    match &cli.command {
        Command::Count => commands::count(&cfg),
        Command::Table => commands::table(&cfg),
        Command::Verify { suite } => commands::verify(*suite, &cfg),
        Command::Figure => commands::figure(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(summary) = &out.summary {
        eprint!("{summary}");
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
