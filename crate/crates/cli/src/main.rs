use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qgt_cli::commands::{self, CliError, Input, Outcome};
use qgt_core::exactalg::NumberSystem;

#[derive(Parser)]
#[command(name = "qgt", version, about = "Gelfand-Tsetlin modules for quantum and classical gl(n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Window bound, overriding the document.
    #[arg(long, global = true)]
    bound: Option<u32>,
    /// Sampler seed, overriding the document.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number system, overriding the document.
    #[arg(long, global = true)]
    mode: Option<Mode>,
    /// Verification suite for `verify`.
    #[arg(long, global = true, default_value = "all")]
    suite: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Quantum,
    Classical,
}

#[derive(Subcommand)]
enum Command {
    /// Report admissibility, components and violated conditions.
    CheckAdmissible { file: String },
    /// Apply one generator to one basis vector, e.g. `act m.spec e1 'T[0,1,0]'`.
    Act { file: String, generator: String, vector: String },
    /// Run verification suites; exit 1 if any fails.
    Verify { file: String },
    /// List admissible relation sets for n <= 3.
    Enumerate { n: usize },
    /// Group the window basis into generalized eigenspaces.
    Blocks { file: String },
}

fn load(cli: &Cli, file: &str) -> Result<Input, CliError> {
    let mut input = Input::load(file)?;
    if let Some(b) = cli.bound {
        input.doc.bound = b;
    }
    if let Some(s) = cli.seed {
        input.doc.seed = s;
    }
    if let Some(m) = cli.mode {
        input.doc.mode = match m {
            Mode::Quantum => NumberSystem::Quantum,
            Mode::Classical => NumberSystem::Classical,
        };
    }
    Ok(input)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::CheckAdmissible { file } => commands::check_admissible(&load(cli, file)?),
        Command::Act { file, generator, vector } => commands::act(&load(cli, file)?, generator, vector),
        Command::Verify { file } => commands::verify(&load(cli, file)?, &cli.suite),
        Command::Enumerate { n } => commands::enumerate(*n),
        Command::Blocks { file } => commands::blocks(&load(cli, file)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome { text, passed }) => {
            // a closed pipe (`qgt ... | head`) is not an error
            if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
                if e.kind() != ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
