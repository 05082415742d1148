use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jacalg_cli::{emit_json, emit_text, exit_code, parse, print::script_to_string, run, Options};

#[derive(Parser)]
#[command(name = "jacalg", version, about = "Exact checks of Jacobi algebroid structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check in a script and report.
    Check {
        file: PathBuf,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Base seed of randomized suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treat undecided checks as a distinct failure (exit 3).
        #[arg(long)]
        strict: bool,
    },
    /// Print a script in canonical form.
    Fmt { file: PathBuf },
}

fn load(file: &PathBuf) -> Result<jacalg_cli::ast::Script, u8> {
    let src = std::fs::read_to_string(file).map_err(|e| {
        eprintln!("{}: {}", file.display(), e);
        2u8
    })?;
    parse(&src).map_err(|e| {
        eprintln!("{}:{}: {}", file.display(), e.span, e.message);
        2u8
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, json, seed, strict } => {
            let script = match load(&file) {
                Ok(s) => s,
                Err(c) => return ExitCode::from(c),
            };
            let result = run(&script, &Options { seed });
            if json {
                print!("{}", emit_json(&result));
            } else {
                let color = std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none();
                print!("{}", emit_text(&result, color));
            }
            ExitCode::from(exit_code(&result, strict) as u8)
        }
        Command::Fmt { file } => match load(&file) {
            Ok(s) => {
                print!("{}", script_to_string(&s));
                ExitCode::SUCCESS
            }
            Err(c) => ExitCode::from(c),
        },
    }
}
