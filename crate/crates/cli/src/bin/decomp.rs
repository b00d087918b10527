use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use zeta_cli::decomp::{run, DecompCommand};
use zeta_cli::{configure_threads, finish, Format};

/// Decomposition spaces: checking, nerves and incidence algebras.
#[derive(Debug, Parser, Serialize)]
#[command(name = "decomp", version)]
struct DecompArgs {
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: DecompCommand,
}

fn main() -> ExitCode {
    let args = DecompArgs::parse();
    if let Err(e) = configure_threads(args.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(e.code);
    }
    finish(&args, args.format, || run(&args.command))
}
