use std::process::ExitCode;

use clap::Parser;
use zeta_cli::zeta::{run, ZetaArgs};
use zeta_cli::{configure_threads, finish};

fn main() -> ExitCode {
    let args = ZetaArgs::parse();
    if let Err(e) = configure_threads(args.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(e.code);
    }
    finish(&args, args.format, || run(&args))
}
