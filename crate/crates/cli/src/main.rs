use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;
use splitreduc_cli::args::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let mut stdout = BufWriter::new(io::stdout().lock());
    match splitreduc_cli::run(&cli, &argv, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            drop(stdout);
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
