use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use nncp_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(text) => {
            if !text.is_empty() {
                // a closed pipe (e.g. `| head`) is not an error
                let _ = writeln!(io::stdout().lock(), "{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
