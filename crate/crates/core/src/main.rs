use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nilcoh::cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let out = run(&config);
    if out.code == 0 || out.code == 1 {
        print!("{}", out.text);
        let _ = std::io::stdout().flush();
    } else {
        eprint!("{}", out.text);
    }
    ExitCode::from(out.code as u8)
}
