use std::io;
use std::process::ExitCode;

use clap::Parser;
use rosa_lts::{run, CliArgs};

fn main() -> ExitCode {
    let args = CliArgs::parse();
    let code = run(&args, &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code)
}
