use std::io;
use std::process::ExitCode;

use jaccomb::cli;

fn main() -> ExitCode {
    if let Err(e) = cli::configure_threads() {
        eprintln!("error: {}", e.0);
        return ExitCode::from(cli::EXIT_INVALID as u8);
    }
    let code = cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
