use std::io;
use std::panic;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = panic::catch_unwind(|| {
        let stdin = io::stdin();
        let stdout = io::stdout();
        let stderr = io::stderr();
        modfo::cli::run(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
    });
    // A panic has already printed its message; report it as an internal error.
    let code = result.unwrap_or(2);
    ExitCode::from(code as u8)
}
