use std::io::{self, IsTerminal};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let tty = stdout.is_terminal();
    let code = derange::run(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut io::stderr().lock(),
        tty,
    );
    ExitCode::from(code as u8)
}
