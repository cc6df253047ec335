use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = match std::panic::catch_unwind(|| ordtop_cli::run(std::env::args_os())) {
        Ok(o) => o,
        // The panic message has already been printed by the default hook.
        Err(_) => return ExitCode::from(2),
    };
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
