use std::io::Write;

fn main() {
    let outcome = positroid_cli::run(std::env::args_os());
    if outcome.is_report {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(outcome.payload.as_bytes());
        let _ = stdout.flush();
    } else {
        eprint!("{}", outcome.payload);
    }
    std::process::exit(outcome.exit_code);
}
