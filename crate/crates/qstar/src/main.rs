use std::process::ExitCode;

fn main() -> ExitCode {
    match qstar::cli::run_from(std::env::args_os()) {
        Ok(outcome) => outcome.code(),
        Err(e) => {
            eprintln!("qstar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
