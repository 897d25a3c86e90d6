use std::process::ExitCode;

fn main() -> ExitCode {
    lie2kit::cli::run()
}
