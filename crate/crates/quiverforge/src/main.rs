use std::process::ExitCode;

fn main() -> ExitCode {
    quiverforge::cli::main()
}
