use std::process::ExitCode;

fn main() -> ExitCode {
    feasgames::cli::main()
}
