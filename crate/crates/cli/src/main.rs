use std::process::ExitCode;

fn main() -> ExitCode {
    colorcert_cli::main_entry()
}
