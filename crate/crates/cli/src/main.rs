use std::process::ExitCode;

fn main() -> ExitCode {
    lindblad_pdp_cli::main_with_args(std::env::args_os())
}
