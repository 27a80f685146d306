fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(thermoq_cli::run(std::env::args_os()))
}
