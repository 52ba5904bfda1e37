use clap::Parser;

fn main() -> std::process::ExitCode {
    qha_core::cli::main_with(qha_core::cli::Cli::parse())
}
