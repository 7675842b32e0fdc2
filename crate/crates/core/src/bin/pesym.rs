use clap::Parser;

fn main() {
    std::process::exit(pesym::cli::main_with(pesym::cli::Cli::parse()));
}
